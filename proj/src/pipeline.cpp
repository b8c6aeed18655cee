#include "scrub/pipeline.hpp"

#include <fnmatch.h>

#include <algorithm>

#include <spdlog/spdlog.h>

#include "scrub/error.hpp"

namespace scrub {

namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
public:
    StageTimer(RunLog* log, std::string name) : log_(log), name_(std::move(name)), start_(Clock::now()) {}
    ~StageTimer() {
        if (!log_) return;
        const std::chrono::duration<double, std::milli> ms = Clock::now() - start_;
        log_->stage_ms.emplace_back(name_, ms.count());
    }
    StageTimer(const StageTimer&) = delete;
    StageTimer& operator=(const StageTimer&) = delete;

private:
    RunLog* log_;
    std::string name_;
    Clock::time_point start_;
};

void count_hits(RunLog* log, const std::vector<Finding>& findings) {
    if (!log) return;
    for (const auto& f : findings) ++log->detector_hits[std::string(to_string(f.detector))];
}

std::vector<Finding> without_info(std::vector<Finding> findings) {
    findings.erase(std::remove_if(findings.begin(), findings.end(),
                                  [](const Finding& f) { return f.severity == Severity::INFO; }),
                   findings.end());
    return findings;
}

// Head path -> blob id, grouped by blob so shared content is treated once.
std::map<std::string, std::vector<std::string>> head_paths_by_blob(const RepoModel& repo) {
    std::map<std::string, std::vector<std::string>> out;
    if (repo.empty()) return out;
    for (const auto& [path, blob] : repo.head_commit().tree) out[blob].push_back(path);
    return out;
}

// Smallest path each blob appears under anywhere in history.
std::map<std::string, std::string> representative_paths(const RepoModel& repo) {
    std::map<std::string, std::string> out;
    for (const auto& [id, commit] : repo.commits()) {
        for (const auto& [path, blob] : commit.tree) {
            auto [it, inserted] = out.try_emplace(blob, path);
            if (!inserted && path < it->second) it->second = path;
        }
    }
    return out;
}

bool is_author_mask(const std::string& value) {
    return value.empty() || is_mask_artifact(value);
}

}  // namespace

const std::vector<std::string>& default_deny_globs() {
    static const std::vector<std::string> globs{"*.pem", "*.p12", "*.key", "id_rsa*", ".env", "*.keystore"};
    return globs;
}

bool matches_deny_glob(const std::string& path, const std::vector<std::string>& globs) {
    const std::string base(base_name(path));
    for (const auto& g : globs) {
        const std::string& target = g.find('/') == std::string::npos ? base : path;
        if (fnmatch(g.c_str(), target.c_str(), 0) == 0) return true;
    }
    return false;
}

bool is_gate_fatal(const Finding& f) {
    if (f.severity == Severity::INFO) return false;
    return f.category == Category::SECRET || f.severity == Severity::CRITICAL || f.severity == Severity::HIGH ||
           f.category == Category::INTERNAL_DOMAIN || f.category == Category::PRIVATE_IP;
}

nlohmann::json GateReport::to_json() const {
    nlohmann::ordered_json j;
    j["passed"] = passed;
    j["exit_code"] = exit_code;
    std::map<std::string, std::size_t> by_severity;
    auto residual_json = nlohmann::ordered_json::array();
    for (const auto& f : residual) {
        ++by_severity[std::string(to_string(f.severity))];
        // No matched text; reports must not carry originals.
        residual_json.push_back({{"detector", to_string(f.detector)},
                                 {"category", to_string(f.category)},
                                 {"severity", to_string(f.severity)},
                                 {"surface", to_string(f.origin.surface)},
                                 {"object", f.origin.object},
                                 {"field", f.origin.field},
                                 {"begin", f.begin},
                                 {"end", f.end},
                                 {"fatal", is_gate_fatal(f)}});
    }
    j["residual_by_severity"] = by_severity;
    j["residual"] = residual_json;
    j["unmasked_authors"] = unmasked_authors.size();
    j["denied_paths"] = denied_paths;
    auto skipped = nlohmann::ordered_json::array();
    for (Detector d : skipped_detectors) skipped.push_back(to_string(d));
    j["skipped_detectors"] = skipped;
    return j;
}

nlohmann::json RunLog::to_json() const {
    nlohmann::ordered_json j;
    auto stages = nlohmann::ordered_json::array();
    for (const auto& [name, ms] : stage_ms) stages.push_back({{"stage", name}, {"ms", ms}});
    j["stages"] = stages;
    j["detector_hits"] = detector_hits;
    auto skipped = nlohmann::ordered_json::array();
    for (Detector d : skipped_detectors) skipped.push_back(to_string(d));
    j["skipped_detectors"] = skipped;
    j["outputs"] = outputs;
    return j;
}

Pipeline::Pipeline(PipelineConfig config)
    : config_(std::move(config)),
      salt_(config_.salt ? *config_.salt : throw Error(ErrorCode::EMPTY_SALT, "pipeline needs a salt")),
      lang_map_(config_.lang_map ? config_.lang_map
                                 : std::shared_ptr<const LanguageMap>(&LanguageMap::builtin(), [](const LanguageMap*) {})) {
    std::shared_ptr<NerBackend> ner = config_.ner_backend;
    if (!ner && !config_.ner.url.empty()) {
        ner = std::make_shared<HttpNerBackend>(config_.ner.url, config_.ner.timeout_seconds);
    }
    scanner_ = std::make_unique<Scanner>(config_.scanner, std::move(ner), std::make_shared<const NerConfig>(config_.ner));
}

std::set<Detector> Pipeline::active(const std::set<Detector>& wanted) const {
    std::set<Detector> out = wanted;
    if (!scanner_->has_ner() || scanner_->ner_skipped()) out.erase(Detector::NER);
    return out;
}

std::vector<Finding> Pipeline::scan_file(const std::string& path, std::string_view content,
                                         const std::set<Detector>& detectors, Surface surface,
                                         const std::string& object) const {
    const Origin origin{surface, object, "", path};
    const FileClass cls = lang_map_->classify(path, content);
    if (cls == FileClass::BINARY) return {};
    if (cls != FileClass::CODE) return scanner_->scan(content, origin, detectors);

    const std::string language = lang_map_->language_for(path);
    std::vector<Zone> zones;
    try {
        zones = extract_zones(content, language, *lang_map_);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::UNSUPPORTED_LANGUAGE) throw;
        spdlog::info("{}: {}; not scanned", path, e.what());
        return {};
    }
    std::vector<std::pair<std::size_t, std::size_t>> windows;
    for (const auto& z : zones) windows.emplace_back(z.body_begin, z.body_end);
    return scanner_->scan_windows(content, windows, origin, detectors);
}

std::vector<Finding> Pipeline::scan_history_blob(const std::string& blob_id, const std::string& path,
                                                 std::string_view content, const std::set<Detector>& detectors) const {
    return scanner_->scan(content, Origin{Surface::HISTORY_BLOB, blob_id, "", path}, detectors);
}

Pipeline::Plan Pipeline::plan_working_tree(const RepoModel& repo, RunLog* log) const {
    Plan plan;
    const auto detectors = active(config_.detectors);
    for (const auto& [blob_id, paths] : head_paths_by_blob(repo)) {
        const Blob& blob = repo.blob(blob_id);
        if (!blob.is_text()) continue;
        std::vector<Finding> findings;
        for (const auto& path : paths) {
            for (auto& f : scan_file(path, blob.bytes(), detectors, Surface::WORKING_TREE, path)) {
                f.origin.object = blob_id;
                findings.push_back(std::move(f));
            }
        }
        count_hits(log, findings);
        const auto chosen = resolve_overlaps(findings);
        if (chosen.empty()) continue;
        Replacement r = apply_replacements(blob.bytes(), chosen, salt_);
        plan.manifest.merge(r.manifest);
        plan.blob_content.emplace(blob_id, std::move(r.text));
    }
    return plan;
}

Pipeline::Plan Pipeline::plan_history_blobs(const RepoModel& repo, RunLog* log) const {
    Plan plan;
    const auto head = head_paths_by_blob(repo);
    const auto paths = representative_paths(repo);
    std::set<Detector> detectors;
    std::set_intersection(config_.detectors.begin(), config_.detectors.end(), history_detectors().begin(),
                          history_detectors().end(), std::inserter(detectors, detectors.end()));
    for (const auto& blob_id : unique_blobs(repo)) {
        if (head.count(blob_id)) continue;
        const Blob& blob = repo.blob(blob_id);
        if (!blob.is_text()) continue;
        auto pit = paths.find(blob_id);
        const std::string path = pit == paths.end() ? std::string() : pit->second;
        auto findings = scan_history_blob(blob_id, path, blob.bytes(), detectors);
        count_hits(log, findings);
        const auto chosen = resolve_overlaps(findings);
        if (chosen.empty()) continue;
        Replacement r = apply_replacements(blob.bytes(), chosen, salt_);
        plan.manifest.merge(r.manifest);
        plan.blob_content.emplace(blob_id, std::move(r.text));
    }
    return plan;
}

RewriteCallbacks Pipeline::history_callbacks(RedactionManifest& manifest, RunLog* log) const {
    RewriteCallbacks cbs;
    cbs.name_cb = [this, &manifest](const std::string& name) {
        if (is_author_mask(name)) return name;
        std::string masked = mask_for(Category::AUTHOR_NAME, name, salt_);
        manifest.record(Category::AUTHOR_NAME, name, masked, Surface::COMMIT_META);
        return masked;
    };
    cbs.email_cb = [this, &manifest](const std::string& email) {
        if (is_author_mask(email)) return email;
        std::string masked = mask_for(Category::AUTHOR_EMAIL, email, salt_);
        manifest.record(Category::AUTHOR_EMAIL, email, masked, Surface::COMMIT_META);
        return masked;
    };
    auto detectors = active(config_.detectors);
    cbs.message_cb = [this, &manifest, log, detectors](const std::string& message) {
        auto findings = scanner_->scan(message, Origin{Surface::COMMIT_META, "", "message", ""}, active(detectors));
        count_hits(log, findings);
        const auto chosen = resolve_overlaps(findings);
        if (chosen.empty()) return message;
        Replacement r = apply_replacements(message, chosen, salt_);
        manifest.merge(r.manifest);
        return r.text;
    };
    const auto globs = config_.deny_globs;
    cbs.filename_cb = [globs](const std::string& path) { return !matches_deny_glob(path, globs); };
    return cbs;
}

void Pipeline::verify_working_tree(const RepoModel& repo, const Plan* plan) const {
    if (repo.empty()) return;
    const auto detectors = active(config_.detectors);
    for (const auto& [path, blob_id] : repo.head_commit().tree) {
        const Blob& blob = repo.blob(blob_id);
        if (!blob.is_text()) continue;
        std::string_view content = blob.bytes();
        if (plan) {
            if (auto it = plan->blob_content.find(blob_id); it != plan->blob_content.end()) content = it->second;
        }
        auto residual = without_info(scan_file(path, content, detectors, Surface::WORKING_TREE, path));
        if (!residual.empty()) {
            const Finding& f = residual.front();
            throw Error(ErrorCode::POST_SCAN_RESIDUAL,
                        path + ": " + std::to_string(residual.size()) + " finding(s) survive masking, first " +
                            std::string(to_string(f.category)) + " at byte " + std::to_string(f.begin));
        }
    }
}

std::vector<Finding> Pipeline::scan_working_tree(const RepoModel& repo) const {
    std::vector<Finding> out;
    if (repo.empty()) return out;
    const auto detectors = active(config_.detectors);
    for (const auto& [path, blob_id] : repo.head_commit().tree) {
        const Blob& blob = repo.blob(blob_id);
        if (!blob.is_text()) continue;
        auto found = scan_file(path, blob.bytes(), detectors, Surface::WORKING_TREE, path);
        out.insert(out.end(), found.begin(), found.end());
    }
    return canonical_order(std::move(out));
}

SanitizeResult Pipeline::sanitize_working_tree(const RepoModel& repo) const {
    if (repo.empty()) return {repo, {}};
    Plan plan = plan_working_tree(repo, nullptr);
    RewriteCallbacks cbs;
    cbs.blob_cb = [&plan](const Blob& b) {
        auto it = plan.blob_content.find(b.id());
        return it == plan.blob_content.end() ? b.bytes() : it->second;
    };
    RepoModel out = rewrite_history(repo, cbs).repo;
    verify_working_tree(out, nullptr);
    return {std::move(out), std::move(plan.manifest)};
}

SanitizeResult Pipeline::sanitize_history(const RepoModel& repo) const {
    if (repo.empty()) return {repo, {}};
    Plan plan = plan_history_blobs(repo, nullptr);
    RedactionManifest manifest;
    RewriteCallbacks cbs = history_callbacks(manifest, nullptr);
    cbs.blob_cb = [&plan](const Blob& b) {
        auto it = plan.blob_content.find(b.id());
        return it == plan.blob_content.end() ? b.bytes() : it->second;
    };
    RepoModel out = rewrite_history(repo, cbs).repo;
    manifest.merge(plan.manifest);
    return {std::move(out), std::move(manifest)};
}

GateReport Pipeline::gate_check(const RepoModel& repo) const {
    GateReport report;
    const auto wanted = all_detectors();
    if (!repo.empty()) {
        const auto detectors = active(wanted);
        const Commit& head = repo.head_commit();
        std::set<std::string> head_blobs;
        for (const auto& [path, blob_id] : head.tree) {
            head_blobs.insert(blob_id);
            const Blob& blob = repo.blob(blob_id);
            if (!blob.is_text()) continue;
            auto found = scan_file(path, blob.bytes(), detectors, Surface::WORKING_TREE, path);
            report.residual.insert(report.residual.end(), found.begin(), found.end());
        }

        std::set<std::string> bad_authors;
        for (const auto& [id, commit] : repo.commits()) {
            auto found = scanner_->scan(commit.message, Origin{Surface::COMMIT_META, id, "message", ""}, active(detectors));
            report.residual.insert(report.residual.end(), found.begin(), found.end());
            if (!is_author_mask(commit.author_name)) bad_authors.insert(id + ":author_name");
            if (!is_author_mask(commit.author_email)) bad_authors.insert(id + ":author_email");
            for (const auto& [path, blob] : commit.tree) {
                if (matches_deny_glob(path, config_.deny_globs)) report.denied_paths.push_back(id + ":" + path);
            }
        }
        report.unmasked_authors.assign(bad_authors.begin(), bad_authors.end());

        const auto paths = representative_paths(repo);
        for (const auto& blob_id : unique_blobs(repo)) {
            if (head_blobs.count(blob_id)) continue;
            const Blob& blob = repo.blob(blob_id);
            if (!blob.is_text()) continue;
            auto pit = paths.find(blob_id);
            auto found = scan_history_blob(blob_id, pit == paths.end() ? std::string() : pit->second, blob.bytes(),
                                           history_detectors());
            report.residual.insert(report.residual.end(), found.begin(), found.end());
        }
    }
    report.residual = canonical_order(without_info(std::move(report.residual)));

    if (!scanner_->has_ner() || scanner_->ner_skipped()) report.skipped_detectors.insert(Detector::NER);
    const bool fatal = std::any_of(report.residual.begin(), report.residual.end(), is_gate_fatal) ||
                       !report.unmasked_authors.empty() || !report.denied_paths.empty();
    const bool ner_missing = config_.require_ner && report.skipped_detectors.count(Detector::NER);
    if (fatal) {
        report.exit_code = 1;
    } else if (ner_missing) {
        report.exit_code = 3;
    }
    report.passed = report.exit_code == 0;
    if (report.skipped_detectors.count(Detector::NER) && !config_.require_ner) {
        spdlog::warn("gate ran without the NER detector");
    }
    return report;
}

PipelineResult Pipeline::run(const RepoModel& repo) const {
    PipelineResult result{repo, {}, {}, {}};
    RunLog& log = result.log;
    if (repo.empty()) {
        StageTimer t(&log, "gate");
        result.gate = gate_check(repo);
        return result;
    }

    Plan wt;
    {
        StageTimer t(&log, "working_tree_scan_replace");
        wt = plan_working_tree(repo, &log);
    }
    {
        StageTimer t(&log, "working_tree_verify");
        verify_working_tree(repo, &wt);
    }

    Plan hist;
    {
        StageTimer t(&log, "history_blob_scan_replace");
        hist = plan_history_blobs(repo, &log);
    }
    RedactionManifest meta;
    {
        StageTimer t(&log, "history_rewrite");
        RewriteCallbacks cbs = history_callbacks(meta, &log);
        cbs.blob_cb = [&wt, &hist](const Blob& b) {
            if (auto it = wt.blob_content.find(b.id()); it != wt.blob_content.end()) return it->second;
            if (auto it = hist.blob_content.find(b.id()); it != hist.blob_content.end()) return it->second;
            return b.bytes();
        };
        result.repo = rewrite_history(repo, cbs).repo;
    }
    {
        StageTimer t(&log, "manifest");
        result.manifest.merge(wt.manifest);
        result.manifest.merge(hist.manifest);
        result.manifest.merge(meta);
    }
    {
        StageTimer t(&log, "gate");
        result.gate = gate_check(result.repo);
    }
    log.skipped_detectors = result.gate.skipped_detectors;
    return result;
}

std::vector<Finding> scan_working_tree(const RepoModel& repo, const PipelineConfig& config) {
    return Pipeline(config).scan_working_tree(repo);
}

SanitizeResult sanitize_working_tree(const RepoModel& repo, const PipelineConfig& config) {
    return Pipeline(config).sanitize_working_tree(repo);
}

SanitizeResult sanitize_history(const RepoModel& repo, const PipelineConfig& config) {
    return Pipeline(config).sanitize_history(repo);
}

GateReport gate_check(const RepoModel& repo, const PipelineConfig& config) { return Pipeline(config).gate_check(repo); }

PipelineResult run_pipeline(const RepoModel& repo, const PipelineConfig& config) {
    return Pipeline(config).run(repo);
}

}  // namespace scrub
