#include "scrub/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "scrub/config.hpp"
#include "scrub/git_backend.hpp"
#include "scrub/ingest.hpp"
#include "scrub/metadata.hpp"
#include "scrub/pipeline.hpp"
#include "scrub/process.hpp"
#include "scrub/stats.hpp"

namespace fs = std::filesystem;

namespace scrub {

namespace {

struct CommonOptions {
    std::optional<std::string> config;
    std::optional<std::string> lang_map;
    std::optional<std::string> salt_file;
    bool require_ner = false;
    bool strict_patterns = false;
    bool aggressive_urls = false;

    AppConfig load() const {
        ConfigOverrides o;
        if (lang_map) o.lang_map = fs::path(*lang_map);
        o.require_ner = require_ner;
        o.strict_patterns = strict_patterns;
        o.aggressive_urls = aggressive_urls;
        return load_config(config ? std::optional<fs::path>(*config) : std::nullopt, o);
    }

    AppConfig load_with_salt() const {
        AppConfig app = load();
        app.pipeline.salt = Salt::from_environment(salt_file ? fs::path(*salt_file) : fs::path());
        return app;
    }
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "JSON config file");
    cmd->add_option("--lang-map", o.lang_map, "language map JSON (overrides the config)");
    cmd->add_option("--salt-file", o.salt_file, "file holding the salt when SCRUB_SALT is unset");
    cmd->add_flag("--require-ner", o.require_ner, "fail when the NER detector is unavailable");
    cmd->add_flag("--strict-patterns", o.strict_patterns, "use the loose JWT and URL patterns");
    cmd->add_flag("--aggressive-urls", o.aggressive_urls, "mask URLs in package manifests too");
    cmd->add_flag_callback("-v,--verbose", [] { spdlog::set_level(spdlog::level::debug); }, "debug logging");
}

void init_logging() {
    static const bool done = [] {
        auto logger = spdlog::stderr_color_mt("scrub");
        spdlog::set_default_logger(logger);
        spdlog::set_pattern("%^%l%$: %v");
        return true;
    }();
    (void)done;
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write " + p.string());
    out << text;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void append_line(const fs::path& p, const std::string& line) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::app);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot append to " + p.string());
    out << line << '\n';
}

// "x/name.bundle" -> "name"
std::string output_stem(const fs::path& p) {
    std::string name = p.filename().string();
    if (name.ends_with(".bundle")) name.erase(name.size() - 7);
    return name;
}

nlohmann::ordered_json to_json(const IngestReport& r) {
    nlohmann::ordered_json j;
    j["channel"] = to_string(r.channel);
    j["slug"] = r.slug;
    j["bundle_path"] = r.bundle_path.string();
    j["synthetic"] = r.synthetic;
    auto large = nlohmann::ordered_json::array();
    for (const auto& [path, mb] : r.large_files) large.push_back({{"path", path}, {"size_mb", mb}});
    j["large_files"] = large;
    return j;
}

nlohmann::ordered_json to_json(const SelectionDecision& d, const std::string& repo_name, std::int64_t loc) {
    nlohmann::ordered_json j;
    j["repo_name"] = repo_name;
    j["accepted"] = d.accepted;
    j["reason"] = to_string(d.reason);
    j["loc"] = loc;
    return j;
}

Channel infer_channel(const std::string& source) {
    if (fs::is_regular_file(source)) return Channel::BUNDLE;
    if (fs::is_directory(source)) {
        return git::run({"-C", source, "rev-parse", "--git-dir"}).exit_code == 0 ? Channel::BUNDLE : Channel::ARCHIVE;
    }
    return Channel::REMOTE;
}

IngestResult do_ingest(Channel channel, const std::string& source, const fs::path& bundle_out, double threshold_mb) {
    switch (channel) {
        case Channel::BUNDLE: {
            IngestResult r = ingest_bundle(source);
            if (fs::is_regular_file(source)) {
                if (bundle_out.has_parent_path()) fs::create_directories(bundle_out.parent_path());
                fs::copy_file(source, bundle_out, fs::copy_options::overwrite_existing);
            } else {
                git::write_bundle(r.repo, bundle_out);
            }
            r.report.bundle_path = bundle_out;
            return r;
        }
        case Channel::ARCHIVE: {
            IngestResult r = ingest_archive(source, threshold_mb);
            git::write_bundle(r.repo, bundle_out);
            r.report.bundle_path = bundle_out;
            return r;
        }
        case Channel::REMOTE: return ingest_remote(source, bundle_out);
    }
    throw Error(ErrorCode::CONFIG_INVALID, "unknown channel");
}

RepoModel load_input(const std::string& in) {
    if (fs::is_directory(in) && git::run({"-C", in, "rev-parse", "--git-dir"}).exit_code != 0) {
        return ingest_archive(in).repo;
    }
    return git::load_repository(in);
}

std::string input_name(const std::string& in) {
    fs::path p = fs::absolute(in).lexically_normal();
    if (p.filename().empty()) p = p.parent_path();
    if (fs::is_directory(p)) {
        std::string name = p.filename().string();
        if (name == ".git") name = p.parent_path().filename().string();
        if (name.ends_with(".git")) name.erase(name.size() - 4);
        return name;
    }
    return p.stem().string();
}

struct Written {
    fs::path bundle;
    fs::path manifest;
    fs::path public_manifest;
};

Written write_outputs(const PipelineResult& result, const fs::path& dir, const std::string& stem,
                      const std::string& fingerprint) {
    Written w{dir / (stem + ".bundle"), dir / (stem + ".manifest.jsonl"), dir / (stem + ".manifest.public.jsonl")};
    fs::create_directories(dir);
    git::write_bundle(result.repo, w.bundle);
    result.manifest.write(w.manifest, fingerprint, true);
    result.manifest.write(w.public_manifest, fingerprint, false);
    return w;
}

// Writes the sanitized bundle to `out` on a gate pass, to `quarantine` otherwise.
nlohmann::ordered_json sanitize_and_place(const RepoModel& repo, const AppConfig& app, const fs::path& out,
                                          const fs::path& quarantine, int& exit_code) {
    const PipelineResult result = run_pipeline(repo, app.pipeline);
    const std::string fp = app.pipeline.salt->fingerprint();
    const std::string stem = output_stem(out);
    nlohmann::ordered_json j;
    j["gate"] = result.gate.to_json();
    nlohmann::json log = result.log.to_json();
    if (result.gate.passed) {
        const Written w = write_outputs(result, out.has_parent_path() ? out.parent_path() : fs::path("."), stem, fp);
        if (fs::absolute(w.bundle) != fs::absolute(out)) fs::rename(w.bundle, out);
        log["outputs"]["bundle"] = out.string();
        log["outputs"]["manifest"] = w.manifest.string();
        log["outputs"]["public_manifest"] = w.public_manifest.string();
    } else {
        const Written w = write_outputs(result, quarantine, stem, fp);
        write_text(quarantine / (stem + ".gate.json"), result.gate.to_json().dump(2) + "\n");
        log["outputs"]["quarantine_bundle"] = w.bundle.string();
        log["outputs"]["manifest"] = w.manifest.string();
        log["outputs"]["public_manifest"] = w.public_manifest.string();
        spdlog::error("gate failed; sanitized output withheld in {}", quarantine.string());
    }
    j["log"] = log;
    exit_code = result.gate.exit_code;
    return j;
}

fs::path default_quarantine(const fs::path& out) {
    return (out.has_parent_path() ? out.parent_path() : fs::path(".")) / "quarantine";
}

MetadataRecord extract_from(const std::string& in, const RepoModel& repo, const AppConfig& app,
                            const std::string& name) {
    const LanguageMap& map = app.pipeline.lang_map ? *app.pipeline.lang_map : LanguageMap::builtin();
    const RepoSizes sizes = measure_sizes(in, repo);
    return extract(repo, sizes, name, map);
}

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::CONFIG_INVALID:
        case ErrorCode::RULES_FILE_INVALID:
        case ErrorCode::EMPTY_DICTIONARY:
        case ErrorCode::UNSUPPORTED_LANGUAGE:
            return EXIT_USAGE;
        case ErrorCode::EMPTY_SALT:
        case ErrorCode::BACKEND_UNAVAILABLE:
        case ErrorCode::NER_UNAVAILABLE:
        case ErrorCode::NETWORK:
        case ErrorCode::IO_ERROR:
            return EXIT_ENVIRONMENT;
        default:
            return EXIT_GATE_FAIL;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out) {
    init_logging();
    spdlog::set_level(spdlog::level::info);
    CLI::App app{"Repository scrubbing and curation"};
    app.require_subcommand(1);

    CommonOptions common;
    int exit_code = EXIT_PASS;

    // ingest
    auto* ingest = app.add_subcommand("ingest", "produce a bundle from a bundle, an unpacked tree or a remote");
    std::string channel_name, source, out_path;
    std::optional<double> threshold_mb;
    std::optional<std::string> ok_file;
    ingest->add_option("--channel", channel_name)->required()->check(CLI::IsMember({"bundle", "archive", "remote"}));
    ingest->add_option("--source", source)->required();
    ingest->add_option("--out", out_path, "output bundle")->required();
    ingest->add_option("--threshold-mb", threshold_mb, "pointer-file threshold for archives");
    ingest->add_option("--ok-file", ok_file, "append the source to this file on success");
    add_common(ingest, common);
    ingest->callback([&] {
        const AppConfig cfg = common.load();
        IngestResult r = do_ingest(channel_from_string(channel_name), source, out_path,
                                   threshold_mb.value_or(cfg.threshold_mb));
        if (ok_file) append_line(*ok_file, source);
        out << to_json(r.report).dump() << '\n';
    });

    // meta
    auto* meta = app.add_subcommand("meta", "extract the metadata record of one repository");
    std::string in_path, csv_path;
    std::optional<std::string> json_path;
    meta->add_option("--in", in_path, "bundle or repository directory")->required();
    meta->add_option("--csv", csv_path)->required();
    meta->add_option("--json", json_path);
    add_common(meta, common);
    meta->callback([&] {
        const AppConfig cfg = common.load();
        const MetadataRecord rec = extract_from(in_path, load_input(in_path), cfg, input_name(in_path));
        write_text(csv_path, to_csv({rec}));
        if (json_path) write_text(*json_path, to_json(rec).dump(2) + "\n");
        for (const auto& issue : consistency_check(rec)) spdlog::warn("consistency: {}", issue);
        out << to_json(rec).dump() << '\n';
    });

    // select
    auto* sel = app.add_subcommand("select", "apply the selection filter to metadata records");
    sel->add_option("--csv", csv_path)->required();
    add_common(sel, common);
    sel->callback([&] {
        const AppConfig cfg = common.load();
        const auto records = from_csv(read_text(csv_path));
        if (records.empty()) throw Error(ErrorCode::EMPTY_INPUT, csv_path + " has no records");
        auto decisions = nlohmann::ordered_json::array();
        bool all = true;
        for (const auto& r : records) {
            const SelectionDecision d = select(r, cfg.min_loc);
            all = all && d.accepted;
            decisions.push_back(to_json(d, r.repo_name, r.loc));
        }
        out << (decisions.size() == 1 ? decisions[0] : decisions).dump() << '\n';
        exit_code = all ? EXIT_PASS : EXIT_GATE_FAIL;
    });

    // sanitize
    auto* sanitize = app.add_subcommand("sanitize", "mask sensitive values in the working tree and history");
    std::optional<std::string> quarantine;
    sanitize->add_option("--in", in_path)->required();
    sanitize->add_option("--out", out_path, "output bundle")->required();
    sanitize->add_option("--quarantine", quarantine, "directory for output that fails the gate");
    add_common(sanitize, common);
    sanitize->callback([&] {
        const AppConfig cfg = common.load_with_salt();
        const RepoModel repo = load_input(in_path);
        const fs::path q = quarantine ? fs::path(*quarantine) : default_quarantine(out_path);
        out << sanitize_and_place(repo, cfg, out_path, q, exit_code).dump() << '\n';
    });

    // gate
    auto* gate = app.add_subcommand("gate", "re-scan a sanitized bundle");
    gate->add_option("--in", in_path)->required();
    add_common(gate, common);
    gate->callback([&] {
        AppConfig cfg = common.load();
        // The gate never masks; a placeholder salt keeps the pipeline constructible.
        if (!cfg.pipeline.salt) cfg.pipeline.salt = Salt("gate-only");
        const GateReport report = gate_check(load_input(in_path), cfg.pipeline);
        out << report.to_json().dump() << '\n';
        exit_code = report.exit_code;
    });

    // report
    auto* report = app.add_subcommand("report", "aggregate metadata CSVs into summary tables");
    std::string csv_dir, out_dir;
    report->add_option("--csv-dir", csv_dir)->required();
    report->add_option("--out", out_dir)->required();
    add_common(report, common);
    report->callback([&] {
        const AppConfig cfg = common.load();
        write_report(csv_dir, out_dir, cfg.min_loc);
        nlohmann::ordered_json j;
        for (const char* f : {"summary.csv", "languages.csv", "funnel.csv"}) j[f] = (fs::path(out_dir) / f).string();
        out << j.dump() << '\n';
    });

    // curate
    auto* curate = app.add_subcommand("curate", "ingest, measure, select and sanitize one repository");
    std::optional<std::string> curate_channel;
    curate->add_option("--source", source)->required();
    curate->add_option("--channel", curate_channel)->check(CLI::IsMember({"bundle", "archive", "remote"}));
    curate->add_option("--out", out_dir, "output directory")->required();
    curate->add_option("--quarantine", quarantine);
    curate->add_option("--threshold-mb", threshold_mb);
    curate->add_option("--ok-file", ok_file);
    add_common(curate, common);
    curate->callback([&] {
        const AppConfig cfg = common.load_with_salt();
        const Channel channel = curate_channel ? channel_from_string(*curate_channel) : infer_channel(source);
        TempDir work("scrub-curate");
        const std::string name =
            channel == Channel::REMOTE ? safe_name(source) : safe_name(input_name(source));
        const fs::path staged = work.path() / (name + ".bundle");
        IngestResult ingested = do_ingest(channel, source, staged, threshold_mb.value_or(cfg.threshold_mb));
        if (ok_file) append_line(*ok_file, source);

        nlohmann::ordered_json j;
        j["ingest"] = to_json(ingested.report);
        std::optional<MetadataRecord> rec;
        try {
            rec = extract_from(staged.string(), ingested.repo, cfg, name);
            write_text(fs::path(out_dir) / (name + ".csv"), to_csv({*rec}));
            for (const auto& issue : consistency_check(*rec)) spdlog::warn("consistency: {}", issue);
        } catch (const Error& e) {
            spdlog::error("metadata extraction failed: {}", e.what());
        }
        const SelectionDecision decision = select(rec, cfg.min_loc);
        j["decision"] = to_json(decision, name, rec ? rec->loc : 0);
        if (!decision.accepted) {
            out << j.dump() << '\n';
            exit_code = EXIT_REJECTED;
            return;
        }
        const fs::path target = fs::path(out_dir) / (name + ".bundle");
        const fs::path q = quarantine ? fs::path(*quarantine) : fs::path(out_dir) / "quarantine";
        auto result = sanitize_and_place(ingested.repo, cfg, target, q, exit_code);
        j["gate"] = result["gate"];
        j["log"] = result["log"];
        out << j.dump() << '\n';
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, std::cerr) == 0 ? EXIT_PASS : EXIT_USAGE;
    } catch (const Error& e) {
        spdlog::error("{}", e.what());
        return exit_code_for(e.code());
    } catch (const std::filesystem::filesystem_error& e) {
        spdlog::error("{}", e.what());
        return EXIT_ENVIRONMENT;
    }
    return exit_code;
}

}  // namespace scrub
