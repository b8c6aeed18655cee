#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scrub/detect.hpp"
#include "scrub/mask.hpp"
#include "scrub/ner.hpp"
#include "scrub/repo_model.hpp"
#include "scrub/zones.hpp"

namespace scrub {

const std::vector<std::string>& default_deny_globs();

// fnmatch against the base name when the pattern has no '/', else the full path.
bool matches_deny_glob(const std::string& path, const std::vector<std::string>& globs);

struct PipelineConfig {
    std::set<Detector> detectors = all_detectors();
    std::vector<std::string> deny_globs = default_deny_globs();
    std::optional<Salt> salt;
    ScannerConfig scanner;
    NerConfig ner;
    // Used instead of an HTTP client when set (in-process stub).
    std::shared_ptr<NerBackend> ner_backend;
    bool require_ner = false;
    std::shared_ptr<const LanguageMap> lang_map;
};

struct GateReport {
    std::vector<Finding> residual;
    // Author names/emails that are not author masks.
    std::vector<std::string> unmasked_authors;
    // "<commit id>:<path>" for every denied path still present.
    std::vector<std::string> denied_paths;
    std::set<Detector> skipped_detectors;
    bool passed = true;
    int exit_code = 0;

    nlohmann::json to_json() const;
};

// Residuals that fail the gate: any SECRET, HIGH severity, internal endpoints.
bool is_gate_fatal(const Finding& f);

struct RunLog {
    std::vector<std::pair<std::string, double>> stage_ms;
    std::map<std::string, std::size_t> detector_hits;
    std::set<Detector> skipped_detectors;
    std::map<std::string, std::string> outputs;

    nlohmann::json to_json() const;
};

struct SanitizeResult {
    RepoModel repo;
    RedactionManifest manifest;
};

struct PipelineResult {
    RepoModel repo;
    RedactionManifest manifest;
    GateReport gate;
    RunLog log;
};

// Holds the compiled detectors for one configuration.
class Pipeline {
public:
    // Throws EMPTY_SALT when the config carries no salt.
    explicit Pipeline(PipelineConfig config);

    const PipelineConfig& config() const { return config_; }

    std::vector<Finding> scan_working_tree(const RepoModel& repo) const;
    // Throws POST_SCAN_RESIDUAL when the re-scan still finds something.
    SanitizeResult sanitize_working_tree(const RepoModel& repo) const;
    SanitizeResult sanitize_history(const RepoModel& repo) const;
    GateReport gate_check(const RepoModel& repo) const;
    PipelineResult run(const RepoModel& repo) const;

private:
    struct Plan {
        std::map<std::string, std::string> blob_content;  // old blob id -> new bytes
        RedactionManifest manifest;
    };

    std::vector<Finding> scan_file(const std::string& path, std::string_view content,
                                   const std::set<Detector>& detectors, Surface surface,
                                   const std::string& object) const;
    std::vector<Finding> scan_history_blob(const std::string& blob_id, const std::string& path,
                                           std::string_view content, const std::set<Detector>& detectors) const;
    std::set<Detector> active(const std::set<Detector>& wanted) const;
    Plan plan_working_tree(const RepoModel& repo, RunLog* log) const;
    Plan plan_history_blobs(const RepoModel& repo, RunLog* log) const;
    RewriteCallbacks history_callbacks(RedactionManifest& manifest, RunLog* log) const;
    // Re-scans the head tree, reading planned contents where present.
    void verify_working_tree(const RepoModel& repo, const Plan* plan) const;

    PipelineConfig config_;
    Salt salt_;
    std::shared_ptr<const LanguageMap> lang_map_;
    std::unique_ptr<Scanner> scanner_;
};

std::vector<Finding> scan_working_tree(const RepoModel& repo, const PipelineConfig& config);
SanitizeResult sanitize_working_tree(const RepoModel& repo, const PipelineConfig& config);
SanitizeResult sanitize_history(const RepoModel& repo, const PipelineConfig& config);
GateReport gate_check(const RepoModel& repo, const PipelineConfig& config);
PipelineResult run_pipeline(const RepoModel& repo, const PipelineConfig& config);

}  // namespace scrub
