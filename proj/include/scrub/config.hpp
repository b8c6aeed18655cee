#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "scrub/pipeline.hpp"

namespace scrub {

// One JSON document for every command. Relative paths resolve against the
// config file's directory. Salt is never part of it.
//
// {
//   "detectors": ["SECRETS", "DICTIONARY", "ENDPOINT", "REGEX_PII", "NER"],
//   "deny_globs": ["*.pem", ...],
//   "rules_file": "regex/pii_patterns.yaml",
//   "dictionaries_dir": "dict",
//   "lang_map": "lang_map.json",
//   "partner_domains": ["partner.example"],
//   "strict_patterns": false,
//   "aggressive_urls": false,
//   "require_ner": false,
//   "threshold_mb": 95,
//   "min_loc": 1000,
//   "ner": {"url": "http://...", "min_score": 0.5, "min_length": 3,
//           "chunk_size": 2000, "overlap_size": 200, "timeout_seconds": 10,
//           "stub": {"persons": [...], "orgs": [...]}}
// }
struct AppConfig {
    PipelineConfig pipeline;
    double threshold_mb = 95;
    std::int64_t min_loc = 1000;
};

struct ConfigOverrides {
    std::optional<std::filesystem::path> lang_map;
    bool require_ner = false;
    bool strict_patterns = false;
    bool aggressive_urls = false;
};

// Throws CONFIG_INVALID, RULES_FILE_INVALID, EMPTY_DICTIONARY.
AppConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                       const ConfigOverrides& overrides = {});
// No path: defaults, plus regex/ and dict/ under the working directory when present.
AppConfig load_config(const std::optional<std::filesystem::path>& path, const ConfigOverrides& overrides = {});

}  // namespace scrub
