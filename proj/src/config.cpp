#include "scrub/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "scrub/error.hpp"

namespace fs = std::filesystem;

namespace scrub {

namespace {

const std::set<std::string> kKnownKeys{
    "detectors",      "deny_globs",    "rules_file",   "dictionaries_dir", "lang_map",
    "partner_domains", "strict_patterns", "aggressive_urls", "require_ner", "threshold_mb",
    "min_loc",        "ner"};

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

template <typename T>
T get_or(const nlohmann::json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::CONFIG_INVALID, std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

AppConfig parse_config(const nlohmann::json& doc, const fs::path& base_dir, const ConfigOverrides& overrides) {
    if (!doc.is_object()) throw Error(ErrorCode::CONFIG_INVALID, "config must be a JSON object");
    if (doc.contains("salt") || doc.contains("salt_file")) {
        throw Error(ErrorCode::CONFIG_INVALID, "salt must come from SCRUB_SALT or --salt-file");
    }
    for (const auto& [key, value] : doc.items()) {
        if (!kKnownKeys.count(key)) throw Error(ErrorCode::CONFIG_INVALID, "unknown config key '" + key + "'");
    }

    AppConfig app;
    PipelineConfig& pc = app.pipeline;
    if (doc.contains("detectors")) {
        pc.detectors.clear();
        for (const auto& name : get_or<std::vector<std::string>>(doc, "detectors", {})) {
            try {
                pc.detectors.insert(detector_from_string(name));
            } catch (const Error&) {
                throw Error(ErrorCode::CONFIG_INVALID, "unknown detector '" + name + "'");
            }
        }
    }
    pc.deny_globs = get_or(doc, "deny_globs", pc.deny_globs);
    pc.require_ner = get_or(doc, "require_ner", false) || overrides.require_ner;
    pc.scanner.pii.strict_patterns =
        get_or(doc, "strict_patterns", false) || overrides.strict_patterns;
    pc.scanner.aggressive_urls = get_or(doc, "aggressive_urls", false) || overrides.aggressive_urls;
    pc.scanner.partner_domains = get_or<std::vector<std::string>>(doc, "partner_domains", {});
    app.threshold_mb = get_or(doc, "threshold_mb", app.threshold_mb);
    app.min_loc = get_or(doc, "min_loc", app.min_loc);
    if (app.threshold_mb <= 0) throw Error(ErrorCode::CONFIG_INVALID, "threshold_mb must be positive");

    if (doc.contains("rules_file")) {
        pc.scanner.custom_rules = load_rules(resolve(base_dir, get_or<std::string>(doc, "rules_file", "")));
    } else if (const fs::path p = base_dir / "regex" / "pii_patterns.yaml"; fs::is_regular_file(p)) {
        pc.scanner.custom_rules = load_rules(p);
    }
    if (doc.contains("dictionaries_dir")) {
        pc.scanner.dictionaries = load_dictionaries(resolve(base_dir, get_or<std::string>(doc, "dictionaries_dir", "")));
    } else if (const fs::path p = base_dir / "dict"; fs::is_directory(p)) {
        pc.scanner.dictionaries = load_dictionaries(p);
    }

    std::optional<fs::path> lang_map = overrides.lang_map;
    if (!lang_map && doc.contains("lang_map")) lang_map = resolve(base_dir, get_or<std::string>(doc, "lang_map", ""));
    if (lang_map) pc.lang_map = std::make_shared<const LanguageMap>(LanguageMap::load(*lang_map));

    if (doc.contains("ner")) {
        const auto& ner = doc.at("ner");
        if (!ner.is_object()) throw Error(ErrorCode::CONFIG_INVALID, "config key 'ner' must be an object");
        pc.ner.url = get_or<std::string>(ner, "url", "");
        pc.ner.min_score = get_or(ner, "min_score", pc.ner.min_score);
        pc.ner.min_length = get_or(ner, "min_length", pc.ner.min_length);
        pc.ner.chunk_size = get_or(ner, "chunk_size", pc.ner.chunk_size);
        pc.ner.overlap_size = get_or(ner, "overlap_size", pc.ner.overlap_size);
        pc.ner.timeout_seconds = get_or(ner, "timeout_seconds", pc.ner.timeout_seconds);
        if (pc.ner.min_score < 0 || pc.ner.min_score > 1) {
            throw Error(ErrorCode::CONFIG_INVALID, "ner.min_score must lie in [0, 1]");
        }
        if (pc.ner.chunk_size == 0 || pc.ner.overlap_size >= pc.ner.chunk_size) {
            throw Error(ErrorCode::CONFIG_INVALID, "ner.overlap_size must be smaller than ner.chunk_size");
        }
        if (ner.contains("stub")) {
            const auto& stub = ner.at("stub");
            pc.ner_backend = std::make_shared<GazetteerNerBackend>(get_or<std::vector<std::string>>(stub, "persons", {}),
                                                                   get_or<std::vector<std::string>>(stub, "orgs", {}));
        }
    }
    if (pc.ner.url.empty()) {
        if (const char* env = std::getenv("SCRUB_NER_URL"); env && *env) pc.ner.url = env;
    }
    return app;
}

AppConfig load_config(const std::optional<fs::path>& path, const ConfigOverrides& overrides) {
    if (!path) return parse_config(nlohmann::json::object(), fs::current_path(), overrides);
    std::ifstream in(*path, std::ios::binary);
    if (!in) throw Error(ErrorCode::CONFIG_INVALID, "cannot read config " + path->string());
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::CONFIG_INVALID, path->string() + ": " + e.what());
    }
    return parse_config(doc, fs::absolute(*path).parent_path(), overrides);
}

}  // namespace scrub
