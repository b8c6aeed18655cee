#include "scrub/detect.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <spdlog/spdlog.h>
#include <yaml-cpp/yaml.h>

#include "scrub/embedded_data.hpp"
#include "scrub/error.hpp"
#include "scrub/ner.hpp"
#include "scrub/zones.hpp"

namespace scrub {

namespace {

constexpr std::array<std::pair<Detector, std::string_view>, 5> kDetectorNames{{
    {Detector::SECRETS, "SECRETS"},
    {Detector::DICTIONARY, "DICTIONARY"},
    {Detector::ENDPOINT, "ENDPOINT"},
    {Detector::REGEX_PII, "REGEX_PII"},
    {Detector::NER, "NER"},
}};

constexpr std::array<std::pair<Category, std::string_view>, 18> kCategoryNames{{
    {Category::SECRET, "SECRET"},
    {Category::EMAIL, "EMAIL"},
    {Category::PHONE, "PHONE"},
    {Category::IPV4, "IPV4"},
    {Category::JWT, "JWT"},
    {Category::URL, "URL"},
    {Category::CUSTOM, "CUSTOM"},
    {Category::CODENAME, "CODENAME"},
    {Category::CLIENT, "CLIENT"},
    {Category::ORG_TERM, "ORG_TERM"},
    {Category::DOMAIN_TERM, "DOMAIN_TERM"},
    {Category::TERM, "TERM"},
    {Category::PRIVATE_IP, "PRIVATE_IP"},
    {Category::INTERNAL_DOMAIN, "INTERNAL_DOMAIN"},
    {Category::PERSON, "PERSON"},
    {Category::ORG, "ORG"},
    {Category::AUTHOR_NAME, "AUTHOR_NAME"},
    {Category::AUTHOR_EMAIL, "AUTHOR_EMAIL"},
}};

constexpr std::array<std::pair<Surface, std::string_view>, 3> kSurfaceNames{{
    {Surface::WORKING_TREE, "WORKING_TREE"},
    {Surface::COMMIT_META, "COMMIT_META"},
    {Surface::HISTORY_BLOB, "HISTORY_BLOB"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
    for (const auto& [v, name] : table) {
        if (v == value) return name;
    }
    return "?";
}

template <typename E, std::size_t N>
E value_of(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view name, const char* what) {
    for (const auto& [v, n] : table) {
        if (n == name) return v;
    }
    throw Error(ErrorCode::CONFIG_INVALID, std::string("unknown ") + what + " '" + std::string(name) + "'");
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

boost::regex make_regex(const std::string& pattern, bool icase = false) {
    boost::regex::flag_type flags = boost::regex::perl;
    if (icase) flags |= boost::regex::icase;
    return boost::regex(pattern, flags);
}

const std::string kOctet = "(?:25[0-5]|2[0-4][0-9]|1[0-9]{2}|[1-9]?[0-9])";

const boost::regex& ipv4_regex() {
    static const boost::regex re =
        make_regex("(?<![0-9])(?<![0-9]\\.)" + kOctet + "(?:\\." + kOctet + "){3}(?![0-9])(?!\\.[0-9])");
    return re;
}

const boost::regex& email_regex() {
    // Python class semantics: "+-." is a range, a '-' right after a range is literal.
    static const boost::regex re = make_regex("[a-zA-Z0-9_+-.]+@[a-zA-Z0-9-]+\\.[a-zA-Z0-9\\-.]+");
    return re;
}

const boost::regex& phone_regex() {
    static const boost::regex re = make_regex("\\+[1-9][0-9]{7,14}");
    return re;
}

const boost::regex& jwt_regex(bool strict) {
    static const boost::regex tight =
        make_regex("(?<![A-Za-z0-9_-])eyJ[A-Za-z0-9_-]{7,}\\.[A-Za-z0-9_-]{10,}\\.[A-Za-z0-9_-]{10,}(?![A-Za-z0-9_-])");
    static const boost::regex loose = make_regex("[A-Za-z0-9\\-_.]+\\.[A-Za-z0-9\\-_.]+\\.[A-Za-z0-9\\-_.]+");
    return strict ? loose : tight;
}

const boost::regex& url_regex(bool strict) {
    static const boost::regex tight = make_regex("https?://[^\\s'\"<>()\\[\\]{}`\\\\]+");
    static const boost::regex loose = make_regex("https?://[^\\s]+");
    return strict ? loose : tight;
}

const boost::regex& hostname_regex() {
    static const std::string label = "[A-Za-z0-9](?:[A-Za-z0-9-]*[A-Za-z0-9])?";
    static const boost::regex re =
        make_regex("(?<![A-Za-z0-9.-])" + label + "(?:\\." + label + ")+(?![A-Za-z0-9-])(?!\\.[A-Za-z0-9])");
    return re;
}

const std::string kMaskAlternation =
    "REDACTED_[0-9a-f]{12}"
    "|user_[0-9a-f]{12}@example\\.com"
    "|author_[0-9a-f]{12}@example\\.invalid"
    "|(?:Person|Org|Author)_[0-9a-f]{12}"
    "|[0-9a-f]{8}\\.example\\.invalid"
    "|192\\.0\\.2\\.(?:25[0-4]|2[0-4][0-9]|1[0-9]{2}|[1-9][0-9]?)(?![0-9])"
    "|\\+0000000000"
    "|\\[[a-z]+:[0-9a-f]{12}\\]";

const std::vector<std::string_view> kInternalSuffixes = {".internal", ".corp", ".local", ".lan", ".intra"};

bool has_domain_suffix(std::string_view host_lower, std::string_view domain_lower) {
    if (domain_lower.empty()) return false;
    if (host_lower == domain_lower) return true;
    return host_lower.size() > domain_lower.size() &&
           host_lower.compare(host_lower.size() - domain_lower.size(), domain_lower.size(), domain_lower) == 0 &&
           host_lower[host_lower.size() - domain_lower.size() - 1] == '.';
}

Finding make_finding(Detector d, Category c, const Origin& origin, std::string_view text, std::size_t b, std::size_t e,
                     std::string label = {}) {
    return Finding{d, c, severity_for(c), origin, b, e, std::string(text.substr(b, e - b)), std::move(label)};
}

template <typename Fn>
void for_each_match(std::string_view text, const boost::regex& re, Fn&& fn) {
    boost::match_results<std::string_view::const_iterator> m;
    auto begin = text.begin();
    const auto end = text.end();
    auto flags = boost::match_default;
    while (begin != end && boost::regex_search(begin, end, m, re, flags)) {
        fn(m);
        auto next = m[0].second;
        if (m[0].first == m[0].second) {
            if (next == end) break;
            ++next;
        }
        begin = next;
        flags |= boost::match_prev_avail;
    }
}

void append_rule_matches(std::vector<Finding>& out, std::string_view text, const Origin& origin,
                         const PatternRule& rule, Detector d, Category c, const std::string& label) {
    for_each_match(text, rule.regex, [&](const auto& m) {
        const int g = rule.group < static_cast<int>(m.size()) ? rule.group : 0;
        if (!m[g].matched) return;
        const auto b = static_cast<std::size_t>(m[g].first - text.begin());
        const auto e = static_cast<std::size_t>(m[g].second - text.begin());
        if (b == e) return;
        out.push_back(make_finding(d, c, origin, text, b, e, label));
    });
}

bool contained_in_any(std::size_t b, std::size_t e, const std::vector<std::pair<std::size_t, std::size_t>>& spans) {
    return std::any_of(spans.begin(), spans.end(), [&](const auto& s) { return s.first <= b && e <= s.second; });
}

}  // namespace

std::string_view to_string(Detector d) { return name_of(kDetectorNames, d); }
std::string_view to_string(Category c) { return name_of(kCategoryNames, c); }
std::string_view to_string(Surface s) { return name_of(kSurfaceNames, s); }

std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::CRITICAL: return "CRITICAL";
        case Severity::HIGH: return "HIGH";
        case Severity::MEDIUM: return "MEDIUM";
        case Severity::INFO: return "INFO";
    }
    return "?";
}

Detector detector_from_string(std::string_view s) { return value_of(kDetectorNames, s, "detector"); }
Category category_from_string(std::string_view s) { return value_of(kCategoryNames, s, "category"); }
Surface surface_from_string(std::string_view s) { return value_of(kSurfaceNames, s, "surface"); }

const std::set<Detector>& all_detectors() {
    static const std::set<Detector> s{Detector::SECRETS, Detector::DICTIONARY, Detector::ENDPOINT, Detector::REGEX_PII,
                                      Detector::NER};
    return s;
}

const std::set<Detector>& history_detectors() {
    static const std::set<Detector> s{Detector::DICTIONARY, Detector::ENDPOINT, Detector::REGEX_PII};
    return s;
}

Severity severity_for(Category c) {
    switch (c) {
        case Category::SECRET: return Severity::CRITICAL;
        case Category::IPV4:
        case Category::URL: return Severity::MEDIUM;
        default: return Severity::HIGH;
    }
}

PatternRule compile_rule(PatternRule rule) {
    if (rule.name.empty()) throw Error(ErrorCode::RULES_FILE_INVALID, "rule without a name");
    if (rule.pattern.empty()) throw Error(ErrorCode::RULES_FILE_INVALID, "rule '" + rule.name + "' has an empty pattern");
    try {
        rule.regex = make_regex(rule.pattern, rule.case_insensitive);
    } catch (const boost::regex_error& e) {
        throw Error(ErrorCode::RULES_FILE_INVALID, "rule '" + rule.name + "': " + e.what());
    }
    if (rule.group < 0 || static_cast<std::size_t>(rule.group) > rule.regex.mark_count()) {
        throw Error(ErrorCode::RULES_FILE_INVALID, "rule '" + rule.name + "': group out of range");
    }
    return rule;
}

std::vector<PatternRule> parse_rules(std::string_view yaml_text, std::string_view source) {
    const std::string where(source);
    YAML::Node doc;
    try {
        doc = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        throw Error(ErrorCode::RULES_FILE_INVALID, where + ": " + e.what());
    }
    if (doc.IsNull()) return {};
    if (doc.IsMap() && doc["rules"]) doc = doc["rules"];
    if (!doc.IsSequence()) throw Error(ErrorCode::RULES_FILE_INVALID, where + ": expected a list of rules");

    std::vector<PatternRule> rules;
    std::set<std::string> names;
    try {
        for (const auto& node : doc) {
            if (!node.IsMap()) throw Error(ErrorCode::RULES_FILE_INVALID, where + ": rule entries must be mappings");
            PatternRule rule;
            rule.name = node["name"] ? node["name"].as<std::string>() : "";
            rule.pattern = node["pattern"] ? node["pattern"].as<std::string>() : "";
            if (const auto flags = node["flags"]) {
                std::vector<std::string> items;
                if (flags.IsSequence()) {
                    items = flags.as<std::vector<std::string>>();
                } else if (!flags.IsNull()) {
                    items.push_back(flags.as<std::string>());
                }
                for (const auto& f : items) {
                    const std::string lf = ascii_lower(f);
                    if (lf == "i" || lf == "ignorecase" || lf == "re.i" || lf == "re.ignorecase") {
                        rule.case_insensitive = true;
                    } else if (!lf.empty()) {
                        throw Error(ErrorCode::RULES_FILE_INVALID, where + ": rule '" + rule.name + "' has unknown flag " + f);
                    }
                }
            }
            if (node["mask_label"]) rule.mask_label = node["mask_label"].as<std::string>();
            if (node["group"]) rule.group = node["group"].as<int>();
            rule = compile_rule(std::move(rule));
            if (!names.insert(rule.name).second) {
                throw Error(ErrorCode::RULES_FILE_INVALID, where + ": duplicate rule name '" + rule.name + "'");
            }
            rules.push_back(std::move(rule));
        }
    } catch (const YAML::Exception& e) {
        throw Error(ErrorCode::RULES_FILE_INVALID, where + ": " + e.what());
    }
    return rules;
}

std::vector<PatternRule> load_rules(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::RULES_FILE_INVALID, "cannot read rules file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_rules(ss.str(), path.string());
}

const std::vector<PatternRule>& builtin_secret_rules() {
    static const std::vector<PatternRule> rules = [] {
        std::vector<PatternRule> out;
        auto builtin = [](std::string name, std::string pattern, bool icase, int group) {
            PatternRule rule;
            rule.name = std::move(name);
            rule.pattern = std::move(pattern);
            rule.case_insensitive = icase;
            rule.group = group;
            return compile_rule(std::move(rule));
        };
        out.push_back(builtin("aws-access-key-id", "AKIA[0-9A-Z]{16}", false, 0));
        out.push_back(builtin("private-key",
                              "-----BEGIN ([A-Z ]*)PRIVATE KEY-----(?:[\\s\\S]*?-----END \\1PRIVATE KEY-----)?", false, 0));
        out.push_back(builtin("token-assignment",
                              "(?:api[_-]?key|token|passwd|password|secret)\\s*[:=]\\s*['\"]([^'\"\\n]{8,})['\"]", true, 1));
        for (auto& r : parse_rules(embedded::secret_rules_yaml(), "secret_rules.yaml")) out.push_back(std::move(r));
        return out;
    }();
    return rules;
}

std::string normalize_label(std::string_view label) {
    std::string out;
    for (unsigned char c : label) {
        if (std::isalpha(c)) out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out.empty() ? "name" : out;
}

Dictionary parse_dictionary(std::string name, std::string_view text) {
    Dictionary dict{std::move(name), {}};
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::string term = trim(line);
        if (term.empty() || term.front() == '#') continue;
        dict.terms.push_back(std::move(term));
    }
    if (dict.terms.empty()) throw Error(ErrorCode::EMPTY_DICTIONARY, "dictionary '" + dict.name + "' has no terms");
    return dict;
}

Dictionary load_dictionary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot read dictionary " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_dictionary(path.stem().string(), ss.str());
}

std::vector<Dictionary> load_dictionaries(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::IO_ERROR, "no dictionary directory " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Dictionary> out;
    for (const auto& f : files) {
        try {
            out.push_back(load_dictionary(f));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EMPTY_DICTIONARY) throw;
            spdlog::warn("{}; skipped", e.what());
        }
    }
    return out;
}

Category dictionary_category(std::string_view name) {
    if (name == "codenames") return Category::CODENAME;
    if (name == "clients") return Category::CLIENT;
    if (name == "orgs") return Category::ORG_TERM;
    if (name == "domains") return Category::DOMAIN_TERM;
    return Category::TERM;
}

DictionaryMatcher::DictionaryMatcher(const std::vector<Dictionary>& dictionaries) {
    std::vector<std::string> patterns;
    std::set<std::string> seen;
    for (const auto& dict : dictionaries) {
        const Category c = dictionary_category(dict.name);
        for (const auto& term : dict.terms) {
            std::string key = ascii_lower(term);
            if (key.empty() || !seen.insert(key).second) continue;
            patterns.push_back(std::move(key));
            categories_.push_back(c);
        }
    }
    if (!patterns.empty()) automaton_ = std::make_shared<const AhoCorasick>(patterns);
}

std::vector<DictionaryMatcher::Hit> DictionaryMatcher::find(std::string_view text) const {
    std::vector<Hit> out;
    if (!automaton_) return out;
    for (const auto& m : automaton_->find_all(ascii_lower(text))) out.push_back({m.begin, m.end, categories_[m.pattern]});
    return out;
}

std::vector<Finding> detect_secrets(std::string_view text, const Origin& origin, const std::vector<PatternRule>& rules) {
    std::vector<Finding> out;
    for (const auto& rule : rules) append_rule_matches(out, text, origin, rule, Detector::SECRETS, Category::SECRET, "");
    return out;
}

std::vector<Finding> detect_regex_pii(std::string_view text, const Origin& origin,
                                      const std::vector<PatternRule>& custom_rules, const PiiOptions& options) {
    std::vector<Finding> out;
    auto add = [&](const boost::regex& re, Category c) {
        for_each_match(text, re, [&](const auto& m) {
            const auto b = static_cast<std::size_t>(m[0].first - text.begin());
            const auto e = static_cast<std::size_t>(m[0].second - text.begin());
            if (b != e) out.push_back(make_finding(Detector::REGEX_PII, c, origin, text, b, e));
        });
    };
    add(email_regex(), Category::EMAIL);
    add(phone_regex(), Category::PHONE);
    add(ipv4_regex(), Category::IPV4);
    add(jwt_regex(options.strict_patterns), Category::JWT);
    add(url_regex(options.strict_patterns), Category::URL);
    for (const auto& rule : custom_rules) {
        append_rule_matches(out, text, origin, rule, Detector::REGEX_PII, Category::CUSTOM,
                            normalize_label(rule.mask_label.empty() ? rule.name : rule.mask_label));
    }
    return out;
}

bool is_private_ipv4(std::string_view dotted) {
    std::array<int, 4> o{};
    int idx = 0;
    int value = -1;
    for (char c : dotted) {
        if (c == '.') {
            if (value < 0 || idx >= 3) return false;
            o[idx++] = value;
            value = -1;
        } else if (c >= '0' && c <= '9') {
            value = (value < 0 ? 0 : value * 10) + (c - '0');
            if (value > 255) return false;
        } else {
            return false;
        }
    }
    if (value < 0 || idx != 3) return false;
    o[3] = value;
    return o[0] == 10 || (o[0] == 172 && o[1] >= 16 && o[1] <= 31) || (o[0] == 192 && o[1] == 168);
}

std::vector<Finding> detect_endpoints(std::string_view text, const Origin& origin,
                                      const std::vector<std::string>& partner_domains) {
    std::vector<Finding> out;
    for_each_match(text, ipv4_regex(), [&](const auto& m) {
        const auto b = static_cast<std::size_t>(m[0].first - text.begin());
        const auto e = static_cast<std::size_t>(m[0].second - text.begin());
        if (is_private_ipv4(text.substr(b, e - b))) {
            out.push_back(make_finding(Detector::ENDPOINT, Category::PRIVATE_IP, origin, text, b, e));
        }
    });
    std::vector<std::string> partners;
    for (const auto& d : partner_domains) {
        std::string p = ascii_lower(trim(d));
        while (!p.empty() && p.front() == '.') p.erase(p.begin());
        if (!p.empty()) partners.push_back(std::move(p));
    }
    for_each_match(text, hostname_regex(), [&](const auto& m) {
        const auto b = static_cast<std::size_t>(m[0].first - text.begin());
        const auto e = static_cast<std::size_t>(m[0].second - text.begin());
        const std::string host = ascii_lower(text.substr(b, e - b));
        const bool internal =
            std::any_of(kInternalSuffixes.begin(), kInternalSuffixes.end(),
                        [&](std::string_view s) { return host.size() > s.size() && host.ends_with(s); }) ||
            std::any_of(partners.begin(), partners.end(), [&](const std::string& p) { return has_domain_suffix(host, p); });
        if (internal) out.push_back(make_finding(Detector::ENDPOINT, Category::INTERNAL_DOMAIN, origin, text, b, e));
    });
    return out;
}

std::vector<Finding> detect_dictionary(std::string_view text, const Origin& origin, const DictionaryMatcher& matcher) {
    std::vector<Finding> out;
    for (const auto& hit : matcher.find(text)) {
        out.push_back(make_finding(Detector::DICTIONARY, hit.category, origin, text, hit.begin, hit.end));
    }
    return out;
}

std::vector<Finding> detect_ner(std::string_view text, const Origin& origin, NerBackend& backend,
                                const NerConfig& config) {
    std::vector<Finding> out;
    for (const auto& span : run_ner(text, backend, config)) {
        const Category c = span.label == "PER" ? Category::PERSON : Category::ORG;
        out.push_back(make_finding(Detector::NER, c, origin, text, span.begin, span.end));
    }
    return out;
}

bool is_mask_artifact(std::string_view candidate) {
    static const boost::regex re = make_regex("(?:" + kMaskAlternation + ")");
    return boost::regex_match(candidate.begin(), candidate.end(), re);
}

std::vector<std::pair<std::size_t, std::size_t>> mask_occurrences(std::string_view text) {
    static const boost::regex re = make_regex("(?:" + kMaskAlternation + ")");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for_each_match(text, re, [&](const auto& m) {
        out.emplace_back(static_cast<std::size_t>(m[0].first - text.begin()),
                         static_cast<std::size_t>(m[0].second - text.begin()));
    });
    return out;
}

std::vector<Finding> canonical_order(std::vector<Finding> findings) {
    auto key = [](const Finding& f) {
        return std::make_tuple(f.origin.surface, std::cref(f.origin.object), std::cref(f.origin.field), f.begin,
                               ~f.end, f.detector, f.category);
    };
    std::stable_sort(findings.begin(), findings.end(),
                     [&](const Finding& a, const Finding& b) { return key(a) < key(b); });
    return findings;
}

bool is_lockfile_name(std::string_view path) {
    static const std::set<std::string_view> names{
        "package.json", "package-lock.json", "npm-shrinkwrap.json", "yarn.lock",   "pnpm-lock.yaml",
        "composer.json", "composer.lock",    "Cargo.lock",          "Gemfile.lock", "go.sum",
        "go.mod",        "poetry.lock",      "Pipfile.lock",        "requirements.txt"};
    return names.count(base_name(path)) != 0;
}

Scanner::Scanner(ScannerConfig config, std::shared_ptr<NerBackend> ner, std::shared_ptr<const NerConfig> ner_config)
    : config_(std::move(config)),
      dictionary_(config_.dictionaries),
      partner_domains_(config_.partner_domains),
      ner_(std::move(ner)),
      ner_config_(ner_config ? std::move(ner_config) : std::make_shared<const NerConfig>()) {
    for (const auto& dict : config_.dictionaries) {
        if (dictionary_category(dict.name) != Category::DOMAIN_TERM) continue;
        partner_domains_.insert(partner_domains_.end(), dict.terms.begin(), dict.terms.end());
    }
}

std::vector<Finding> Scanner::scan(std::string_view text, const Origin& origin,
                                   const std::set<Detector>& detectors) const {
    std::vector<Finding> raw;
    auto take = [&](std::vector<Finding> v) { raw.insert(raw.end(), v.begin(), v.end()); };
    if (detectors.count(Detector::SECRETS)) take(detect_secrets(text, origin, config_.secret_rules));
    if (detectors.count(Detector::REGEX_PII)) take(detect_regex_pii(text, origin, config_.custom_rules, config_.pii));
    if (detectors.count(Detector::ENDPOINT)) take(detect_endpoints(text, origin, partner_domains_));
    if (detectors.count(Detector::DICTIONARY)) take(detect_dictionary(text, origin, dictionary_));
    if (detectors.count(Detector::NER) && ner_ && !ner_failed_) {
        try {
            take(detect_ner(text, origin, *ner_, *ner_config_));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NER_UNAVAILABLE) throw;
            spdlog::warn("{}; NER detector skipped", e.what());
            ner_failed_ = true;
        }
    }

    const auto masks = mask_occurrences(text);
    const bool lockfile = !config_.aggressive_urls && is_lockfile_name(origin.path);
    std::vector<Finding> kept;
    for (auto& f : raw) {
        if (is_mask_artifact(f.matched)) continue;
        if (f.category != Category::CUSTOM && contained_in_any(f.begin, f.end, masks)) continue;
        if (lockfile && f.category == Category::URL) f.severity = Severity::INFO;
        kept.push_back(std::move(f));
    }
    return canonical_order(std::move(kept));
}

std::vector<Finding> Scanner::scan_windows(std::string_view text,
                                           const std::vector<std::pair<std::size_t, std::size_t>>& windows,
                                           const Origin& origin, const std::set<Detector>& detectors) const {
    std::vector<Finding> out;
    for (const auto& [b, e] : windows) {
        if (b >= e || e > text.size()) continue;
        for (auto& f : scan(text.substr(b, e - b), origin, detectors)) {
            f.begin += b;
            f.end += b;
            out.push_back(std::move(f));
        }
    }
    return canonical_order(std::move(out));
}

}  // namespace scrub
