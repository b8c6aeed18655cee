#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <boost/regex.hpp>

#include "scrub/aho_corasick.hpp"

namespace scrub {

class NerBackend;
struct NerConfig;

enum class Detector { SECRETS, DICTIONARY, ENDPOINT, REGEX_PII, NER };

enum class Category {
    SECRET,
    EMAIL,
    PHONE,
    IPV4,
    JWT,
    URL,
    CUSTOM,
    CODENAME,
    CLIENT,
    ORG_TERM,
    DOMAIN_TERM,
    TERM,
    PRIVATE_IP,
    INTERNAL_DOMAIN,
    PERSON,
    ORG,
    // Commit author fields; produced by the history callbacks, never by detectors.
    AUTHOR_NAME,
    AUTHOR_EMAIL,
};

// INFO findings are reported only: never replaced, never gate-fatal.
enum class Severity { CRITICAL, HIGH, MEDIUM, INFO };

enum class Surface { WORKING_TREE, COMMIT_META, HISTORY_BLOB };

std::string_view to_string(Detector d);
std::string_view to_string(Category c);
std::string_view to_string(Severity s);
std::string_view to_string(Surface s);
Detector detector_from_string(std::string_view s);
Category category_from_string(std::string_view s);
Surface surface_from_string(std::string_view s);

const std::set<Detector>& all_detectors();
// Detectors applied to history blobs.
const std::set<Detector>& history_detectors();

Severity severity_for(Category c);

// What was scanned: a path (working tree), a commit id plus field name, or a
// blob id. `path` is a representative file path when one is known.
struct Origin {
    Surface surface = Surface::WORKING_TREE;
    std::string object;
    std::string field;
    std::string path;
};

struct Finding {
    Detector detector;
    Category category;
    Severity severity;
    Origin origin;
    std::size_t begin;
    std::size_t end;
    std::string matched;
    // Mask label for CUSTOM findings.
    std::string label;
};

struct PatternRule {
    std::string name;
    std::string pattern;
    bool case_insensitive = false;
    std::string mask_label;
    // Capture group whose span is reported; 0 is the whole match.
    int group = 0;
    boost::regex regex;
};

// Compiles `rule.pattern` into `rule.regex`; throws RULES_FILE_INVALID.
PatternRule compile_rule(PatternRule rule);

// YAML: a list (or a `rules:` list) of {name, pattern, flags, mask_label, group}.
// `flags` is "i"/"IGNORECASE" or a list of them. Throws RULES_FILE_INVALID.
std::vector<PatternRule> parse_rules(std::string_view yaml_text, std::string_view source = "<rules>");
std::vector<PatternRule> load_rules(const std::filesystem::path& path);

// Built-in secret rules plus the bundled rules file.
const std::vector<PatternRule>& builtin_secret_rules();

// Mask labels are restricted to [a-z]+ so masks stay recognisable.
std::string normalize_label(std::string_view label);

struct Dictionary {
    std::string name;
    std::vector<std::string> terms;
};

// One term per line; blank lines and lines starting with '#' are skipped.
// Throws EMPTY_DICTIONARY when no terms remain.
Dictionary parse_dictionary(std::string name, std::string_view text);
Dictionary load_dictionary(const std::filesystem::path& path);
// Every *.txt in `dir`, sorted by name. Empty ones are logged and skipped.
std::vector<Dictionary> load_dictionaries(const std::filesystem::path& dir);

Category dictionary_category(std::string_view name);

// Case-insensitive (ASCII) matcher over every dictionary.
class DictionaryMatcher {
public:
    DictionaryMatcher() = default;
    explicit DictionaryMatcher(const std::vector<Dictionary>& dictionaries);

    struct Hit {
        std::size_t begin;
        std::size_t end;
        Category category;
    };
    std::vector<Hit> find(std::string_view text) const;
    bool empty() const { return !automaton_; }

private:
    std::shared_ptr<const AhoCorasick> automaton_;
    std::vector<Category> categories_;
};

struct PiiOptions {
    // Use the loose JWT and URL patterns instead of the tightened ones.
    bool strict_patterns = false;
};

std::vector<Finding> detect_secrets(std::string_view text, const Origin& origin,
                                    const std::vector<PatternRule>& rules = builtin_secret_rules());
std::vector<Finding> detect_regex_pii(std::string_view text, const Origin& origin,
                                      const std::vector<PatternRule>& custom_rules = {},
                                      const PiiOptions& options = {});
std::vector<Finding> detect_endpoints(std::string_view text, const Origin& origin,
                                      const std::vector<std::string>& partner_domains = {});
std::vector<Finding> detect_dictionary(std::string_view text, const Origin& origin, const DictionaryMatcher& matcher);
// Throws NER_UNAVAILABLE when the backend cannot be reached.
std::vector<Finding> detect_ner(std::string_view text, const Origin& origin, NerBackend& backend,
                                const NerConfig& config);

bool is_private_ipv4(std::string_view dotted);
bool is_mask_artifact(std::string_view candidate);
// Byte ranges of every mask-shaped substring of `text`.
std::vector<std::pair<std::size_t, std::size_t>> mask_occurrences(std::string_view text);

// Stable sort by (surface, object, field, begin, end desc, detector, category).
std::vector<Finding> canonical_order(std::vector<Finding> findings);

// Lockfiles and package manifests whose URLs are downgraded to INFO.
bool is_lockfile_name(std::string_view path);

struct ScannerConfig {
    std::vector<PatternRule> secret_rules = builtin_secret_rules();
    std::vector<PatternRule> custom_rules;
    std::vector<Dictionary> dictionaries;
    std::vector<std::string> partner_domains;
    PiiOptions pii;
    bool aggressive_urls = false;
};

// Compiled detector set. Runs the requested detectors over one text, drops
// mask artifacts and returns canonically ordered findings.
class Scanner {
public:
    explicit Scanner(ScannerConfig config, std::shared_ptr<NerBackend> ner = nullptr,
                     std::shared_ptr<const NerConfig> ner_config = nullptr);

    std::vector<Finding> scan(std::string_view text, const Origin& origin, const std::set<Detector>& detectors) const;

    // Scans only inside [begin, end) windows of `text`; spans stay relative to `text`.
    std::vector<Finding> scan_windows(std::string_view text, const std::vector<std::pair<std::size_t, std::size_t>>& windows,
                                      const Origin& origin, const std::set<Detector>& detectors) const;

    bool has_ner() const { return ner_ != nullptr; }
    // True once an NER call failed; later calls skip NER.
    bool ner_skipped() const { return ner_failed_; }

private:
    ScannerConfig config_;
    DictionaryMatcher dictionary_;
    std::vector<std::string> partner_domains_;
    std::shared_ptr<NerBackend> ner_;
    std::shared_ptr<const NerConfig> ner_config_;
    mutable bool ner_failed_ = false;
};

}  // namespace scrub
