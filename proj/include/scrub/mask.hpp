#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scrub/detect.hpp"

namespace scrub {

// Secret key material for hash12. Never serialized; only the fingerprint is.
class Salt {
public:
    // Throws EMPTY_SALT.
    explicit Salt(std::string bytes);

    // SCRUB_SALT, else the contents of `salt_file` when given. Throws EMPTY_SALT.
    static Salt from_environment(const std::filesystem::path& salt_file = {});

    const std::string& bytes() const { return bytes_; }
    // First 8 hex chars of SHA-256(bytes).
    std::string fingerprint() const;

private:
    std::string bytes_;
};

// First 12 hex chars of HMAC-SHA256(salt, value).
std::string hash12(const Salt& salt, std::string_view value);
// Same with a raw key; throws EMPTY_SALT for an empty key.
std::string hash12(std::string_view salt, std::string_view value);

// `label` is the CUSTOM mask label. Throws UNMASKABLE_CATEGORY.
std::string mask_for(Category category, std::string_view value, const Salt& salt, std::string_view label = "name");

// Greedy longest-first selection of non-overlapping findings per scanned
// object; equal lengths fall back to detector priority, then leftmost.
std::vector<Finding> resolve_overlaps(const std::vector<Finding>& findings);

struct ManifestEntry {
    Category category;
    std::string original;
    std::string pseudonym;
    std::size_t occurrences = 0;
    std::set<Surface> surfaces;
};

class RedactionManifest {
public:
    void record(Category category, const std::string& original, const std::string& pseudonym, Surface surface,
                std::size_t count = 1);
    void merge(const RedactionManifest& other);

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    // Ordered by (category, original).
    std::vector<ManifestEntry> entries() const;

    // One JSON object per line. `include_originals` false gives the public variant.
    std::string to_jsonl(const std::string& salt_fingerprint, bool include_originals) const;
    void write(const std::filesystem::path& path, const std::string& salt_fingerprint, bool include_originals) const;

private:
    std::map<std::pair<Category, std::string>, ManifestEntry> entries_;
};

struct Replacement {
    std::string text;
    RedactionManifest manifest;
};

// Replaces each span with its mask, last span first. INFO findings are left
// alone. Throws SPAN_OUT_OF_RANGE for spans outside `text` or overlapping.
Replacement apply_replacements(std::string_view text, const std::vector<Finding>& findings, const Salt& salt);

}  // namespace scrub
