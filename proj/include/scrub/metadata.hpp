#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scrub/repo_model.hpp"
#include "scrub/zones.hpp"

namespace scrub {

enum class License { MIT, APACHE_2, BSD, GPL, LGPL, MPL, PROPRIETARY, UNKNOWN };

std::string_view to_string(License l);
License license_from_string(std::string_view s);

struct LineCounts {
    std::int64_t loc = 0;
    std::int64_t raw_loc = 0;
    std::int64_t files = 0;
    std::map<std::string, std::int64_t> per_language;
    std::map<std::string, std::int64_t> per_extension;
};

struct QualityMetrics {
    double avg_func_length = 0;
    double docstring_ratio = 0;
    double duplication_ratio = 0;
    std::int64_t documentation_cnt = 0;
};

struct HistoryMetrics {
    std::int64_t created_at = 0;
    std::int64_t commit_count = 0;
    std::int64_t branch_count = 0;
    std::int64_t contributors_count = 0;
};

struct RepoSizes {
    std::uintmax_t git_history_bytes = 0;
    std::uintmax_t bundle_bytes = 0;
    std::uintmax_t worktree_bytes = 0;
};

struct MetadataRecord {
    std::string repo_id;
    std::string repo_name;
    std::map<std::string, double> languages;
    std::map<std::string, double> extensions;
    std::string stack;
    License license_type = License::UNKNOWN;
    std::int64_t created_at = 0;  // seconds since epoch, UTC
    std::int64_t commit_count = 0;
    std::int64_t branch_count = 0;
    std::int64_t contributors_count = 0;
    double repo_git_history_mb = 0;
    double repo_bundle_mb = 0;
    double repo_worktree_mb = 0;
    std::int64_t files = 0;
    std::int64_t loc = 0;
    std::int64_t raw_loc = 0;
    double avg_func_length = 0;
    double docstring_ratio = 0;
    double duplication_ratio = 0;
    std::int64_t documentation_cnt = 0;

    bool operator==(const MetadataRecord&) const = default;
};

enum class SelectionReason {
    OK,
    LOC_BELOW_THRESHOLD,
    UNPARSEABLE,
    ONLY_GENERATED,
    FORK_DUPLICATE,
    NOT_SOFTWARE,
    PARTIAL_CODEBASE,
    COURSEWORK,
    AI_GENERATED,
    BELOW_QUALITY_BAR,
};

std::string_view to_string(SelectionReason r);

struct SelectionDecision {
    bool accepted = false;
    SelectionReason reason = SelectionReason::UNPARSEABLE;
};

inline constexpr std::int64_t kMinLoc = 1000;

// Non-blank lines: lines with at least one non-whitespace byte.
std::int64_t count_nonblank_lines(std::string_view text);

LineCounts count_lines(const RepoModel& repo, const LanguageMap& map = LanguageMap::builtin());
QualityMetrics quality_metrics(const RepoModel& repo, const LanguageMap& map = LanguageMap::builtin());
// Throws EMPTY_REPOSITORY.
HistoryMetrics history_metrics(const RepoModel& repo);

// `files` maps root-level file names to their contents.
License detect_license(const std::map<std::string, std::string>& files);
License detect_license(const RepoModel& repo);

// Top three languages, "Lang1 62.1%, Lang2 20.3%, Lang3 9.9%".
std::string format_stack(const std::map<std::string, double>& shares);

// bytes / 2^20 rounded to two decimals.
double to_megabytes(std::uintmax_t bytes);

// Sizes of a bundle file or repository directory plus the head tree of `repo`.
RepoSizes measure_sizes(const std::filesystem::path& source, const RepoModel& repo);

MetadataRecord extract(const RepoModel& repo, const RepoSizes& sizes, const std::string& repo_name,
                       const LanguageMap& map = LanguageMap::builtin());

// nullopt stands for a record whose extraction failed.
SelectionDecision select(const std::optional<MetadataRecord>& record, std::int64_t min_loc = kMinLoc);

std::vector<std::string> consistency_check(const MetadataRecord& record);

const std::vector<std::string>& csv_header();
std::string to_csv(const std::vector<MetadataRecord>& records);
// Throws CONFIG_INVALID on malformed input.
std::vector<MetadataRecord> from_csv(std::string_view text);
nlohmann::json to_json(const MetadataRecord& record);
MetadataRecord record_from_json(const nlohmann::json& j);

std::string format_timestamp(std::int64_t seconds);
std::int64_t parse_timestamp(std::string_view iso);
// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace scrub
