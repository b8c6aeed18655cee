#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "scrub/metadata.hpp"

namespace scrub {

struct SummaryRow {
    std::string metric;
    double sum = 0, mean = 0, std = 0, min = 0;
    double p10 = 0, p25 = 0, p50 = 0, p75 = 0, p90 = 0, p95 = 0;
    double max = 0;
};

struct LanguageRow {
    std::string language;
    double loc_share_pct = 0;
    std::int64_t total_loc = 0;
    std::int64_t repo_count = 0;
};

struct FunnelRow {
    std::string status;
    std::int64_t count = 0;
    double percent = 0;  // one decimal
};

using MetricSelector = std::function<double(const MetadataRecord&)>;

// Linear interpolation between closest ranks; `sorted` must be ascending and non-empty.
double percentile(const std::vector<double>& sorted, double p);

// Throws EMPTY_INPUT.
SummaryRow summarize(const std::string& metric, std::vector<double> values);
SummaryRow summarize(const std::vector<MetadataRecord>& records, const std::string& metric,
                     const MetricSelector& selector);

// Numeric record fields by name, in CSV column order.
const std::vector<std::pair<std::string, MetricSelector>>& numeric_metrics();

std::vector<LanguageRow> language_table(const std::vector<MetadataRecord>& records);

// Sorted by count descending, then status name.
std::vector<FunnelRow> funnel(const std::vector<std::string>& statuses);

// round(fraction * n) ids chosen by a seeded Fisher-Yates shuffle, returned in input order.
std::vector<std::string> audit_sample(const std::vector<std::string>& ids, double fraction, std::uint64_t seed);

// Reads every *.csv under csv_dir, writes summary.csv, languages.csv, funnel.csv to out_dir.
void write_report(const std::filesystem::path& csv_dir, const std::filesystem::path& out_dir,
                  std::int64_t min_loc = kMinLoc);

std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string languages_csv(const std::vector<LanguageRow>& rows);
std::string funnel_csv(const std::vector<FunnelRow>& rows);

}  // namespace scrub
