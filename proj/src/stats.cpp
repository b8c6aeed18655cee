#include "scrub/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "scrub/error.hpp"

namespace fs = std::filesystem;

namespace scrub {

namespace {

double round1(double v) { return std::round(v * 10.0) / 10.0; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write " + p.string());
    out << text;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

}  // namespace

double percentile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw Error(ErrorCode::EMPTY_INPUT, "percentile of no values");
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SummaryRow summarize(const std::string& metric, std::vector<double> values) {
    if (values.empty()) throw Error(ErrorCode::EMPTY_INPUT, "no values for " + metric);
    std::sort(values.begin(), values.end());
    SummaryRow row;
    row.metric = metric;
    const auto n = static_cast<double>(values.size());
    row.sum = std::accumulate(values.begin(), values.end(), 0.0);
    row.mean = row.sum / n;
    double ss = 0;
    for (double v : values) ss += (v - row.mean) * (v - row.mean);
    row.std = std::sqrt(ss / n);
    row.min = values.front();
    row.max = values.back();
    row.p10 = percentile(values, 0.10);
    row.p25 = percentile(values, 0.25);
    row.p50 = percentile(values, 0.50);
    row.p75 = percentile(values, 0.75);
    row.p90 = percentile(values, 0.90);
    row.p95 = percentile(values, 0.95);
    return row;
}

SummaryRow summarize(const std::vector<MetadataRecord>& records, const std::string& metric,
                     const MetricSelector& selector) {
    std::vector<double> values;
    values.reserve(records.size());
    for (const auto& r : records) values.push_back(selector(r));
    return summarize(metric, std::move(values));
}

const std::vector<std::pair<std::string, MetricSelector>>& numeric_metrics() {
    using R = const MetadataRecord&;
    static const std::vector<std::pair<std::string, MetricSelector>> metrics{
        {"commit_count", [](R r) { return static_cast<double>(r.commit_count); }},
        {"branch_count", [](R r) { return static_cast<double>(r.branch_count); }},
        {"contributors_count", [](R r) { return static_cast<double>(r.contributors_count); }},
        {"repo_git_history_mb", [](R r) { return r.repo_git_history_mb; }},
        {"repo_bundle_mb", [](R r) { return r.repo_bundle_mb; }},
        {"repo_worktree_mb", [](R r) { return r.repo_worktree_mb; }},
        {"files", [](R r) { return static_cast<double>(r.files); }},
        {"loc", [](R r) { return static_cast<double>(r.loc); }},
        {"raw_loc", [](R r) { return static_cast<double>(r.raw_loc); }},
        {"avg_func_length", [](R r) { return r.avg_func_length; }},
        {"docstring_ratio", [](R r) { return r.docstring_ratio; }},
        {"duplication_ratio", [](R r) { return r.duplication_ratio; }},
        {"documentation_cnt", [](R r) { return static_cast<double>(r.documentation_cnt); }},
    };
    return metrics;
}

std::vector<LanguageRow> language_table(const std::vector<MetadataRecord>& records) {
    std::map<std::string, double> weighted;
    std::map<std::string, std::int64_t> repos;
    double total = 0;
    for (const auto& r : records) {
        for (const auto& [lang, share] : r.languages) {
            if (share <= 0) continue;
            const double loc = share * static_cast<double>(r.loc);
            weighted[lang] += loc;
            total += loc;
            ++repos[lang];
        }
    }
    std::vector<LanguageRow> rows;
    for (const auto& [lang, loc] : weighted) {
        LanguageRow row;
        row.language = lang;
        row.total_loc = std::llround(loc);
        row.repo_count = repos[lang];
        row.loc_share_pct = total > 0 ? 100.0 * loc / total : 0.0;
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const LanguageRow& a, const LanguageRow& b) { return a.loc_share_pct > b.loc_share_pct; });
    return rows;
}

std::vector<FunnelRow> funnel(const std::vector<std::string>& statuses) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& s : statuses) ++counts[s];
    std::vector<FunnelRow> rows;
    const auto n = static_cast<double>(statuses.size());
    for (const auto& [status, count] : counts) {
        rows.push_back({status, count, round1(100.0 * static_cast<double>(count) / n)});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const FunnelRow& a, const FunnelRow& b) { return a.count > b.count; });
    return rows;
}

std::vector<std::string> audit_sample(const std::vector<std::string>& ids, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw Error(ErrorCode::CONFIG_INVALID, "audit fraction must lie in [0, 1]");
    }
    const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ids.size())));
    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates; uniform_int_distribution is implementation-defined, so draw by modulo.
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng() % (ids.size() - i));
        std::swap(order[i], order[j]);
    }
    order.resize(k);
    std::sort(order.begin(), order.end());
    std::vector<std::string> out;
    out.reserve(k);
    for (std::size_t i : order) out.push_back(ids[i]);
    return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::string out = "# percentiles: linear interpolation between closest ranks; std: population\n";
    out += "metric,sum,mean,std,min,p10,p25,p50,p75,p90,p95,max\n";
    for (const auto& r : rows) {
        out += csv_cell(r.metric);
        for (double v : {r.sum, r.mean, r.std, r.min, r.p10, r.p25, r.p50, r.p75, r.p90, r.p95, r.max}) {
            out += "," + format_double(v);
        }
        out += "\n";
    }
    return out;
}

std::string languages_csv(const std::vector<LanguageRow>& rows) {
    std::string out = "language,loc_share_pct,total_loc,repo_count\n";
    for (const auto& r : rows) {
        out += csv_cell(r.language) + "," + format_double(r.loc_share_pct) + "," + std::to_string(r.total_loc) + "," +
               std::to_string(r.repo_count) + "\n";
    }
    return out;
}

std::string funnel_csv(const std::vector<FunnelRow>& rows) {
    std::string out = "status,count,percent\n";
    for (const auto& r : rows) {
        char pct[32];
        std::snprintf(pct, sizeof pct, "%.1f", r.percent);
        out += csv_cell(r.status) + "," + std::to_string(r.count) + "," + pct + "\n";
    }
    return out;
}

void write_report(const fs::path& csv_dir, const fs::path& out_dir, std::int64_t min_loc) {
    if (!fs::is_directory(csv_dir)) throw Error(ErrorCode::IO_ERROR, csv_dir.string() + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(csv_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<MetadataRecord> all;
    for (const auto& f : files) {
        auto records = from_csv(read_file(f));
        all.insert(all.end(), records.begin(), records.end());
    }
    if (all.empty()) throw Error(ErrorCode::EMPTY_INPUT, "no metadata records under " + csv_dir.string());

    std::vector<MetadataRecord> accepted;
    std::vector<std::string> statuses;
    for (const auto& r : all) {
        const auto decision = select(r, min_loc);
        statuses.emplace_back(decision.accepted ? "ACCEPTED" : std::string(to_string(decision.reason)));
        if (decision.accepted) accepted.push_back(r);
    }

    std::vector<SummaryRow> summary;
    if (!accepted.empty()) {
        for (const auto& [name, selector] : numeric_metrics()) summary.push_back(summarize(accepted, name, selector));
    }
    fs::create_directories(out_dir);
    write_file(out_dir / "summary.csv", summary_csv(summary));
    write_file(out_dir / "languages.csv", languages_csv(language_table(accepted)));
    write_file(out_dir / "funnel.csv", funnel_csv(funnel(statuses)));
}

}  // namespace scrub
