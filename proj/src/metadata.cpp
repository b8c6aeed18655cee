#include "scrub/metadata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <set>
#include <unordered_set>
#include <array>
#include <limits>

#include <boost/uuid/uuid.hpp>
#include <boost/uuid/uuid_generators.hpp>
#include <boost/uuid/uuid_io.hpp>

#include "scrub/error.hpp"
#include "scrub/git_backend.hpp"
#include "scrub/process.hpp"

namespace fs = std::filesystem;

namespace scrub {

namespace {

constexpr std::array<std::pair<License, std::string_view>, 8> kLicenseNames{{
    {License::MIT, "MIT"},
    {License::APACHE_2, "APACHE_2"},
    {License::BSD, "BSD"},
    {License::GPL, "GPL"},
    {License::LGPL, "LGPL"},
    {License::MPL, "MPL"},
    {License::PROPRIETARY, "PROPRIETARY"},
    {License::UNKNOWN, "UNKNOWN"},
}};

bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string_view trim_view(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        fn(pos, text.substr(pos, nl - pos));
        pos = nl + 1;
    }
}

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

// Collapses whitespace runs so signatures survive line wrapping.
std::string normalize_ws(std::string_view s) {
    std::string out;
    bool space = false;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            space = true;
            continue;
        }
        if (space && !out.empty()) out.push_back(' ');
        space = false;
        out.push_back(static_cast<char>(std::toupper(c)));
    }
    return out;
}

struct SupportedFile {
    std::string path;
    std::string language;
    const Blob* blob;
};

std::vector<SupportedFile> supported_files(const RepoModel& repo, const LanguageMap& map) {
    std::vector<SupportedFile> out;
    if (repo.empty()) return out;
    for (const auto& [path, blob_id] : repo.head_commit().tree) {
        const Blob& blob = repo.blob(blob_id);
        if (!blob.is_text() || !map.is_supported(path)) continue;
        out.push_back({path, map.language_for(path), &blob});
    }
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(std::move(field));
            field.clear();
            field_started = false;
            rows.push_back(std::move(row));
            row.clear();
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (quoted) throw Error(ErrorCode::CONFIG_INVALID, "unterminated quoted CSV field");
    if (field_started || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::int64_t parse_int(const std::string& s, const char* name) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw Error(ErrorCode::CONFIG_INVALID, std::string("bad integer for ") + name + ": '" + s + "'");
    }
    return v;
}

double parse_double(const std::string& s, const char* name) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw Error(ErrorCode::CONFIG_INVALID, std::string("bad number for ") + name + ": '" + s + "'");
    }
    return v;
}

std::string shares_json(const std::map<std::string, double>& shares) { return nlohmann::json(shares).dump(); }

std::map<std::string, double> parse_shares(const std::string& s, const char* name) {
    try {
        return nlohmann::json::parse(s).get<std::map<std::string, double>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::CONFIG_INVALID, std::string("bad JSON for ") + name + ": " + e.what());
    }
}

}  // namespace

std::string_view to_string(License l) {
    for (const auto& [v, n] : kLicenseNames) {
        if (v == l) return n;
    }
    return "UNKNOWN";
}

License license_from_string(std::string_view s) {
    for (const auto& [v, n] : kLicenseNames) {
        if (n == s) return v;
    }
    throw Error(ErrorCode::CONFIG_INVALID, "unknown license '" + std::string(s) + "'");
}

std::string_view to_string(SelectionReason r) {
    switch (r) {
        case SelectionReason::OK: return "OK";
        case SelectionReason::LOC_BELOW_THRESHOLD: return "LOC_BELOW_THRESHOLD";
        case SelectionReason::UNPARSEABLE: return "UNPARSEABLE";
        case SelectionReason::ONLY_GENERATED: return "ONLY_GENERATED";
        case SelectionReason::FORK_DUPLICATE: return "FORK_DUPLICATE";
        case SelectionReason::NOT_SOFTWARE: return "NOT_SOFTWARE";
        case SelectionReason::PARTIAL_CODEBASE: return "PARTIAL_CODEBASE";
        case SelectionReason::COURSEWORK: return "COURSEWORK";
        case SelectionReason::AI_GENERATED: return "AI_GENERATED";
        case SelectionReason::BELOW_QUALITY_BAR: return "BELOW_QUALITY_BAR";
    }
    return "UNPARSEABLE";
}

std::int64_t count_nonblank_lines(std::string_view text) {
    std::int64_t n = 0;
    for_each_line(text, [&](std::size_t, std::string_view line) { n += is_blank(line) ? 0 : 1; });
    return n;
}

LineCounts count_lines(const RepoModel& repo, const LanguageMap& map) {
    LineCounts counts;
    if (repo.empty()) return counts;
    for (const auto& [path, blob_id] : repo.head_commit().tree) {
        ++counts.files;
        const Blob& blob = repo.blob(blob_id);
        if (!blob.is_text()) continue;
        const std::int64_t n = count_nonblank_lines(blob.bytes());
        counts.raw_loc += n;
        if (!map.is_supported(path)) continue;
        counts.loc += n;
        counts.per_language[map.language_for(path)] += n;
        counts.per_extension[extension_key(path)] += n;
    }
    return counts;
}

QualityMetrics quality_metrics(const RepoModel& repo, const LanguageMap& map) {
    QualityMetrics q;
    std::int64_t comment_lines = 0;
    std::int64_t code_lines = 0;
    std::int64_t total_lines = 0;
    std::unordered_set<std::string_view> distinct;
    std::int64_t function_lines = 0;
    std::int64_t function_count = 0;

    const auto files = supported_files(repo, map);
    for (const auto& file : files) {
        const std::string_view text = file.blob->bytes();
        std::vector<bool> in_comment(text.size(), false);
        const LanguageSpec* lang = map.language(file.language);
        if (lang && lang->lexer) {
            for (const auto& z : extract_zones(text, file.language, map)) {
                if (z.kind != ZoneKind::COMMENT) continue;
                std::fill(in_comment.begin() + static_cast<long>(z.begin), in_comment.begin() + static_cast<long>(z.end),
                          true);
            }
        }
        for_each_line(text, [&](std::size_t offset, std::string_view line) {
            if (is_blank(line)) return;
            bool all_comment = true;
            for (std::size_t i = 0; i < line.size() && all_comment; ++i) {
                if (!std::isspace(static_cast<unsigned char>(line[i])) && !in_comment[offset + i]) all_comment = false;
            }
            ++(all_comment ? comment_lines : code_lines);
            ++total_lines;
            distinct.insert(trim_view(line));
        });
        for (const auto& fn : extract_functions(text, file.language, map)) {
            function_lines += static_cast<std::int64_t>(fn.line_count);
            ++function_count;
        }
    }
    q.docstring_ratio = code_lines == 0 ? 0.0 : static_cast<double>(comment_lines) / static_cast<double>(code_lines);
    q.duplication_ratio =
        total_lines == 0 ? 0.0 : 1.0 - static_cast<double>(distinct.size()) / static_cast<double>(total_lines);
    q.avg_func_length =
        function_count == 0 ? 0.0 : static_cast<double>(function_lines) / static_cast<double>(function_count);

    if (!repo.empty()) {
        for (const auto& [path, blob_id] : repo.head_commit().tree) {
            if (path.find('/') != std::string::npos || !map.is_doc_name(path)) continue;
            const Blob& blob = repo.blob(blob_id);
            if (!blob.is_text()) continue;
            const std::string& text = blob.bytes();
            std::int64_t lines = std::count(text.begin(), text.end(), '\n');
            if (!text.empty() && text.back() != '\n') ++lines;
            q.documentation_cnt += lines;
        }
    }
    return q;
}

HistoryMetrics history_metrics(const RepoModel& repo) {
    if (repo.commits().empty()) throw Error(ErrorCode::EMPTY_REPOSITORY, "repository has no commits");
    HistoryMetrics h;
    h.created_at = std::numeric_limits<std::int64_t>::max();
    std::set<std::pair<std::string, std::string>> authors;
    std::set<std::string> reachable;
    for (const auto& [name, tip] : repo.refs()) {
        auto r = repo.reachable_from(tip);
        reachable.insert(r.begin(), r.end());
    }
    for (const auto& id : reachable) {
        const Commit& c = repo.commit(id);
        h.created_at = std::min(h.created_at, c.timestamp.seconds);
        authors.emplace(c.author_name, c.author_email);
    }
    h.contributors_count = static_cast<std::int64_t>(authors.size());

    // Most recently active branch: newest tip, ties to the smallest ref name.
    auto is_branch = [](const std::string& name) {
        return (name.starts_with("refs/heads/") || name.starts_with("refs/remotes/")) && !name.ends_with("/HEAD");
    };
    const bool have_branches = std::any_of(repo.refs().begin(), repo.refs().end(),
                                           [&](const auto& r) { return is_branch(r.first); });
    std::string best;
    std::int64_t best_time = std::numeric_limits<std::int64_t>::min();
    for (const auto& [name, tip] : repo.refs()) {
        if (have_branches && !is_branch(name)) continue;
        if (is_branch(name)) ++h.branch_count;
        const std::int64_t t = repo.commit(tip).timestamp.seconds;
        if (t > best_time) {
            best_time = t;
            best = name;
        }
    }
    if (!best.empty()) h.commit_count = static_cast<std::int64_t>(repo.reachable_from(repo.refs().at(best)).size());

    return h;
}

License detect_license(const std::map<std::string, std::string>& files) {
    for (const auto& [name, content] : files) {
        const std::string n = upper(name);
        if (!(n.starts_with("LICENSE") || n.starts_with("LICENCE") || n.starts_with("COPYING"))) continue;
        const std::string text = normalize_ws(content);
        auto has = [&](std::string_view sig) { return text.find(sig) != std::string::npos; };
        if (has("GNU LESSER GENERAL PUBLIC LICENSE") || has("GNU LIBRARY GENERAL PUBLIC LICENSE")) return License::LGPL;
        if (has("GNU GENERAL PUBLIC LICENSE") || has("GNU AFFERO GENERAL PUBLIC LICENSE")) return License::GPL;
        if (has("APACHE LICENSE") && (has("VERSION 2.0") || has("APACHE-2.0"))) return License::APACHE_2;
        if (has("MIT LICENSE") || has("PERMISSION IS HEREBY GRANTED, FREE OF CHARGE")) return License::MIT;
        if (has("MOZILLA PUBLIC LICENSE")) return License::MPL;
        if (has("REDISTRIBUTION AND USE IN SOURCE AND BINARY FORMS")) return License::BSD;
        if (has("PROPRIETARY") || has("ALL RIGHTS RESERVED") || has("CONFIDENTIAL")) return License::PROPRIETARY;
    }
    return License::UNKNOWN;
}

License detect_license(const RepoModel& repo) {
    if (repo.empty()) return License::UNKNOWN;
    std::map<std::string, std::string> root;
    for (const auto& [path, blob_id] : repo.head_commit().tree) {
        if (path.find('/') != std::string::npos) continue;
        const Blob& blob = repo.blob(blob_id);
        if (blob.is_text()) root.emplace(path, blob.bytes());
    }
    return detect_license(root);
}

std::string format_stack(const std::map<std::string, double>& shares) {
    std::vector<std::pair<std::string, double>> items(shares.begin(), shares.end());
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::string out;
    for (std::size_t i = 0; i < items.size() && i < 3; ++i) {
        char pct[32];
        std::snprintf(pct, sizeof pct, "%.1f%%", items[i].second * 100.0);
        if (!out.empty()) out += ", ";
        out += items[i].first + " " + pct;
    }
    return out;
}

double to_megabytes(std::uintmax_t bytes) {
    return std::round(static_cast<double>(bytes) / (1024.0 * 1024.0) * 100.0) / 100.0;
}

RepoSizes measure_sizes(const fs::path& source, const RepoModel& repo) {
    RepoSizes sizes;
    if (!repo.empty()) {
        for (const auto& [path, blob_id] : repo.head_commit().tree) sizes.worktree_bytes += repo.blob(blob_id).size();
    }
    TempDir tmp("scrub-sizes");
    if (fs::is_directory(source)) {
        const fs::path dot_git = source / ".git";
        sizes.git_history_bytes = git::directory_size(fs::is_directory(dot_git) ? dot_git : source);
        const fs::path bundle = tmp.path() / "repo.bundle";
        git::run_checked({"-C", source.string(), "bundle", "create", "--quiet", bundle.string(), "--all"},
                         ErrorCode::MALFORMED_BUNDLE);
        sizes.bundle_bytes = fs::file_size(bundle);
    } else {
        sizes.bundle_bytes = fs::file_size(source);
        const fs::path mirror = tmp.path() / "mirror.git";
        git::run_checked({"clone", "--quiet", "--mirror", fs::absolute(source).string(), mirror.string()},
                         ErrorCode::MALFORMED_BUNDLE);
        sizes.git_history_bytes = git::directory_size(mirror);
    }
    return sizes;
}

MetadataRecord extract(const RepoModel& repo, const RepoSizes& sizes, const std::string& repo_name,
                       const LanguageMap& map) {
    MetadataRecord r;
    r.repo_id = boost::uuids::to_string(boost::uuids::random_generator()());
    r.repo_name = repo_name;

    const LineCounts counts = count_lines(repo, map);
    r.files = counts.files;
    r.loc = counts.loc;
    r.raw_loc = counts.raw_loc;
    if (counts.loc > 0) {
        const auto total = static_cast<double>(counts.loc);
        for (const auto& [lang, n] : counts.per_language) r.languages[lang] = static_cast<double>(n) / total;
        for (const auto& [ext, n] : counts.per_extension) r.extensions[ext] = static_cast<double>(n) / total;
    }
    r.stack = format_stack(r.languages);
    r.license_type = detect_license(repo);

    const HistoryMetrics h = history_metrics(repo);
    r.created_at = h.created_at;
    r.commit_count = h.commit_count;
    r.branch_count = h.branch_count;
    r.contributors_count = h.contributors_count;

    r.repo_git_history_mb = to_megabytes(sizes.git_history_bytes);
    r.repo_bundle_mb = to_megabytes(sizes.bundle_bytes);
    r.repo_worktree_mb = to_megabytes(sizes.worktree_bytes);

    const QualityMetrics q = quality_metrics(repo, map);
    r.avg_func_length = q.avg_func_length;
    r.docstring_ratio = q.docstring_ratio;
    r.duplication_ratio = q.duplication_ratio;
    r.documentation_cnt = q.documentation_cnt;
    return r;
}

SelectionDecision select(const std::optional<MetadataRecord>& record, std::int64_t min_loc) {
    if (!record) return {false, SelectionReason::UNPARSEABLE};
    if (record->loc < min_loc) return {false, SelectionReason::LOC_BELOW_THRESHOLD};
    return {true, SelectionReason::OK};
}

std::vector<std::string> consistency_check(const MetadataRecord& r) {
    std::vector<std::string> out;
    if (r.commit_count == 0 && r.loc > 0) out.emplace_back("COMMITS_ZERO_WITH_CODE");
    if (r.loc > r.raw_loc) out.emplace_back("LOC_EXCEEDS_RAW");
    if (r.loc > 0) {
        double sum = 0;
        for (const auto& [k, v] : r.languages) sum += v;
        if (sum < 0.999 || sum > 1.001) out.emplace_back("SHARES_NOT_NORMALIZED");
    }
    const bool negative = r.commit_count < 0 || r.branch_count < 0 || r.contributors_count < 0 || r.files < 0 ||
                          r.loc < 0 || r.raw_loc < 0 || r.documentation_cnt < 0 || r.repo_git_history_mb < 0 ||
                          r.repo_bundle_mb < 0 || r.repo_worktree_mb < 0 || r.avg_func_length < 0 ||
                          r.docstring_ratio < 0 ||
                          std::any_of(r.languages.begin(), r.languages.end(), [](const auto& p) { return p.second < 0; });
    if (negative) out.emplace_back("NEGATIVE_FIELD");
    if (r.duplication_ratio < 0 || r.duplication_ratio > 1) out.emplace_back("DUP_RATIO_RANGE");
    return out;
}

const std::vector<std::string>& csv_header() {
    static const std::vector<std::string> header{
        "repo_id",          "repo_name",          "languages",          "extensions",      "stack",
        "license_type",     "created_at",         "commit_count",       "branch_count",    "contributors_count",
        "repo_git_history_mb", "repo_bundle_mb",  "repo_worktree_mb",   "files",           "loc",
        "raw_loc",          "avg_func_length",    "docstring_ratio",    "duplication_ratio", "documentation_cnt"};
    return header;
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::string format_timestamp(std::int64_t seconds) {
    const std::time_t t = static_cast<std::time_t>(seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::int64_t parse_timestamp(std::string_view iso) {
    std::tm tm{};
    const std::string s(iso);
    const char* end = strptime(s.c_str(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    if (!end || *end != '\0') throw Error(ErrorCode::CONFIG_INVALID, "bad timestamp '" + s + "'");
    return static_cast<std::int64_t>(timegm(&tm));
}

std::string to_csv(const std::vector<MetadataRecord>& records) {
    std::string out;
    for (std::size_t i = 0; i < csv_header().size(); ++i) out += (i ? "," : "") + csv_header()[i];
    out += "\n";
    for (const auto& r : records) {
        const std::vector<std::string> cells{r.repo_id,
                                             r.repo_name,
                                             shares_json(r.languages),
                                             shares_json(r.extensions),
                                             r.stack,
                                             std::string(to_string(r.license_type)),
                                             format_timestamp(r.created_at),
                                             std::to_string(r.commit_count),
                                             std::to_string(r.branch_count),
                                             std::to_string(r.contributors_count),
                                             format_double(r.repo_git_history_mb),
                                             format_double(r.repo_bundle_mb),
                                             format_double(r.repo_worktree_mb),
                                             std::to_string(r.files),
                                             std::to_string(r.loc),
                                             std::to_string(r.raw_loc),
                                             format_double(r.avg_func_length),
                                             format_double(r.docstring_ratio),
                                             format_double(r.duplication_ratio),
                                             std::to_string(r.documentation_cnt)};
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_escape(cells[i]);
        out += "\n";
    }
    return out;
}

std::vector<MetadataRecord> from_csv(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    auto rows = parse_csv(text);
    if (rows.empty()) throw Error(ErrorCode::CONFIG_INVALID, "empty CSV");
    const auto& header = rows.front();
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const auto& name : csv_header()) {
        if (!col.count(name)) throw Error(ErrorCode::CONFIG_INVALID, "CSV lacks column " + name);
    }
    std::vector<MetadataRecord> out;
    for (std::size_t ri = 1; ri < rows.size(); ++ri) {
        const auto& row = rows[ri];
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() != header.size()) {
            throw Error(ErrorCode::CONFIG_INVALID, "CSV row " + std::to_string(ri) + " has " +
                                                       std::to_string(row.size()) + " cells");
        }
        auto cell = [&](const char* name) -> const std::string& { return row[col.at(name)]; };
        MetadataRecord r;
        r.repo_id = cell("repo_id");
        r.repo_name = cell("repo_name");
        r.languages = parse_shares(cell("languages"), "languages");
        r.extensions = parse_shares(cell("extensions"), "extensions");
        r.stack = cell("stack");
        r.license_type = license_from_string(cell("license_type"));
        r.created_at = parse_timestamp(cell("created_at"));
        r.commit_count = parse_int(cell("commit_count"), "commit_count");
        r.branch_count = parse_int(cell("branch_count"), "branch_count");
        r.contributors_count = parse_int(cell("contributors_count"), "contributors_count");
        r.repo_git_history_mb = parse_double(cell("repo_git_history_mb"), "repo_git_history_mb");
        r.repo_bundle_mb = parse_double(cell("repo_bundle_mb"), "repo_bundle_mb");
        r.repo_worktree_mb = parse_double(cell("repo_worktree_mb"), "repo_worktree_mb");
        r.files = parse_int(cell("files"), "files");
        r.loc = parse_int(cell("loc"), "loc");
        r.raw_loc = parse_int(cell("raw_loc"), "raw_loc");
        r.avg_func_length = parse_double(cell("avg_func_length"), "avg_func_length");
        r.docstring_ratio = parse_double(cell("docstring_ratio"), "docstring_ratio");
        r.duplication_ratio = parse_double(cell("duplication_ratio"), "duplication_ratio");
        r.documentation_cnt = parse_int(cell("documentation_cnt"), "documentation_cnt");
        out.push_back(std::move(r));
    }
    return out;
}

nlohmann::json to_json(const MetadataRecord& r) {
    nlohmann::ordered_json j;
    j["repo_id"] = r.repo_id;
    j["repo_name"] = r.repo_name;
    j["languages"] = r.languages;
    j["extensions"] = r.extensions;
    j["stack"] = r.stack;
    j["license_type"] = to_string(r.license_type);
    j["created_at"] = format_timestamp(r.created_at);
    j["commit_count"] = r.commit_count;
    j["branch_count"] = r.branch_count;
    j["contributors_count"] = r.contributors_count;
    j["repo_git_history_mb"] = r.repo_git_history_mb;
    j["repo_bundle_mb"] = r.repo_bundle_mb;
    j["repo_worktree_mb"] = r.repo_worktree_mb;
    j["files"] = r.files;
    j["loc"] = r.loc;
    j["raw_loc"] = r.raw_loc;
    j["avg_func_length"] = r.avg_func_length;
    j["docstring_ratio"] = r.docstring_ratio;
    j["duplication_ratio"] = r.duplication_ratio;
    j["documentation_cnt"] = r.documentation_cnt;
    return j;
}

MetadataRecord record_from_json(const nlohmann::json& j) {
    try {
        MetadataRecord r;
        r.repo_id = j.at("repo_id").get<std::string>();
        r.repo_name = j.at("repo_name").get<std::string>();
        r.languages = j.at("languages").get<std::map<std::string, double>>();
        r.extensions = j.at("extensions").get<std::map<std::string, double>>();
        r.stack = j.at("stack").get<std::string>();
        r.license_type = license_from_string(j.at("license_type").get<std::string>());
        r.created_at = parse_timestamp(j.at("created_at").get<std::string>());
        r.commit_count = j.at("commit_count").get<std::int64_t>();
        r.branch_count = j.at("branch_count").get<std::int64_t>();
        r.contributors_count = j.at("contributors_count").get<std::int64_t>();
        r.repo_git_history_mb = j.at("repo_git_history_mb").get<double>();
        r.repo_bundle_mb = j.at("repo_bundle_mb").get<double>();
        r.repo_worktree_mb = j.at("repo_worktree_mb").get<double>();
        r.files = j.at("files").get<std::int64_t>();
        r.loc = j.at("loc").get<std::int64_t>();
        r.raw_loc = j.at("raw_loc").get<std::int64_t>();
        r.avg_func_length = j.at("avg_func_length").get<double>();
        r.docstring_ratio = j.at("docstring_ratio").get<double>();
        r.duplication_ratio = j.at("duplication_ratio").get<double>();
        r.documentation_cnt = j.at("documentation_cnt").get<std::int64_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::CONFIG_INVALID, std::string("metadata JSON: ") + e.what());
    }
}

}  // namespace scrub
