#include "scrub/ingest.hpp"

#include <sys/stat.h>

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include <spdlog/spdlog.h>

#include "scrub/crypto.hpp"
#include "scrub/error.hpp"
#include "scrub/git_backend.hpp"
#include "scrub/process.hpp"

namespace fs = std::filesystem;

namespace scrub {

namespace {

constexpr double kMiB = 1024.0 * 1024.0;

std::string replace_first(const std::string& s, const std::regex& re, const std::string& with) {
    return std::regex_replace(s, re, with, std::regex_constants::format_first_only);
}

std::string strip_suffix(std::string s, std::string_view suffix) {
    if (s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
        s.erase(s.size() - suffix.size());
    }
    return s;
}

// Scheme, then the first ':' -> '/', then userinfo; the host is what precedes the first '/'.
std::string path_part(const std::string& url) {
    static const std::regex scheme("[a-zA-Z]+://");
    static const std::regex colon(":");
    static const std::regex userinfo("[^@]+@");
    std::string s = replace_first(url, scheme, "");
    s = replace_first(s, colon, "/");
    s = replace_first(s, userinfo, "");
    const std::size_t slash = s.find('/');
    std::string path = slash == std::string::npos ? s : s.substr(slash + 1);
    if (!path.empty() && path.front() == '/') path.erase(path.begin());
    return path;
}

std::string trim_dots_dashes(const std::string& s) {
    const std::size_t b = s.find_first_not_of(".-");
    if (b == std::string::npos) return "";
    const std::size_t e = s.find_last_not_of(".-");
    return s.substr(b, e - b + 1);
}

std::string finish_name(std::string s) {
    if (s.empty()) return "repo";
    if (s.ends_with(".git") || s.ends_with(".atom")) s += "-repo";
    return s;
}

double to_mb(std::uintmax_t bytes) { return static_cast<double>(bytes) / kMiB; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string_view to_string(Channel c) {
    switch (c) {
        case Channel::BUNDLE: return "bundle";
        case Channel::ARCHIVE: return "archive";
        case Channel::REMOTE: return "remote";
    }
    return "bundle";
}

Channel channel_from_string(std::string_view s) {
    if (s == "bundle") return Channel::BUNDLE;
    if (s == "archive") return Channel::ARCHIVE;
    if (s == "remote") return Channel::REMOTE;
    throw Error(ErrorCode::CONFIG_INVALID, "unknown channel '" + std::string(s) + "'");
}

std::string safe_name(std::string_view url) {
    static const std::regex slashes("/+");
    static const std::regex disallowed("[^A-Za-z0-9.-]+");
    static const std::regex dash_runs("-{3,}");
    std::string path = path_part(strip_suffix(std::string(url), ".git"));
    path = std::regex_replace(path, slashes, "--");
    path = std::regex_replace(path, disallowed, "-");
    path = std::regex_replace(path, dash_runs, "--");
    return finish_name(trim_dots_dashes(path));
}

std::string repo_only_name(std::string_view url) {
    static const std::regex disallowed("[^A-Za-z0-9.-]+");
    static const std::regex dash_runs("-+");
    std::string u(url);
    const std::size_t b = u.find_first_not_of(" \t\r\n\f\v");
    u = b == std::string::npos ? "" : u.substr(b, u.find_last_not_of(" \t\r\n\f\v") - b + 1);
    u = strip_suffix(strip_suffix(u, "/"), ".git");
    const std::string path = path_part(u);
    const std::size_t slash = path.rfind('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    base = std::regex_replace(base, disallowed, "-");
    base = std::regex_replace(base, dash_runs, "-");
    return finish_name(trim_dots_dashes(base));
}

std::string lfs_pointer(std::uintmax_t size, const std::string& sha256_hex) {
    return "scrub-lfs-pointer v1\nsize " + std::to_string(size) + "\nsha256 " + sha256_hex + "\n";
}

IngestResult ingest_bundle(const fs::path& source) {
    IngestResult result{git::load_repository(source), {}};
    result.report.channel = Channel::BUNDLE;
    result.report.slug = safe_name(source.stem().string());
    result.report.bundle_path = source;
    return result;
}

IngestResult ingest_archive(const fs::path& dir, double threshold_mb) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::IO_ERROR, dir.string() + " is not a directory");
    const auto threshold = static_cast<std::uintmax_t>(threshold_mb * kMiB);

    std::vector<fs::path> files;
    for (auto it = fs::recursive_directory_iterator(dir); it != fs::recursive_directory_iterator(); ++it) {
        if (it->is_directory() && it->path().filename() == ".git") {
            it.disable_recursion_pending();
            continue;
        }
        if (it->is_regular_file()) files.push_back(it->path());
    }
    if (files.empty()) throw Error(ErrorCode::EMPTY_TREE, dir.string() + " contains no files");
    std::sort(files.begin(), files.end());

    RepoBuilder builder;
    Commit commit;
    IngestReport report;
    std::int64_t newest = 0;
    for (const auto& file : files) {
        const std::string rel = fs::relative(file, dir).generic_string();
        const std::uintmax_t size = fs::file_size(file);
        struct stat st {};
        if (::stat(file.c_str(), &st) == 0) newest = std::max<std::int64_t>(newest, st.st_mtime);
        std::string content;
        if (size > threshold) {
            content = lfs_pointer(size, crypto::sha256_file_hex(file));
            report.large_files.emplace_back(rel, to_mb(size));
            spdlog::info("{}: {:.2f} MB over threshold, stored as pointer", rel, to_mb(size));
        } else {
            content = read_file(file);
        }
        commit.tree.emplace(rel, builder.add_blob(std::move(content)));
    }
    commit.author_name = "Ingest Bot";
    commit.author_email = "ingest@example.invalid";
    commit.timestamp = {newest, 0};
    commit.message = "Initial import\n";
    const std::string id = builder.add_commit(std::move(commit));
    builder.set_ref("refs/heads/main", id);
    builder.set_head("refs/heads/main");

    report.channel = Channel::ARCHIVE;
    report.slug = safe_name(fs::absolute(dir).lexically_normal().filename().string());
    if (report.slug == "repo") report.slug = safe_name(fs::absolute(dir).lexically_normal().parent_path().filename().string());
    report.synthetic = true;
    return {std::move(builder).build(), std::move(report)};
}

IngestResult ingest_remote(const std::string& url, const fs::path& bundle_out, const fs::path& mirror_dir) {
    std::optional<TempDir> temp;
    fs::path repo_dir = mirror_dir;
    if (repo_dir.empty()) {
        temp.emplace("scrub-mirror");
        repo_dir = temp->path() / (safe_name(url) + ".git");
    }
    const std::string dir = repo_dir.string();

    if (!fs::is_directory(repo_dir)) {
        git::run_checked({"init", "--bare", "--quiet", dir}, ErrorCode::IO_ERROR);
        git::run_checked({"-C", dir, "remote", "add", "origin", url}, ErrorCode::IO_ERROR);
    } else if (git::run({"-C", dir, "remote", "get-url", "origin"}).out != url + "\n") {
        git::run({"-C", dir, "remote", "remove", "origin"});
        git::run_checked({"-C", dir, "remote", "add", "origin", url}, ErrorCode::IO_ERROR);
    }

    auto probe = git::run({"-C", dir, "ls-remote", "--symref", "origin"});
    if (probe.exit_code != 0) throw Error(ErrorCode::NETWORK, url + ": " + probe.err);

    git::run_checked({"-C", dir, "config", "remote.origin.mirror", "true"}, ErrorCode::IO_ERROR);
    git::run({"-C", dir, "config", "--unset-all", "remote.origin.fetch"});
    for (const char* spec : {"+refs/*:refs/*", "+refs/merge-requests/*:refs/merge-requests/*", "+refs/pull/*:refs/pull/*"}) {
        git::run_checked({"-C", dir, "config", "--add", "remote.origin.fetch", spec}, ErrorCode::IO_ERROR);
    }
    auto fetch = git::run({"-C", dir, "fetch", "--quiet", "--force", "--prune", "--prune-tags", "origin"});
    if (fetch.exit_code != 0) throw Error(ErrorCode::NETWORK, url + ": " + fetch.err);

    std::string head_ref;
    std::istringstream lines(probe.out);
    for (std::string line; std::getline(lines, line);) {
        if (line.rfind("ref: ", 0) == 0 && line.ends_with("\tHEAD")) {
            head_ref = line.substr(5, line.size() - 5 - 5);
            break;
        }
    }
    if (head_ref.empty()) {
        std::istringstream heads(git::run({"-C", dir, "for-each-ref", "--format=%(refname)", "refs/heads"}).out);
        std::getline(heads, head_ref);
    }
    if (!head_ref.empty()) git::run({"-C", dir, "symbolic-ref", "HEAD", head_ref});

    if (git::run({"-C", dir, "show-ref", "--quiet"}).exit_code != 0) {
        throw Error(ErrorCode::NO_REFS, url + ": no refs fetched (empty repository or no access)");
    }
    std::error_code ec;
    fs::remove(bundle_out, ec);
    if (bundle_out.has_parent_path()) fs::create_directories(bundle_out.parent_path());
    git::run_checked({"-C", dir, "bundle", "create", "--quiet", fs::absolute(bundle_out).string(), "--all"},
                     ErrorCode::IO_ERROR);

    // The mirror, not the bundle, knows which branch HEAD names.
    IngestResult result{git::load_repository(repo_dir), {}};
    result.report.channel = Channel::REMOTE;
    result.report.slug = safe_name(url);
    result.report.bundle_path = bundle_out;
    return result;
}

}  // namespace scrub
