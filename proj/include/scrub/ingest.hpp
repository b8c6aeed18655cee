#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scrub/repo_model.hpp"

namespace scrub {

enum class Channel { BUNDLE, ARCHIVE, REMOTE };

std::string_view to_string(Channel c);
Channel channel_from_string(std::string_view s);

struct IngestReport {
    Channel channel = Channel::BUNDLE;
    std::string slug;
    std::filesystem::path bundle_path;
    bool synthetic = false;
    // (path, size in MB) of files replaced by pointer files.
    std::vector<std::pair<std::string, double>> large_files;
};

struct IngestResult {
    RepoModel repo;
    IngestReport report;
};

// Filesystem- and GitLab-safe mirror name: "https://github.com/org/repo.git" -> "org--repo".
std::string safe_name(std::string_view url);
// Last path segment only: "https://github.com/org/repo.git" -> "repo".
std::string repo_only_name(std::string_view url);

inline constexpr double kDefaultThresholdMb = 95.0;

std::string lfs_pointer(std::uintmax_t size, const std::string& sha256_hex);

// Bundle file or repository directory.
IngestResult ingest_bundle(const std::filesystem::path& source);

// One synthetic commit on refs/heads/main holding every file under `dir`.
// Files strictly larger than threshold_mb * 2^20 bytes become pointer files.
// Throws EMPTY_TREE.
IngestResult ingest_archive(const std::filesystem::path& dir, double threshold_mb = kDefaultThresholdMb);

// Bare mirror fetch of every advertised ref, then `git bundle create --all`
// into `bundle_out`. `mirror_dir` is reused when it already holds a mirror;
// empty means a temporary directory. Throws NETWORK or NO_REFS.
IngestResult ingest_remote(const std::string& url, const std::filesystem::path& bundle_out,
                           const std::filesystem::path& mirror_dir = {});

}  // namespace scrub
