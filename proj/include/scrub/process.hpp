#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace scrub {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

struct ProcessOptions {
    std::optional<std::filesystem::path> cwd;
    // File redirected to the child's stdin; /dev/null when unset.
    std::optional<std::filesystem::path> stdin_file;
    std::vector<std::pair<std::string, std::string>> env;
};

// Runs argv[0] (looked up in PATH) and captures stdout/stderr.
// Throws BACKEND_UNAVAILABLE if the executable cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options = {});

// RAII temporary directory.
class TempDir {
public:
    explicit TempDir(const std::string& prefix = "scrub");
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace scrub
