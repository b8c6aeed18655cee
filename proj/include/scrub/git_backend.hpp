#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scrub/error.hpp"
#include "scrub/process.hpp"
#include "scrub/repo_model.hpp"

namespace scrub::git {

// Executable from SCRUB_GIT_BIN, defaulting to "git" on PATH.
std::string executable();

// Runs git with a hermetic configuration (no system/global config, no prompts).
ProcessResult run(const std::vector<std::string>& args, const ProcessOptions& options = {});

// Like run() but throws `code` with git's stderr on a non-zero exit.
std::string run_checked(const std::vector<std::string>& args, ErrorCode code,
                        const ProcessOptions& options = {});

// Loads a bundle file or a repository directory (bare or with a worktree).
// Errors: MALFORMED_BUNDLE, EMPTY_REPOSITORY, BACKEND_UNAVAILABLE.
RepoModel load_repository(const std::filesystem::path& source);

// Materializes the model into a fresh bare repository at `git_dir`.
void write_repository(const RepoModel& repo, const std::filesystem::path& git_dir);

// `git bundle create --all` of the model. Throws EMPTY_REPOSITORY for a model without refs.
void write_bundle(const RepoModel& repo, const std::filesystem::path& bundle_path);

// Raw dump of every object in a bundle or repository (headers + uncompressed
// contents), used for byte-level searches over released artifacts.
std::string dump_objects(const std::filesystem::path& source);

std::uintmax_t directory_size(const std::filesystem::path& dir);

}  // namespace scrub::git
