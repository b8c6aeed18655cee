#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "scrub/repo_model.hpp"

namespace scrub::fixtures {

enum class PlantSurface { WORKING_TREE, COMMIT_MESSAGE, AUTHOR, HISTORY_BLOB };

struct Plant {
    std::string value;
    PlantSurface surface;
};

struct SeededRepo {
    std::string name;
    RepoModel repo;
    std::vector<Plant> plants;
    // Contents of deny-glob files; gone from every commit after sanitization.
    std::vector<std::string> denied_values;
};

// Deterministic corpus: `repos` repositories, 3..50 commits each (the first two
// pin both ends), `plants_per_repo` sensitive values each, at least 1000 lines
// of Python/JS/C per head tree. Secrets only ever live in head blobs.
std::vector<SeededRepo> seeded_corpus(std::uint64_t seed, int repos = 20, int plants_per_repo = 10);
SeededRepo seeded_repo(int index, int commits, int plants, std::mt19937_64& rng);

// Filler code that no detector fires on.
std::string filler_python(int functions, int seed);
std::string filler_c(int functions, int seed);

// One-commit repo with mask-shaped author fields and the given files.
RepoModel single_commit_repo(const std::vector<std::pair<std::string, std::string>>& files,
                             const std::string& author = "Author_000000000000",
                             const std::string& email = "author_000000000000@example.invalid");

void write_bundles(const std::vector<SeededRepo>& corpus, const std::filesystem::path& dir);

}  // namespace scrub::fixtures
