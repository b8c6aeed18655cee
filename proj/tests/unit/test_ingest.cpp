#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include "scrub/error.hpp"
#include "scrub/git_backend.hpp"
#include "scrub/ingest.hpp"
#include "scrub/metadata.hpp"
#include "scrub/process.hpp"

using namespace scrub;
namespace fs = std::filesystem;

TEST(SafeName, Examples) {
    EXPECT_EQ(safe_name("https://github.com/org/repo.git"), "org--repo");
    EXPECT_EQ(safe_name("git@github.com:org/repo.git"), "org--repo");
    EXPECT_EQ(safe_name("https://gitlab.com/group/sub/repo"), "group--sub--repo");
    EXPECT_EQ(safe_name("https://user:pw@host.example/a b/c!d"), "a-b--c-d");
    EXPECT_EQ(safe_name("https://host.example/"), "repo");
}

TEST(SafeName, SlugShapeAndFixedPoint) {
    const std::regex shape("^[A-Za-z0-9.-]+(--[A-Za-z0-9.-]+)*$");
    for (const char* url : {"https://github.com/org/repo.git", "ssh://git@h:22/a/-b-/c.", "https://h/x//y///z",
                            "https://h/__weird__/--name--", "file:///tmp/some dir/r.git"}) {
        const std::string slug = safe_name(url);
        EXPECT_TRUE(std::regex_match(slug, shape)) << url << " -> " << slug;
        EXPECT_NE(slug.front(), '-');
        EXPECT_NE(slug.back(), '.');
        EXPECT_EQ(safe_name(slug), slug) << url;
    }
}

TEST(RepoOnlyName, Examples) {
    EXPECT_EQ(repo_only_name("https://github.com/org/repo.git"), "repo");
    EXPECT_EQ(repo_only_name("https://gitlab.com/group/sub/repo"), "repo");
    EXPECT_EQ(repo_only_name("  https://h/x/weird name!.git "), "weird-name");
    EXPECT_EQ(repo_only_name("https://h/x/repo/"), "repo");
}

class ArchiveTest : public ::testing::Test {
protected:
    TempDir dir{"scrub-archive-test"};
    fs::path root() const { return dir.path() / "proj"; }
    void put(const std::string& rel, const std::string& content) {
        fs::create_directories((root() / rel).parent_path());
        std::ofstream(root() / rel, std::ios::binary) << content;
    }
};

TEST_F(ArchiveTest, ThreeSmallFiles) {
    put("a.py", "x = 1\n");
    put("docs/b.md", "# b\n");
    put("c.txt", "c\n");
    const auto r = ingest_archive(root());
    EXPECT_EQ(r.repo.commits().size(), 1u);
    EXPECT_EQ(r.repo.refs().size(), 1u);
    EXPECT_EQ(r.repo.blobs().size(), 3u);
    EXPECT_TRUE(r.report.large_files.empty());
    EXPECT_TRUE(r.report.synthetic);
    EXPECT_EQ(r.report.channel, Channel::ARCHIVE);
    const auto h = history_metrics(r.repo);
    EXPECT_EQ(h.commit_count, 1);
    EXPECT_EQ(h.branch_count, 1);
    EXPECT_EQ(r.repo.head_commit().tree.at("a.py"), Blob("x = 1\n").id());
}

TEST_F(ArchiveTest, LargeFileBecomesPointer) {
    put("small.txt", "keep\n");
    fs::create_directories(root());
    const fs::path big = root() / "big.bin";
    std::ofstream(big).close();
    fs::resize_file(big, 100ull * 1024 * 1024);
    const auto r = ingest_archive(root(), 95);
    ASSERT_EQ(r.report.large_files.size(), 1u);
    EXPECT_EQ(r.report.large_files[0].first, "big.bin");
    EXPECT_NEAR(r.report.large_files[0].second, 100.0, 1e-9);
    const std::string pointer = r.repo.blob(r.repo.head_commit().tree.at("big.bin")).bytes();
    EXPECT_EQ(pointer, lfs_pointer(100ull * 1024 * 1024,
                                   "20492a4d0d84f8beb1767f6616229f85d44c2827b64bdbfb260ee12fa1109e0e"));
    EXPECT_EQ(r.repo.blob(r.repo.head_commit().tree.at("small.txt")).bytes(), "keep\n");
}

TEST_F(ArchiveTest, ThresholdIsStrict) {
    put("exact.bin", std::string(1024 * 1024, 'a'));
    EXPECT_TRUE(ingest_archive(root(), 1.0).report.large_files.empty());
    EXPECT_EQ(ingest_archive(root(), 0.5).report.large_files.size(), 1u);
}

TEST_F(ArchiveTest, EmptyTree) {
    fs::create_directories(root() / "sub");
    try {
        ingest_archive(root());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EMPTY_TREE);
    }
}

namespace {

void git_ok(const std::vector<std::string>& args) {
    std::vector<std::string> argv{"git", "-c", "user.name=T", "-c", "user.email=t@example.invalid"};
    argv.insert(argv.end(), args.begin(), args.end());
    ASSERT_EQ(run_process(argv).exit_code, 0) << args.back();
}

}  // namespace

TEST(Remote, LocalRemoteWithTwoBranches) {
    TempDir dir;
    const std::string src = (dir.path() / "src").string();
    git_ok({"init", "-q", "-b", "zulu", src});
    std::ofstream(fs::path(src) / "f.txt") << "1\n";
    git_ok({"-C", src, "add", "."});
    git_ok({"-C", src, "commit", "-qm", "one"});
    git_ok({"-C", src, "branch", "alpha"});
    git_ok({"-C", src, "update-ref", "refs/pull/1/head", "HEAD"});
    const auto r = ingest_remote(src, dir.path() / "out.bundle");
    EXPECT_TRUE(r.repo.refs().count("refs/heads/zulu"));
    EXPECT_TRUE(r.repo.refs().count("refs/heads/alpha"));
    EXPECT_TRUE(r.repo.refs().count("refs/pull/1/head"));
    EXPECT_EQ(r.repo.head(), "refs/heads/zulu");
    EXPECT_TRUE(fs::exists(dir.path() / "out.bundle"));
    EXPECT_EQ(r.report.channel, Channel::REMOTE);
}

TEST(Remote, EmptyRemoteHasNoRefs) {
    TempDir dir;
    const std::string src = (dir.path() / "empty.git").string();
    git_ok({"init", "-q", "--bare", src});
    try {
        ingest_remote(src, dir.path() / "out.bundle");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NO_REFS);
    }
}

TEST(Remote, UnreachableIsNetwork) {
    TempDir dir;
    try {
        ingest_remote((dir.path() / "does-not-exist").string(), dir.path() / "out.bundle");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NETWORK);
    }
}

TEST(Remote, MissingHeadFallsBackToFirstBranch) {
    TempDir dir;
    const std::string src = (dir.path() / "src.git").string();
    const std::string work = (dir.path() / "work").string();
    git_ok({"init", "-q", "--bare", src});
    git_ok({"init", "-q", work});
    std::ofstream(fs::path(work) / "f.txt") << "1\n";
    git_ok({"-C", work, "add", "."});
    git_ok({"-C", work, "commit", "-qm", "one"});
    git_ok({"-C", work, "push", "-q", src, "HEAD:refs/heads/mango", "HEAD:refs/heads/apple"});
    // HEAD points at a branch that does not exist, so no symref is advertised.
    git_ok({"-C", src, "symbolic-ref", "HEAD", "refs/heads/none"});
    const auto r = ingest_remote(src, dir.path() / "out.bundle");
    EXPECT_EQ(r.repo.head(), "refs/heads/apple");
}
