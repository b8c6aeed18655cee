#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "scrub/error.hpp"
#include "scrub/git_backend.hpp"
#include "scrub/process.hpp"
#include "scrub/repo_model.hpp"

using namespace scrub;
namespace fs = std::filesystem;

namespace {

RepoModel two_commit_repo() {
    RepoBuilder b;
    Commit c1;
    c1.author_name = "A";
    c1.author_email = "a@x.org";
    c1.timestamp = {100, 60};
    c1.message = "one\n";
    c1.tree["a.txt"] = b.add_blob("hello\n");
    const std::string id1 = b.add_commit(c1);
    Commit c2 = c1;
    c2.parents = {id1};
    c2.timestamp = {200, -120};
    c2.message = "two\n";
    c2.tree["dir/b.bin"] = b.add_blob(std::string("\0\1\2", 3));
    const std::string id2 = b.add_commit(c2);
    b.set_ref("refs/heads/main", id2);
    b.set_ref("refs/tags/v1", id1);
    b.set_head("refs/heads/main");
    return std::move(b).build();
}

}  // namespace

TEST(RepoModel, JsonRoundTrip) {
    const RepoModel repo = two_commit_repo();
    const RepoModel back = RepoModel::from_json(repo.to_json());
    EXPECT_EQ(back.to_json(), repo.to_json());
    EXPECT_EQ(back.commits().size(), 2u);
}

TEST(RepoModel, BuilderValidates) {
    RepoBuilder b;
    Commit c;
    c.parents = {"missing"};
    EXPECT_THROW(b.add_commit(c), Error);
}

TEST(GitBackend, BundleRoundTripPreservesModel) {
    const RepoModel repo = two_commit_repo();
    TempDir dir;
    const fs::path bundle = dir.path() / "r.bundle";
    git::write_bundle(repo, bundle);
    const RepoModel back = git::load_repository(bundle);
    EXPECT_EQ(back.to_json(), repo.to_json());
}

TEST(GitBackend, BundleBytesAreDeterministic) {
    const auto corpus = fixtures::seeded_corpus(3, 1);
    TempDir dir;
    git::write_bundle(corpus[0].repo, dir.path() / "a.bundle");
    git::write_bundle(corpus[0].repo, dir.path() / "b.bundle");
    EXPECT_EQ(fs::file_size(dir.path() / "a.bundle"), fs::file_size(dir.path() / "b.bundle"));
    EXPECT_EQ(run_process({"cmp", (dir.path() / "a.bundle").string(), (dir.path() / "b.bundle").string()}).exit_code, 0);
}

TEST(GitBackend, MalformedBundle) {
    TempDir dir;
    const fs::path junk = dir.path() / "junk.bundle";
    std::ofstream(junk) << "not a bundle";
    try {
        git::load_repository(junk);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MALFORMED_BUNDLE);
    }
}

TEST(Rewrite, IdentityKeepsIds) {
    const RepoModel repo = two_commit_repo();
    const auto result = rewrite_history(repo, {});
    EXPECT_EQ(result.repo.to_json(), repo.to_json());
}

TEST(Rewrite, FilenameDropKeepsEmptyCommits) {
    const RepoModel repo = two_commit_repo();
    RewriteCallbacks cbs;
    cbs.filename_cb = [](const std::string&) { return false; };
    const auto result = rewrite_history(repo, cbs);
    EXPECT_EQ(result.repo.commits().size(), 2u);
    for (const auto& [id, c] : result.repo.commits()) EXPECT_TRUE(c.tree.empty());
    EXPECT_EQ(result.repo.refs().size(), 2u);
}

TEST(Rewrite, CallbacksApplyEverywhere) {
    const RepoModel repo = two_commit_repo();
    RewriteCallbacks cbs;
    cbs.name_cb = [](const std::string&) { return std::string("N"); };
    cbs.message_cb = [](const std::string& m) { return "x" + m; };
    const auto result = rewrite_history(repo, cbs);
    for (const auto& [id, c] : result.repo.commits()) {
        EXPECT_EQ(c.author_name, "N");
        EXPECT_EQ(c.message[0], 'x');
    }
    const Commit& head = result.repo.head_commit();
    ASSERT_EQ(head.parents.size(), 1u);
    EXPECT_EQ(result.repo.commit(head.parents[0]).message, "xone\n");
}

TEST(Fixtures, CorpusShape) {
    const auto corpus = fixtures::seeded_corpus(11);
    ASSERT_EQ(corpus.size(), 20u);
    std::size_t plants = 0;
    for (const auto& r : corpus) {
        EXPECT_GE(r.repo.commits().size(), 3u);
        EXPECT_LE(r.repo.commits().size(), 50u);
        plants += r.plants.size();
    }
    EXPECT_EQ(plants, 200u);
    EXPECT_EQ(corpus[0].repo.commits().size(), 3u);
    EXPECT_EQ(corpus[1].repo.commits().size(), 50u);
}
