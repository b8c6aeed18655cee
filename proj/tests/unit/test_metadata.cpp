#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "scrub/error.hpp"
#include "scrub/metadata.hpp"

using namespace scrub;

namespace {

RepoModel files_repo(const std::vector<std::pair<std::string, std::string>>& files) {
    return fixtures::single_commit_repo(files);
}

std::string commit_at(RepoBuilder& b, std::vector<std::string> parents, std::int64_t t,
                      const std::string& author = "A", const std::string& email = "a@x.org") {
    Commit c;
    c.parents = std::move(parents);
    c.author_name = author;
    c.author_email = email;
    c.timestamp = {t, 0};
    c.message = "c" + std::to_string(t) + "\n";
    c.tree["f.txt"] = b.add_blob(std::to_string(t) + "\n");
    return b.add_commit(std::move(c));
}

MetadataRecord sample_record() {
    MetadataRecord r;
    r.repo_id = "0f8e2b4c-1111-4222-8333-444455556666";
    r.repo_name = "org--repo, \"quoted\"";
    r.languages = {{"Python", 0.75}, {"C", 0.25}};
    r.extensions = {{".py", 0.75}, {".c", 0.25}};
    r.stack = format_stack(r.languages);
    r.license_type = License::APACHE_2;
    r.created_at = 1700000000;
    r.commit_count = 12;
    r.branch_count = 3;
    r.contributors_count = 2;
    r.repo_git_history_mb = 0.12;
    r.repo_bundle_mb = 0.05;
    r.repo_worktree_mb = 0.31;
    r.files = 9;
    r.loc = 1400;
    r.raw_loc = 1500;
    r.avg_func_length = 7.25;
    r.docstring_ratio = 0.1;
    r.duplication_ratio = 1.0 / 3.0;
    r.documentation_cnt = 14;
    return r;
}

}  // namespace

TEST(LineCounts, BlankLinesExcluded) {
    const auto c = count_lines(files_repo({{"a.py", "a\n\nb\n"}}));
    EXPECT_EQ(c.loc, 2);
    EXPECT_EQ(c.raw_loc, 2);
    EXPECT_EQ(c.files, 1);
}

TEST(LineCounts, UnsupportedCountsOnlyInRaw) {
    const auto c = count_lines(files_repo({{"a.py", "a\n\nb\n"}, {"notes.txt", "x\ny\n  z\n"}}));
    EXPECT_EQ(c.loc, 2);
    EXPECT_EQ(c.raw_loc, 5);
    EXPECT_EQ(c.files, 2);
    EXPECT_EQ(c.per_language.at("Python"), 2);
}

TEST(LineCounts, EmptyRepo) {
    const RepoModel empty = RepoBuilder().build();
    const auto c = count_lines(empty);
    EXPECT_EQ(c.loc, 0);
    EXPECT_EQ(c.raw_loc, 0);
    EXPECT_EQ(c.files, 0);
}

TEST(LineCounts, WhitespaceOnlyLinesAreBlank) {
    EXPECT_EQ(count_nonblank_lines(" \t\n\r\nx\n   y"), 2);
    EXPECT_EQ(count_nonblank_lines(""), 0);
}

TEST(Quality, DuplicationRatio) {
    // 10 non-blank lines, 4 distinct.
    const auto q = quality_metrics(files_repo({{"a.py", "x = 1\nx = 1\nx = 1\ny = 2\ny = 2\ny = 2\nz = 3\nz = 3\nz = 3\nw = 4\n"}}));
    EXPECT_DOUBLE_EQ(q.duplication_ratio, 0.6);
}

TEST(Quality, DocstringRatio) {
    std::string text = "# one\n# two\n";
    for (int i = 0; i < 8; ++i) text += "v" + std::to_string(i) + " = " + std::to_string(i) + "\n";
    const auto q = quality_metrics(files_repo({{"a.py", text}}));
    EXPECT_DOUBLE_EQ(q.docstring_ratio, 0.25);
}

TEST(Quality, NoFunctionsGivesZero) {
    const auto q = quality_metrics(files_repo({{"a.py", "x = 1\n"}}));
    EXPECT_EQ(q.avg_func_length, 0);
}

TEST(Quality, AverageFunctionLength) {
    const auto q = quality_metrics(files_repo({{"a.py", "def f():\n    a = 1\n    return a\n\n"
                                                        "def g():\n    a = 1\n    b = 2\n    c = 3\n    return a\n"}}));
    EXPECT_DOUBLE_EQ(q.avg_func_length, 4.0);
}

TEST(Quality, DocumentationCount) {
    const auto q = quality_metrics(files_repo({{"README.md", "# T\n\ntext\n"}, {"docs/x.md", "a\n"}, {"a.py", "x = 1\n"}}));
    EXPECT_EQ(q.documentation_cnt, 3);
}

TEST(History, SyntheticCommit) {
    const auto h = history_metrics(files_repo({{"a.py", "x\n"}}));
    EXPECT_EQ(h.commit_count, 1);
    EXPECT_EQ(h.branch_count, 1);
    EXPECT_EQ(h.contributors_count, 1);
}

TEST(History, ChainWithTwoAuthors) {
    RepoBuilder b;
    std::string tip;
    for (int i = 0; i < 5; ++i) {
        tip = commit_at(b, tip.empty() ? std::vector<std::string>{} : std::vector<std::string>{tip}, 100 + i,
                        i % 2 ? "Bo" : "Al", i % 2 ? "bo@x.org" : "al@x.org");
    }
    b.set_ref("refs/heads/main", tip);
    b.set_head("refs/heads/main");
    const auto h = history_metrics(std::move(b).build());
    EXPECT_EQ(h.commit_count, 5);
    EXPECT_EQ(h.contributors_count, 2);
    EXPECT_EQ(h.created_at, 100);
}

TEST(History, YoungestTipDecidesCommitCount) {
    RepoBuilder b;
    const std::string r1 = commit_at(b, {}, 1);
    const std::string r2 = commit_at(b, {r1}, 2);
    const std::string a = commit_at(b, {r2}, 10);
    std::string tip = r2;
    for (std::int64_t t : {11, 12, 13, 14, 20}) tip = commit_at(b, {tip}, t);
    b.set_ref("refs/heads/a", a);
    b.set_ref("refs/heads/b", tip);
    b.set_head("refs/heads/a");
    const RepoModel repo = std::move(b).build();
    EXPECT_EQ(repo.reachable_from(a).size(), 3u);
    EXPECT_EQ(repo.reachable_from(tip).size(), 7u);
    const auto h = history_metrics(repo);
    EXPECT_EQ(h.commit_count, 7);
    EXPECT_EQ(h.branch_count, 2);
}

TEST(History, TagsAreNotBranches) {
    RepoBuilder b;
    const std::string c = commit_at(b, {}, 5);
    b.set_ref("refs/heads/main", c);
    b.set_ref("refs/remotes/origin/main", c);
    b.set_ref("refs/remotes/origin/HEAD", c);
    b.set_ref("refs/tags/v1", c);
    b.set_head("refs/heads/main");
    EXPECT_EQ(history_metrics(std::move(b).build()).branch_count, 2);
}

TEST(History, EmptyRepoThrows) {
    EXPECT_THROW(history_metrics(RepoBuilder().build()), Error);
}

TEST(License, Signatures) {
    EXPECT_EQ(detect_license({{"LICENSE", "MIT License\n\nCopyright (c) 2020"}}), License::MIT);
    EXPECT_EQ(detect_license({{"LICENSE.txt", "Apache License\n  Version 2.0, January 2004"}}), License::APACHE_2);
    EXPECT_EQ(detect_license({{"COPYING", "GNU GENERAL PUBLIC LICENSE\nVersion 3"}}), License::GPL);
    EXPECT_EQ(detect_license({{"COPYING.LESSER", "GNU LESSER GENERAL PUBLIC LICENSE"}}), License::LGPL);
    EXPECT_EQ(detect_license({{"LICENSE", "Mozilla Public License Version 2.0"}}), License::MPL);
    EXPECT_EQ(detect_license({{"LICENSE", "Redistribution and use in source and binary forms, with or without"}}),
              License::BSD);
    EXPECT_EQ(detect_license({{"LICENSE", "Copyright Acme. All rights reserved."}}), License::PROPRIETARY);
}

TEST(License, UnknownCases) {
    EXPECT_EQ(detect_license(std::map<std::string, std::string>{}), License::UNKNOWN);
    EXPECT_EQ(detect_license({{"LICENSE", "do whatever"}}), License::UNKNOWN);
    EXPECT_EQ(detect_license({{"README.md", "MIT License"}}), License::UNKNOWN);
}

TEST(License, FromRepoRootOnly) {
    EXPECT_EQ(detect_license(files_repo({{"LICENSE", "MIT License"}})), License::MIT);
    EXPECT_EQ(detect_license(files_repo({{"vendor/LICENSE", "MIT License"}, {"a.py", "x\n"}})), License::UNKNOWN);
}

TEST(Stack, TopThree) {
    EXPECT_EQ(format_stack({{"Python", 0.621}, {"C", 0.203}, {"Go", 0.099}, {"Rust", 0.077}}),
              "Python 62.1%, C 20.3%, Go 9.9%");
    EXPECT_EQ(format_stack({}), "");
}

TEST(Sizes, Megabytes) {
    EXPECT_DOUBLE_EQ(to_megabytes(1024 * 1024), 1.0);
    EXPECT_DOUBLE_EQ(to_megabytes(1572864), 1.5);
    EXPECT_DOUBLE_EQ(to_megabytes(0), 0.0);
}

TEST(Select, Boundary) {
    MetadataRecord r = sample_record();
    r.loc = 999;
    auto d = select(r);
    EXPECT_FALSE(d.accepted);
    EXPECT_EQ(d.reason, SelectionReason::LOC_BELOW_THRESHOLD);
    r.loc = 1000;
    d = select(r);
    EXPECT_TRUE(d.accepted);
    EXPECT_EQ(d.reason, SelectionReason::OK);
    d = select(std::nullopt);
    EXPECT_FALSE(d.accepted);
    EXPECT_EQ(d.reason, SelectionReason::UNPARSEABLE);
}

TEST(Consistency, Codes) {
    MetadataRecord r = sample_record();
    EXPECT_TRUE(consistency_check(r).empty());
    r.commit_count = 0;
    r.loc = 5000;
    r.raw_loc = 6000;
    EXPECT_EQ(consistency_check(r), std::vector<std::string>{"COMMITS_ZERO_WITH_CODE"});
    r = sample_record();
    r.duplication_ratio = 1.2;
    EXPECT_EQ(consistency_check(r), std::vector<std::string>{"DUP_RATIO_RANGE"});
    r = sample_record();
    r.loc = r.raw_loc + 1;
    EXPECT_NE(std::find(consistency_check(r).begin(), consistency_check(r).end(), "LOC_EXCEEDS_RAW"),
              consistency_check(r).end());
}

TEST(Serialization, CsvRoundTrip) {
    const MetadataRecord r = sample_record();
    MetadataRecord s = sample_record();
    s.repo_name = "second";
    s.languages = {};
    s.extensions = {};
    s.stack = "";
    const auto back = from_csv(to_csv({r, s}));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0], r);
    EXPECT_EQ(back[1], s);
}

TEST(Serialization, CsvHeaderOrder) {
    const auto& h = csv_header();
    ASSERT_EQ(h.size(), 20u);
    EXPECT_EQ(h.front(), "repo_id");
    EXPECT_EQ(h.back(), "documentation_cnt");
}

TEST(Serialization, JsonRoundTrip) {
    const MetadataRecord r = sample_record();
    EXPECT_EQ(record_from_json(to_json(r)), r);
}

TEST(Serialization, MalformedCsv) {
    EXPECT_THROW(from_csv("repo_id,loc\n\"unterminated\n"), Error);
}

TEST(Serialization, Timestamps) {
    EXPECT_EQ(format_timestamp(0), "1970-01-01T00:00:00Z");
    EXPECT_EQ(parse_timestamp("2023-11-14T22:13:20Z"), 1700000000);
    EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Extract, EndToEndOnFixture) {
    std::mt19937_64 rng(5);
    const auto seeded = fixtures::seeded_repo(0, 3, 10, rng);
    const auto rec = extract(seeded.repo, RepoSizes{}, "fixture");
    EXPECT_EQ(rec.commit_count, 3);
    EXPECT_GE(rec.loc, 1000);
    EXPECT_TRUE(select(rec).accepted);
    EXPECT_TRUE(consistency_check(rec).empty());
    EXPECT_EQ(rec.repo_id.size(), 36u);
}
