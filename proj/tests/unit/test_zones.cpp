#include <gtest/gtest.h>

#include "scrub/aho_corasick.hpp"
#include "scrub/error.hpp"
#include "scrub/zones.hpp"

using namespace scrub;

namespace {
std::vector<std::string> bodies(std::string_view text, const std::vector<Zone>& zones, ZoneKind kind) {
    std::vector<std::string> out;
    for (const auto& z : zones) {
        if (z.kind == kind) out.emplace_back(text.substr(z.body_begin, z.body_end - z.body_begin));
    }
    return out;
}
}  // namespace

TEST(Classify, ExtensionTable) {
    EXPECT_EQ(classify_file("src/main.rs", "fn main() {}"), FileClass::CODE);
    EXPECT_EQ(classify_file("config/app.yaml", "a: 1"), FileClass::CONFIG);
    EXPECT_EQ(classify_file(".env", "A=1"), FileClass::CONFIG);
    EXPECT_EQ(classify_file("README", "hello"), FileClass::DOC);
    EXPECT_EQ(classify_file("docs/guide.md", "# x"), FileClass::DOC);
    EXPECT_EQ(classify_file("notes.unknownext", "text"), FileClass::DOC);
    EXPECT_EQ(classify_file("logo.png", std::string("\x89PNG\0\0", 6)), FileClass::BINARY);
    EXPECT_EQ(classify_file("SRC/Main.PY", "x = 1"), FileClass::CODE);
}

TEST(Zones, PythonCommentsAndStrings) {
    const std::string text = "x = 'a#b'  # note\ns = \"\"\"doc\nmore\"\"\"\ny = \"q\\\"r\"\n";
    const auto zones = extract_zones(text, "Python");
    EXPECT_EQ(bodies(text, zones, ZoneKind::COMMENT), (std::vector<std::string>{" note"}));
    EXPECT_EQ(bodies(text, zones, ZoneKind::STRING), (std::vector<std::string>{"a#b", "doc\nmore", "q\\\"r"}));
}

TEST(Zones, CBlockAndLineComments) {
    const std::string text = "/* head */ int a = 1; // tail\nchar *s = \"/* no */\";\n";
    const auto zones = extract_zones(text, "C");
    EXPECT_EQ(bodies(text, zones, ZoneKind::COMMENT), (std::vector<std::string>{" head ", " tail"}));
    EXPECT_EQ(bodies(text, zones, ZoneKind::STRING), (std::vector<std::string>{"/* no */"}));
}

TEST(Zones, UnterminatedBlockRunsToEnd) {
    const std::string text = "int a; /* open";
    const auto zones = extract_zones(text, "C");
    ASSERT_EQ(zones.size(), 1u);
    EXPECT_EQ(zones[0].end, text.size());
}

TEST(Zones, ShellHashNeedsWordStart) {
    const std::string text = "echo ${#arr} # real\n";
    const auto zones = extract_zones(text, "Bourne Shell");
    EXPECT_EQ(bodies(text, zones, ZoneKind::COMMENT), (std::vector<std::string>{" real"}));
}

TEST(Zones, UnsupportedLanguage) {
    EXPECT_THROW(extract_zones("a: 1", "YAML"), Error);
}

TEST(Functions, PythonIndent) {
    const std::string text = "def a(x):\n    return x\n\n\ndef b():\n    y = 1\n    return y\nz = 2\n";
    const auto fns = extract_functions(text, "Python");
    ASSERT_EQ(fns.size(), 2u);
    EXPECT_EQ(fns[0].line_count, 2u);
    EXPECT_EQ(fns[1].line_count, 3u);
}

TEST(Functions, CBraces) {
    const std::string text =
        "static int add(int a, int b) {\n    return a + b;\n}\n"
        "struct S { int x; };\n"
        "void f(void)\n{\n    if (x) { y(); }\n    while (1) {}\n}\n";
    const auto fns = extract_functions(text, "C");
    ASSERT_EQ(fns.size(), 2u);
    EXPECT_EQ(fns[0].line_count, 3u);
    EXPECT_EQ(fns[1].line_count, 5u);
}

TEST(Functions, KeywordBraces) {
    const std::string text = "fn main() {\n    let f = |x| x + 1;\n}\n\nfn g() -> i32 { 1 }\n";
    const auto fns = extract_functions(text, "Rust");
    ASSERT_EQ(fns.size(), 2u);
    EXPECT_EQ(fns[0].line_count, 3u);
    EXPECT_EQ(fns[1].line_count, 1u);
}

TEST(Functions, NoneDetected) {
    EXPECT_TRUE(extract_functions("x = 1\n", "Python").empty());
}

TEST(AhoCorasick, OverlappingMatches) {
    AhoCorasick ac({"he", "she", "his", "hers"});
    const auto ms = ac.find_all("ushers");
    ASSERT_EQ(ms.size(), 3u);
    std::set<std::pair<std::size_t, std::size_t>> spans;
    for (const auto& m : ms) spans.emplace(m.begin, m.end);
    EXPECT_TRUE(spans.count({1, 4}));  // she
    EXPECT_TRUE(spans.count({2, 4}));  // he
    EXPECT_TRUE(spans.count({2, 6}));  // hers
}

TEST(AhoCorasick, MatchesBruteForce) {
    const std::vector<std::string> pats{"ab", "bab", "a", "abba", "bb"};
    AhoCorasick ac(pats);
    const std::string text = "abbababbaabab";
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> expected, got;
    for (std::size_t p = 0; p < pats.size(); ++p) {
        for (std::size_t i = 0; i + pats[p].size() <= text.size(); ++i) {
            if (text.compare(i, pats[p].size(), pats[p]) == 0) expected.emplace(i, i + pats[p].size(), p);
        }
    }
    for (const auto& m : ac.find_all(text)) got.emplace(m.begin, m.end, m.pattern);
    EXPECT_EQ(got, expected);
}
