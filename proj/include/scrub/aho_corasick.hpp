#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace scrub {

// Byte-level multi-pattern automaton. Patterns are matched as given; callers
// lowercase both sides for case-insensitive search.
class AhoCorasick {
public:
    struct Match {
        std::size_t begin;
        std::size_t end;
        std::size_t pattern;
    };

    explicit AhoCorasick(const std::vector<std::string>& patterns);

    // Every occurrence of every pattern, overlapping ones included, ordered by
    // end offset then by pattern length descending.
    std::vector<Match> find_all(std::string_view text) const;

    std::size_t size() const { return lengths_.size(); }

private:
    struct Node {
        std::int32_t next[256];
        std::int32_t fail = 0;
        // Next node on the fail chain that terminates a pattern, or -1.
        std::int32_t dict_link = -1;
        std::vector<std::size_t> outputs;
    };

    std::vector<Node> nodes_;
    std::vector<std::size_t> lengths_;
};

}  // namespace scrub
