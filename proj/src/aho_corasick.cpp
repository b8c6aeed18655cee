#include "scrub/aho_corasick.hpp"

#include <algorithm>
#include <queue>

namespace scrub {

AhoCorasick::AhoCorasick(const std::vector<std::string>& patterns) {
    nodes_.emplace_back();
    std::fill(std::begin(nodes_[0].next), std::end(nodes_[0].next), -1);
    for (std::size_t p = 0; p < patterns.size(); ++p) {
        lengths_.push_back(patterns[p].size());
        if (patterns[p].empty()) continue;
        std::int32_t cur = 0;
        for (unsigned char c : patterns[p]) {
            if (nodes_[cur].next[c] < 0) {
                nodes_[cur].next[c] = static_cast<std::int32_t>(nodes_.size());
                nodes_.emplace_back();
                std::fill(std::begin(nodes_.back().next), std::end(nodes_.back().next), -1);
            }
            cur = nodes_[cur].next[c];
        }
        nodes_[cur].outputs.push_back(p);
    }

    // BFS turns the trie into a goto automaton.
    std::queue<std::int32_t> queue;
    for (int c = 0; c < 256; ++c) {
        std::int32_t& child = nodes_[0].next[c];
        if (child < 0) {
            child = 0;
        } else {
            nodes_[child].fail = 0;
            queue.push(child);
        }
    }
    while (!queue.empty()) {
        const std::int32_t u = queue.front();
        queue.pop();
        const std::int32_t f = nodes_[u].fail;
        nodes_[u].dict_link = nodes_[f].outputs.empty() ? nodes_[f].dict_link : f;
        for (int c = 0; c < 256; ++c) {
            const std::int32_t v = nodes_[u].next[c];
            if (v < 0) {
                nodes_[u].next[c] = nodes_[f].next[c];
            } else {
                nodes_[v].fail = nodes_[f].next[c];
                queue.push(v);
            }
        }
    }
}

std::vector<AhoCorasick::Match> AhoCorasick::find_all(std::string_view text) const {
    std::vector<Match> out;
    std::int32_t state = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        state = nodes_[state].next[static_cast<unsigned char>(text[i])];
        const std::size_t first = out.size();
        for (std::int32_t s = nodes_[state].outputs.empty() ? nodes_[state].dict_link : state; s > 0;
             s = nodes_[s].dict_link) {
            for (std::size_t p : nodes_[s].outputs) out.push_back({i + 1 - lengths_[p], i + 1, p});
        }
        std::sort(out.begin() + static_cast<long>(first), out.end(),
                  [](const Match& a, const Match& b) { return a.begin != b.begin ? a.begin < b.begin : a.pattern < b.pattern; });
    }
    return out;
}

}  // namespace scrub
