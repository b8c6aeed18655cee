#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace scrub {

// One entity as sent on the wire: character (code point) offsets.
struct NerEntity {
    std::size_t start;
    std::size_t end;
    std::string label;
    double score;

    bool operator==(const NerEntity&) const = default;
};

nlohmann::json to_json(const NerEntity& e);
NerEntity ner_entity_from_json(const nlohmann::json& j);

struct NerConfig {
    std::string url;
    double min_score = 0.5;
    std::size_t min_length = 3;
    std::size_t chunk_size = 2000;
    std::size_t overlap_size = 200;
    int timeout_seconds = 10;
};

class NerBackend {
public:
    virtual ~NerBackend() = default;
    // Entities of one chunk. Throws NER_UNAVAILABLE.
    virtual std::vector<NerEntity> recognize(const std::string& text, double min_score) = 0;
};

// POST <url>/ner with {"text", "min_score"}.
class HttpNerBackend : public NerBackend {
public:
    explicit HttpNerBackend(std::string url, int timeout_seconds = 10);
    std::vector<NerEntity> recognize(const std::string& text, double min_score) override;

    // GET <url>/health succeeds with ready=true.
    bool healthy();

private:
    std::string scheme_host_port_;
    std::string base_path_;
    int timeout_seconds_;
};

// Exact case-insensitive matches of configured names, score 1.0.
class GazetteerNerBackend : public NerBackend {
public:
    GazetteerNerBackend(std::vector<std::string> persons, std::vector<std::string> orgs);
    std::vector<NerEntity> recognize(const std::string& text, double min_score) override;

private:
    std::vector<std::pair<std::string, std::string>> names_;  // lowercased name, label
};

// Byte offset of every code point boundary in UTF-8 `text`, plus text.size().
std::vector<std::size_t> code_point_offsets(std::string_view text);

// Chunks `text`, queries the backend, applies score/length filters and
// de-duplicates overlap hits. Returned spans are byte offsets into `text`.
struct NerSpan {
    std::size_t begin;
    std::size_t end;
    std::string label;
    double score;
};
std::vector<NerSpan> run_ner(std::string_view text, NerBackend& backend, const NerConfig& config);

}  // namespace scrub
