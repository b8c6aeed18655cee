#include "scrub/ner.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include <httplib.h>

#include "scrub/error.hpp"

namespace scrub {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

}  // namespace

nlohmann::json to_json(const NerEntity& e) {
    return {{"start", e.start}, {"end", e.end}, {"label", e.label}, {"score", e.score}};
}

NerEntity ner_entity_from_json(const nlohmann::json& j) {
    return {j.at("start").get<std::size_t>(), j.at("end").get<std::size_t>(), j.at("label").get<std::string>(),
            j.at("score").get<double>()};
}

HttpNerBackend::HttpNerBackend(std::string url, int timeout_seconds) : timeout_seconds_(timeout_seconds) {
    const std::size_t scheme = url.find("://");
    const std::size_t path = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    scheme_host_port_ = url.substr(0, path);
    base_path_ = path == std::string::npos ? "" : url.substr(path);
    while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
    if (scheme_host_port_.empty()) throw Error(ErrorCode::CONFIG_INVALID, "empty NER url");
}

std::vector<NerEntity> HttpNerBackend::recognize(const std::string& text, double min_score) {
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    const nlohmann::json body = {{"text", text}, {"min_score", min_score}};
    auto res = client.Post(base_path_ + "/ner", body.dump(), "application/json");
    if (!res) {
        throw Error(ErrorCode::NER_UNAVAILABLE,
                    scheme_host_port_ + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw Error(ErrorCode::NER_UNAVAILABLE, "NER service returned HTTP " + std::to_string(res->status));
    }
    try {
        std::vector<NerEntity> out;
        for (const auto& item : nlohmann::json::parse(res->body)) out.push_back(ner_entity_from_json(item));
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::NER_UNAVAILABLE, std::string("malformed NER response: ") + e.what());
    }
}

bool HttpNerBackend::healthy() {
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(timeout_seconds_, 0);
    auto res = client.Get(base_path_ + "/health");
    if (!res || res->status != 200) return false;
    try {
        return nlohmann::json::parse(res->body).value("ready", false);
    } catch (const nlohmann::json::exception&) {
        return false;
    }
}

GazetteerNerBackend::GazetteerNerBackend(std::vector<std::string> persons, std::vector<std::string> orgs) {
    for (const auto& p : persons) {
        if (!p.empty()) names_.emplace_back(ascii_lower(p), "PER");
    }
    for (const auto& o : orgs) {
        if (!o.empty()) names_.emplace_back(ascii_lower(o), "ORG");
    }
}

std::vector<NerEntity> GazetteerNerBackend::recognize(const std::string& text, double min_score) {
    std::vector<NerEntity> out;
    if (min_score > 1.0) return out;
    const std::string hay = ascii_lower(text);
    const std::vector<std::size_t> cps = code_point_offsets(text);
    auto char_index = [&](std::size_t byte) {
        return static_cast<std::size_t>(std::lower_bound(cps.begin(), cps.end(), byte) - cps.begin());
    };
    for (const auto& [name, label] : names_) {
        for (std::size_t at = hay.find(name); at != std::string::npos; at = hay.find(name, at + 1)) {
            const std::size_t end = at + name.size();
            if (at > 0 && word_char(static_cast<unsigned char>(hay[at - 1]))) continue;
            if (end < hay.size() && word_char(static_cast<unsigned char>(hay[end]))) continue;
            out.push_back({char_index(at), char_index(end), label, 1.0});
        }
    }
    std::sort(out.begin(), out.end(), [](const NerEntity& a, const NerEntity& b) {
        return std::tie(a.start, a.end, a.label) < std::tie(b.start, b.end, b.label);
    });
    return out;
}

std::vector<std::size_t> code_point_offsets(std::string_view text) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) out.push_back(i);
    }
    out.push_back(text.size());
    return out;
}

std::vector<NerSpan> run_ner(std::string_view text, NerBackend& backend, const NerConfig& config) {
    const std::vector<std::size_t> cps = code_point_offsets(text);
    const std::size_t n_chars = cps.size() - 1;
    const std::size_t chunk = std::max<std::size_t>(config.chunk_size, 1);
    const std::size_t step = config.overlap_size < chunk ? chunk - config.overlap_size : chunk;

    std::map<std::pair<std::size_t, std::size_t>, NerSpan> spans;
    for (std::size_t start = 0; start < n_chars; start += step) {
        const std::size_t stop = std::min(start + chunk, n_chars);
        const std::string piece(text.substr(cps[start], cps[stop] - cps[start]));
        for (const NerEntity& e : backend.recognize(piece, config.min_score)) {
            if (e.start >= e.end || e.end > stop - start) continue;
            if (e.score < config.min_score || e.end - e.start < config.min_length) continue;
            if (e.label != "PER" && e.label != "ORG") continue;
            const std::size_t b = cps[start + e.start];
            const std::size_t en = cps[start + e.end];
            auto [it, inserted] = spans.try_emplace({b, en}, NerSpan{b, en, e.label, e.score});
            if (!inserted && e.score > it->second.score) it->second = NerSpan{b, en, e.label, e.score};
        }
        if (stop == n_chars) break;
    }
    std::vector<NerSpan> out;
    for (auto& [key, span] : spans) out.push_back(std::move(span));
    return out;
}

}  // namespace scrub
