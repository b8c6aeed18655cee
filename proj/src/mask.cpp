#include "scrub/mask.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "scrub/crypto.hpp"
#include "scrub/error.hpp"

namespace scrub {

Salt::Salt(std::string bytes) : bytes_(std::move(bytes)) {
    if (bytes_.empty()) throw Error(ErrorCode::EMPTY_SALT, "salt is empty");
}

Salt Salt::from_environment(const std::filesystem::path& salt_file) {
    if (const char* env = std::getenv("SCRUB_SALT"); env && *env) return Salt(env);
    if (!salt_file.empty()) {
        std::ifstream in(salt_file, std::ios::binary);
        if (!in) throw Error(ErrorCode::EMPTY_SALT, "cannot read salt file " + salt_file.string());
        std::stringstream ss;
        ss << in.rdbuf();
        std::string bytes = ss.str();
        while (!bytes.empty() && (bytes.back() == '\n' || bytes.back() == '\r')) bytes.pop_back();
        return Salt(std::move(bytes));
    }
    throw Error(ErrorCode::EMPTY_SALT, "set SCRUB_SALT or pass --salt-file");
}

std::string Salt::fingerprint() const { return crypto::sha256_hex(bytes_).substr(0, 8); }

std::string hash12(std::string_view salt, std::string_view value) {
    if (salt.empty()) throw Error(ErrorCode::EMPTY_SALT, "salt is empty");
    return crypto::hmac_sha256_hex(salt, value).substr(0, 12);
}

std::string hash12(const Salt& salt, std::string_view value) { return hash12(salt.bytes(), value); }

std::string mask_for(Category category, std::string_view value, const Salt& salt, std::string_view label) {
    const std::string h = hash12(salt, value);
    switch (category) {
        case Category::PERSON: return "Person_" + h;
        case Category::ORG: return "Org_" + h;
        case Category::AUTHOR_NAME: return "Author_" + h;
        case Category::AUTHOR_EMAIL: return "author_" + h + "@example.invalid";
        case Category::EMAIL: return "user_" + h + "@example.com";
        case Category::SECRET:
        case Category::JWT: return "REDACTED_" + h;
        case Category::INTERNAL_DOMAIN:
        case Category::DOMAIN_TERM: return h.substr(0, 8) + ".example.invalid";
        case Category::PRIVATE_IP:
        case Category::IPV4: {
            const unsigned long long n = std::stoull(h, nullptr, 16);
            return "192.0.2." + std::to_string(n % 254 + 1);
        }
        case Category::PHONE: return "+0000000000";
        case Category::URL: return "[url:" + h + "]";
        case Category::CUSTOM: return "[" + normalize_label(label) + ":" + h + "]";
        case Category::CODENAME: return "[codename:" + h + "]";
        case Category::CLIENT: return "[client:" + h + "]";
        case Category::ORG_TERM: return "[org:" + h + "]";
        case Category::TERM: return "[term:" + h + "]";
    }
    throw Error(ErrorCode::UNMASKABLE_CATEGORY, "no mask for category " + std::to_string(static_cast<int>(category)));
}

std::vector<Finding> resolve_overlaps(const std::vector<Finding>& findings) {
    using Key = std::tuple<Surface, std::string, std::string>;
    std::map<Key, std::vector<const Finding*>> groups;
    for (const auto& f : findings) {
        if (f.severity == Severity::INFO || f.begin >= f.end) continue;
        groups[{f.origin.surface, f.origin.object, f.origin.field}].push_back(&f);
    }
    std::vector<Finding> out;
    for (auto& [key, group] : groups) {
        std::stable_sort(group.begin(), group.end(), [](const Finding* a, const Finding* b) {
            const std::size_t la = a->end - a->begin;
            const std::size_t lb = b->end - b->begin;
            if (la != lb) return la > lb;
            if (a->detector != b->detector) return a->detector < b->detector;
            return a->begin < b->begin;
        });
        std::map<std::size_t, std::size_t> taken;  // begin -> end
        for (const Finding* f : group) {
            auto next = taken.lower_bound(f->begin);
            if (next != taken.end() && next->first < f->end) continue;
            if (next != taken.begin() && std::prev(next)->second > f->begin) continue;
            taken.emplace(f->begin, f->end);
            out.push_back(*f);
        }
    }
    return canonical_order(std::move(out));
}

void RedactionManifest::record(Category category, const std::string& original, const std::string& pseudonym,
                               Surface surface, std::size_t count) {
    auto [it, inserted] = entries_.try_emplace({category, original}, ManifestEntry{category, original, pseudonym, 0, {}});
    it->second.occurrences += count;
    it->second.surfaces.insert(surface);
}

void RedactionManifest::merge(const RedactionManifest& other) {
    for (const auto& [key, e] : other.entries_) {
        for (Surface s : e.surfaces) record(e.category, e.original, e.pseudonym, s, 0);
        entries_.at(key).occurrences += e.occurrences;
    }
}

std::vector<ManifestEntry> RedactionManifest::entries() const {
    std::vector<ManifestEntry> out;
    for (const auto& [key, e] : entries_) out.push_back(e);
    return out;
}

std::string RedactionManifest::to_jsonl(const std::string& salt_fingerprint, bool include_originals) const {
    std::string out;
    for (const auto& [key, e] : entries_) {
        nlohmann::ordered_json j;
        j["category"] = to_string(e.category);
        if (include_originals) j["original"] = e.original;
        j["pseudonym"] = e.pseudonym;
        j["occurrences"] = e.occurrences;
        auto surfaces = nlohmann::ordered_json::array();
        for (Surface s : e.surfaces) surfaces.push_back(to_string(s));
        j["surfaces"] = surfaces;
        j["salt_fingerprint"] = salt_fingerprint;
        out += j.dump() + "\n";
    }
    return out;
}

void RedactionManifest::write(const std::filesystem::path& path, const std::string& salt_fingerprint,
                              bool include_originals) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write manifest " + path.string());
    out << to_jsonl(salt_fingerprint, include_originals);
}

Replacement apply_replacements(std::string_view text, const std::vector<Finding>& findings, const Salt& salt) {
    std::vector<const Finding*> order;
    for (const auto& f : findings) {
        if (f.severity == Severity::INFO) continue;
        if (f.begin >= f.end || f.end > text.size()) {
            throw Error(ErrorCode::SPAN_OUT_OF_RANGE, "span [" + std::to_string(f.begin) + ", " + std::to_string(f.end) +
                                                          ") outside text of " + std::to_string(text.size()) + " bytes");
        }
        order.push_back(&f);
    }
    std::sort(order.begin(), order.end(), [](const Finding* a, const Finding* b) { return a->begin > b->begin; });

    Replacement result{std::string(text), {}};
    std::size_t limit = text.size();
    for (const Finding* f : order) {
        if (f->end > limit) throw Error(ErrorCode::SPAN_OUT_OF_RANGE, "overlapping replacement spans");
        const std::string original(text.substr(f->begin, f->end - f->begin));
        const std::string pseudonym = mask_for(f->category, original, salt, f->label);
        result.text.replace(f->begin, f->end - f->begin, pseudonym);
        result.manifest.record(f->category, original, pseudonym, f->origin.surface);
        limit = f->begin;
    }
    return result;
}

}  // namespace scrub
