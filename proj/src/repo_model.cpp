#include "scrub/repo_model.hpp"

#include <algorithm>
#include <queue>

#include "scrub/crypto.hpp"
#include "scrub/error.hpp"

namespace scrub {

namespace {

void append_field(std::string& out, std::string_view value) {
    out += std::to_string(value.size());
    out += ':';
    out.append(value);
}

// Byte length of a UTF-8 sequence starting with `lead`, 0 if invalid lead.
int utf8_sequence_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if (lead >= 0xc2 && lead <= 0xdf) return 2;
    if (lead >= 0xe0 && lead <= 0xef) return 3;
    if (lead >= 0xf0 && lead <= 0xf4) return 4;
    return 0;
}

template <typename F>
auto guarded(const char* name, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw Error(ErrorCode::CALLBACK_FAILURE, std::string(name) + ": " + e.what());
    }
}

}  // namespace

bool is_text_content(std::string_view bytes) {
    std::size_t i = 0;
    while (i < bytes.size()) {
        const auto lead = static_cast<unsigned char>(bytes[i]);
        if (lead == 0) return false;
        const int len = utf8_sequence_length(lead);
        if (len == 0 || i + static_cast<std::size_t>(len) > bytes.size()) return false;
        for (int k = 1; k < len; ++k) {
            const auto c = static_cast<unsigned char>(bytes[i + static_cast<std::size_t>(k)]);
            if ((c & 0xc0) != 0x80) return false;
        }
        if (len == 3) {
            const auto c1 = static_cast<unsigned char>(bytes[i + 1]);
            if (lead == 0xe0 && c1 < 0xa0) return false;   // overlong
            if (lead == 0xed && c1 >= 0xa0) return false;  // surrogates
        } else if (len == 4) {
            const auto c1 = static_cast<unsigned char>(bytes[i + 1]);
            if (lead == 0xf0 && c1 < 0x90) return false;
            if (lead == 0xf4 && c1 >= 0x90) return false;
        }
        i += static_cast<std::size_t>(len);
    }
    return true;
}

Blob::Blob(std::string bytes)
    : id_(crypto::sha256_hex(bytes)),
      data_(std::make_shared<const std::string>(std::move(bytes))),
      is_text_(is_text_content(*data_)) {}

std::string compute_commit_id(const Commit& commit) {
    std::string buf;
    append_field(buf, "commit");
    append_field(buf, std::to_string(commit.parents.size()));
    for (const auto& p : commit.parents) append_field(buf, p);
    append_field(buf, commit.author_name);
    append_field(buf, commit.author_email);
    append_field(buf, std::to_string(commit.timestamp.seconds));
    append_field(buf, std::to_string(commit.timestamp.tz_offset_minutes));
    append_field(buf, commit.message);
    append_field(buf, std::to_string(commit.tree.size()));
    for (const auto& [path, blob] : commit.tree) {
        append_field(buf, path);
        append_field(buf, blob);
    }
    return crypto::sha256_hex(buf);
}

const Commit& RepoModel::commit(const std::string& id) const {
    auto it = commits_.find(id);
    if (it == commits_.end()) throw Error(ErrorCode::INVALID_MODEL, "unknown commit " + id);
    return it->second;
}

const Blob& RepoModel::blob(const std::string& id) const {
    auto it = blobs_.find(id);
    if (it == blobs_.end()) throw Error(ErrorCode::INVALID_MODEL, "unknown blob " + id);
    return it->second;
}

const Commit& RepoModel::head_commit() const {
    auto it = refs_.find(head_);
    if (it == refs_.end()) throw Error(ErrorCode::EMPTY_REPOSITORY, "repository has no head");
    return commit(it->second);
}

std::vector<std::string> RepoModel::topological_order() const {
    std::map<std::string, int> pending;
    std::map<std::string, std::vector<std::string>> children;
    for (const auto& [id, c] : commits_) {
        pending[id] = static_cast<int>(c.parents.size());
        for (const auto& p : c.parents) children[p].push_back(id);
    }
    std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
    for (const auto& [id, n] : pending) {
        if (n == 0) ready.push(id);
    }
    std::vector<std::string> order;
    order.reserve(commits_.size());
    while (!ready.empty()) {
        std::string id = ready.top();
        ready.pop();
        for (const auto& child : children[id]) {
            if (--pending[child] == 0) ready.push(child);
        }
        order.push_back(std::move(id));
    }
    return order;
}

std::set<std::string> RepoModel::reachable_from(const std::string& tip) const {
    std::set<std::string> seen;
    std::vector<std::string> stack{tip};
    while (!stack.empty()) {
        std::string id = std::move(stack.back());
        stack.pop_back();
        if (!seen.insert(id).second) continue;
        for (const auto& p : commit(id).parents) stack.push_back(p);
    }
    return seen;
}

nlohmann::json RepoModel::to_json() const {
    nlohmann::json commits = nlohmann::json::object();
    for (const auto& [id, c] : commits_) {
        commits[id] = {
            {"id", c.id},
            {"parents", c.parents},
            {"author_name", c.author_name},
            {"author_email", c.author_email},
            {"timestamp", {{"seconds", c.timestamp.seconds}, {"tz_offset_minutes", c.timestamp.tz_offset_minutes}}},
            {"message", c.message},
            {"tree", c.tree},
        };
    }
    nlohmann::json blobs = nlohmann::json::object();
    for (const auto& [id, b] : blobs_) {
        blobs[id] = {{"id", b.id()}, {"bytes", crypto::base64_encode(b.bytes())}, {"is_text", b.is_text()}};
    }
    return {{"commits", commits}, {"blobs", blobs}, {"refs", refs_}, {"head", head_}};
}

RepoModel RepoModel::from_json(const nlohmann::json& doc) {
    try {
        RepoBuilder builder;
        for (const auto& [id, b] : doc.at("blobs").items()) {
            Blob blob(crypto::base64_decode(b.at("bytes").get<std::string>()));
            if (blob.id() != id) throw Error(ErrorCode::INVALID_MODEL, "blob digest mismatch for " + id);
            builder.add_blob(blob);
        }
        // Insert commits parents-first; the JSON map is keyed by id, not topology.
        std::map<std::string, Commit> pending;
        for (const auto& [id, c] : doc.at("commits").items()) {
            Commit commit;
            commit.id = id;
            commit.parents = c.at("parents").get<std::vector<std::string>>();
            commit.author_name = c.at("author_name").get<std::string>();
            commit.author_email = c.at("author_email").get<std::string>();
            commit.timestamp.seconds = c.at("timestamp").at("seconds").get<std::int64_t>();
            commit.timestamp.tz_offset_minutes = c.at("timestamp").at("tz_offset_minutes").get<int>();
            commit.message = c.at("message").get<std::string>();
            commit.tree = c.at("tree").get<Tree>();
            pending.emplace(id, std::move(commit));
        }
        while (!pending.empty()) {
            bool progressed = false;
            for (auto it = pending.begin(); it != pending.end();) {
                const bool ready = std::all_of(it->second.parents.begin(), it->second.parents.end(),
                                               [&](const std::string& p) { return builder.has_commit(p); });
                if (!ready) {
                    ++it;
                    continue;
                }
                const std::string expected = it->first;
                if (builder.add_commit(std::move(it->second)) != expected) {
                    throw Error(ErrorCode::INVALID_MODEL, "commit digest mismatch for " + expected);
                }
                it = pending.erase(it);
                progressed = true;
            }
            if (!progressed) throw Error(ErrorCode::INVALID_MODEL, "unresolvable commit parents");
        }
        for (const auto& [name, target] : doc.at("refs").items()) {
            builder.set_ref(name, target.get<std::string>());
        }
        builder.set_head(doc.at("head").get<std::string>());
        return std::move(builder).build();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::INVALID_MODEL, e.what());
    }
}

std::string RepoBuilder::add_blob(std::string bytes) {
    Blob blob(std::move(bytes));
    std::string id = blob.id();
    model_.blobs_.emplace(id, std::move(blob));
    return id;
}

void RepoBuilder::add_blob(const Blob& blob) { model_.blobs_.emplace(blob.id(), blob); }

std::string RepoBuilder::add_commit(Commit commit) {
    for (const auto& p : commit.parents) {
        if (!has_commit(p)) throw Error(ErrorCode::INVALID_MODEL, "parent " + p + " not present");
    }
    for (const auto& [path, blob] : commit.tree) {
        if (!model_.blobs_.count(blob)) {
            throw Error(ErrorCode::INVALID_MODEL, "tree entry " + path + " references unknown blob");
        }
    }
    commit.id = compute_commit_id(commit);
    std::string id = commit.id;
    model_.commits_.emplace(id, std::move(commit));
    return id;
}

void RepoBuilder::set_ref(const std::string& name, const std::string& commit_id) {
    if (!has_commit(commit_id)) throw Error(ErrorCode::INVALID_MODEL, "ref " + name + " targets unknown commit");
    model_.refs_[name] = commit_id;
}

void RepoBuilder::set_head(const std::string& ref_name) { model_.head_ = ref_name; }

RepoModel RepoBuilder::build() && {
    if (model_.refs_.empty()) {
        model_.head_.clear();
    } else if (!model_.refs_.count(model_.head_)) {
        throw Error(ErrorCode::INVALID_MODEL, "head '" + model_.head_ + "' is not a ref");
    }
    return std::move(model_);
}

std::set<std::string> unique_blobs(const RepoModel& repo) {
    std::set<std::string> seen_commits;
    std::set<std::string> blobs;
    for (const auto& [name, tip] : repo.refs()) {
        for (const auto& id : repo.reachable_from(tip)) {
            if (!seen_commits.insert(id).second) continue;
            for (const auto& [path, blob] : repo.commit(id).tree) blobs.insert(blob);
        }
    }
    return blobs;
}

RewriteResult rewrite_history(const RepoModel& repo, const RewriteCallbacks& cbs, const RewriteOptions& options) {
    std::set<std::string> reachable;
    for (const auto& [name, tip] : repo.refs()) {
        auto r = repo.reachable_from(tip);
        reachable.insert(r.begin(), r.end());
    }

    RepoBuilder builder;
    std::map<std::string, std::string> blob_map;  // old blob id -> new blob id
    std::map<std::string, std::vector<std::string>> substitutes;  // pruned commit -> its new parents
    RewriteResult result;

    auto map_blob = [&](const std::string& old_id) -> std::string {
        if (auto it = blob_map.find(old_id); it != blob_map.end()) return it->second;
        const Blob& original = repo.blob(old_id);
        std::string new_id;
        if (cbs.blob_cb) {
            new_id = builder.add_blob(guarded("blob_cb", [&] { return cbs.blob_cb(original); }));
        } else {
            builder.add_blob(original);
            new_id = original.id();
        }
        blob_map.emplace(old_id, new_id);
        return new_id;
    };

    for (const auto& old_id : repo.topological_order()) {
        if (!reachable.count(old_id)) continue;
        const Commit& old = repo.commit(old_id);

        Commit next;
        for (const auto& p : old.parents) {
            std::vector<std::string> mapped;
            if (auto it = result.id_map.find(p); it != result.id_map.end()) {
                mapped.push_back(it->second);
            } else if (auto s = substitutes.find(p); s != substitutes.end()) {
                mapped = s->second;
            }
            for (auto& m : mapped) {
                if (std::find(next.parents.begin(), next.parents.end(), m) == next.parents.end()) {
                    next.parents.push_back(std::move(m));
                }
            }
        }
        next.author_name = cbs.name_cb ? guarded("name_cb", [&] { return cbs.name_cb(old.author_name); })
                                       : old.author_name;
        next.author_email = cbs.email_cb ? guarded("email_cb", [&] { return cbs.email_cb(old.author_email); })
                                         : old.author_email;
        next.message = cbs.message_cb ? guarded("message_cb", [&] { return cbs.message_cb(old.message); })
                                      : old.message;
        next.timestamp = old.timestamp;
        for (const auto& [path, blob] : old.tree) {
            const bool keep = !cbs.filename_cb || guarded("filename_cb", [&] { return cbs.filename_cb(path); });
            if (keep) next.tree.emplace(path, map_blob(blob));
        }

        if (options.prune_emptied && next.tree.empty() && !old.tree.empty()) {
            substitutes.emplace(old_id, next.parents);
            continue;
        }
        result.id_map.emplace(old_id, builder.add_commit(std::move(next)));
    }

    std::string head;
    for (const auto& [name, tip] : repo.refs()) {
        std::string target;
        if (auto it = result.id_map.find(tip); it != result.id_map.end()) {
            target = it->second;
        } else if (auto s = substitutes.find(tip); s != substitutes.end() && !s->second.empty()) {
            target = s->second.front();
        } else {
            continue;
        }
        builder.set_ref(name, target);
        if (name == repo.head() || head.empty()) head = name;
    }
    builder.set_head(head);
    result.repo = std::move(builder).build();
    return result;
}

}  // namespace scrub
