#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace scrub {

// A blob is text iff it is valid UTF-8 and contains no NUL byte.
bool is_text_content(std::string_view bytes);

class Blob {
public:
    Blob() = default;
    explicit Blob(std::string bytes);

    const std::string& id() const { return id_; }
    const std::string& bytes() const { return *data_; }
    std::size_t size() const { return data_ ? data_->size() : 0; }
    bool is_text() const { return is_text_; }

private:
    std::string id_;
    std::shared_ptr<const std::string> data_ = std::make_shared<const std::string>();
    bool is_text_ = true;
};

struct Timestamp {
    std::int64_t seconds = 0;
    int tz_offset_minutes = 0;

    bool operator==(const Timestamp&) const = default;
};

// Flat path -> blob id map; there are no directory objects.
using Tree = std::map<std::string, std::string>;

struct Commit {
    std::string id;
    std::vector<std::string> parents;
    std::string author_name;
    std::string author_email;
    Timestamp timestamp;
    std::string message;
    Tree tree;
};

// SHA-256 over a length-prefixed serialization of every field except `id`.
std::string compute_commit_id(const Commit& commit);

class RepoModel {
public:
    const std::map<std::string, Commit>& commits() const { return commits_; }
    const std::map<std::string, Blob>& blobs() const { return blobs_; }
    const std::map<std::string, std::string>& refs() const { return refs_; }
    const std::string& head() const { return head_; }

    bool empty() const { return refs_.empty(); }
    const Commit& commit(const std::string& id) const;
    const Blob& blob(const std::string& id) const;

    // Commit the head ref points at; throws EMPTY_REPOSITORY when there is none.
    const Commit& head_commit() const;

    // Commit ids ordered so every parent precedes its children; ties broken by id.
    std::vector<std::string> topological_order() const;

    // Commit ids reachable from `tip` (inclusive).
    std::set<std::string> reachable_from(const std::string& tip) const;

    nlohmann::json to_json() const;
    static RepoModel from_json(const nlohmann::json& doc);

private:
    friend class RepoBuilder;

    std::map<std::string, Commit> commits_;
    std::map<std::string, Blob> blobs_;
    std::map<std::string, std::string> refs_;
    std::string head_;
};

// Assembles a RepoModel. Parents must be added before children, which keeps
// the DAG acyclic by construction.
class RepoBuilder {
public:
    RepoBuilder() = default;

    std::string add_blob(std::string bytes);
    void add_blob(const Blob& blob);

    // Computes and returns the commit id; `commit.id` is ignored.
    std::string add_commit(Commit commit);

    void set_ref(const std::string& name, const std::string& commit_id);
    void set_head(const std::string& ref_name);

    bool has_commit(const std::string& id) const { return model_.commits_.count(id) != 0; }

    // Validates ref closure and head membership. A model without refs is
    // allowed and has an empty head.
    RepoModel build() &&;

private:
    RepoModel model_;
};

// Distinct blob ids reachable from any commit on any ref.
std::set<std::string> unique_blobs(const RepoModel& repo);

struct RewriteCallbacks {
    std::function<std::string(const std::string&)> name_cb;
    std::function<std::string(const std::string&)> email_cb;
    std::function<std::string(const std::string&)> message_cb;
    // Receives the original blob, returns the replacement content.
    std::function<std::string(const Blob&)> blob_cb;
    // Returns true to keep the path.
    std::function<bool(const std::string&)> filename_cb;
};

struct RewriteOptions {
    // Drop commits whose tree became empty through filename_cb drops and
    // reattach their children to their parents.
    bool prune_emptied = false;
};

struct RewriteResult {
    RepoModel repo;
    // Old commit id -> new commit id. Pruned commits are absent.
    std::map<std::string, std::string> id_map;
};

// Applies the callbacks to every commit reachable from any ref. Unset
// callbacks act as identity. Throws CALLBACK_FAILURE if a callback throws.
RewriteResult rewrite_history(const RepoModel& repo, const RewriteCallbacks& cbs,
                              const RewriteOptions& options = {});

}  // namespace scrub
