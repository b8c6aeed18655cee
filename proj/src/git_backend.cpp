#include "scrub/git_backend.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <spdlog/spdlog.h>

#include "scrub/error.hpp"

namespace scrub::git {

namespace fs = std::filesystem;

namespace {

struct RawObject {
    std::string type;
    std::string content;
};

std::map<std::string, RawObject> read_all_objects(const fs::path& git_dir) {
    const std::string dump = run_checked({"--git-dir", git_dir.string(), "cat-file", "--batch-all-objects", "--batch"},
                                         ErrorCode::MALFORMED_BUNDLE);
    std::map<std::string, RawObject> objects;
    std::size_t pos = 0;
    while (pos < dump.size()) {
        const std::size_t eol = dump.find('\n', pos);
        if (eol == std::string::npos) break;
        std::istringstream header(dump.substr(pos, eol - pos));
        std::string sha;
        RawObject obj;
        std::size_t size = 0;
        header >> sha >> obj.type >> size;
        pos = eol + 1;
        if (pos + size > dump.size()) throw Error(ErrorCode::MALFORMED_BUNDLE, "truncated object " + sha);
        obj.content = dump.substr(pos, size);
        pos += size + 1;
        objects.emplace(std::move(sha), std::move(obj));
    }
    return objects;
}

std::string to_hex(std::string_view raw) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (unsigned char c : raw) {
        out.push_back(kDigits[c >> 4]);
        out.push_back(kDigits[c & 0x0f]);
    }
    return out;
}

class TreeFlattener {
public:
    explicit TreeFlattener(const std::map<std::string, RawObject>& objects) : objects_(objects) {}

    const std::vector<std::pair<std::string, std::string>>& flatten(const std::string& tree_sha) {
        if (auto it = cache_.find(tree_sha); it != cache_.end()) return it->second;
        std::vector<std::pair<std::string, std::string>> entries;
        const auto& raw = object(tree_sha, "tree").content;
        std::size_t pos = 0;
        while (pos < raw.size()) {
            const std::size_t sp = raw.find(' ', pos);
            const std::size_t nul = raw.find('\0', sp);
            if (sp == std::string::npos || nul == std::string::npos || nul + 21 > raw.size()) {
                throw Error(ErrorCode::MALFORMED_BUNDLE, "corrupt tree " + tree_sha);
            }
            const std::string mode = raw.substr(pos, sp - pos);
            const std::string name = raw.substr(sp + 1, nul - sp - 1);
            const std::string sha = to_hex(std::string_view(raw).substr(nul + 1, 20));
            pos = nul + 21;
            if (mode == "40000") {
                for (const auto& [path, blob] : flatten(sha)) entries.emplace_back(name + "/" + path, blob);
            } else if (mode == "160000") {
                spdlog::debug("skipping submodule entry {}", name);
            } else {
                entries.emplace_back(name, sha);
            }
        }
        return cache_.emplace(tree_sha, std::move(entries)).first->second;
    }

    const RawObject& object(const std::string& sha, std::string_view type) const {
        auto it = objects_.find(sha);
        if (it == objects_.end() || it->second.type != type) {
            throw Error(ErrorCode::MALFORMED_BUNDLE, "missing " + std::string(type) + " " + sha);
        }
        return it->second;
    }

private:
    const std::map<std::string, RawObject>& objects_;
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> cache_;
};

struct ParsedCommit {
    std::string tree;
    std::vector<std::string> parents;
    std::string author_name;
    std::string author_email;
    Timestamp timestamp;
    std::string message;
};

void parse_identity(std::string_view line, ParsedCommit& out) {
    const std::size_t gt = line.rfind('>');
    const std::size_t lt = line.rfind('<', gt);
    if (gt == std::string_view::npos || lt == std::string_view::npos) {
        throw Error(ErrorCode::MALFORMED_BUNDLE, "bad identity line");
    }
    std::string_view name = line.substr(0, lt);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    out.author_name = std::string(name);
    out.author_email = std::string(line.substr(lt + 1, gt - lt - 1));
    std::istringstream rest(std::string(line.substr(gt + 1)));
    std::string tz;
    rest >> out.timestamp.seconds >> tz;
    if (tz.size() == 5) {
        const int minutes = std::stoi(tz.substr(1, 2)) * 60 + std::stoi(tz.substr(3, 2));
        out.timestamp.tz_offset_minutes = tz[0] == '-' ? -minutes : minutes;
    }
}

ParsedCommit parse_commit(const std::string& raw) {
    ParsedCommit c;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        const std::size_t eol = raw.find('\n', pos);
        const std::size_t end = eol == std::string::npos ? raw.size() : eol;
        std::string_view line(raw.data() + pos, end - pos);
        pos = end + 1;
        if (line.empty()) {
            c.message = pos <= raw.size() ? raw.substr(pos) : std::string();
            break;
        }
        if (line.rfind("tree ", 0) == 0) {
            c.tree = std::string(line.substr(5));
        } else if (line.rfind("parent ", 0) == 0) {
            c.parents.emplace_back(line.substr(7));
        } else if (line.rfind("author ", 0) == 0) {
            parse_identity(line.substr(7), c);
        }
        // committer, encoding, gpgsig (and its continuation lines) are not modelled.
    }
    return c;
}

std::string format_tz(int minutes) {
    const char sign = minutes < 0 ? '-' : '+';
    const int m = std::abs(minutes);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%02d%02d", sign, m / 60, m % 60);
    return buf;
}

void append_data(std::string& stream, std::string_view data) {
    stream += "data " + std::to_string(data.size()) + "\n";
    stream.append(data);
    stream += "\n";
}

// Bundles carry HEAD as a bare object id; clone guesses among branches that
// share it. Pick main, then master, then the smallest branch name.
void pin_bundle_head(const fs::path& bundle, const fs::path& git_dir) {
    const auto heads = run({"bundle", "list-heads", fs::absolute(bundle).string()});
    std::string head_sha;
    std::vector<std::string> candidates;
    std::map<std::string, std::string> branch_sha;
    std::istringstream lines(heads.out);
    for (std::string line; std::getline(lines, line);) {
        const std::size_t sp = line.find(' ');
        if (sp == std::string::npos) continue;
        const std::string sha = line.substr(0, sp), ref = line.substr(sp + 1);
        if (ref == "HEAD") head_sha = sha;
        else if (ref.rfind("refs/heads/", 0) == 0) branch_sha[ref] = sha;
    }
    if (head_sha.empty()) return;
    for (const auto& [ref, sha] : branch_sha) {
        if (sha == head_sha) candidates.push_back(ref);
    }
    if (candidates.empty()) return;
    std::string pick = candidates.front();
    for (const char* preferred : {"refs/heads/main", "refs/heads/master"}) {
        if (std::find(candidates.begin(), candidates.end(), preferred) != candidates.end()) {
            pick = preferred;
            break;
        }
    }
    run({"--git-dir", git_dir.string(), "symbolic-ref", "HEAD", pick});
}

RepoModel load_git_dir(const fs::path& git_dir) {
    const std::string listing = run_checked(
        {"--git-dir", git_dir.string(), "for-each-ref",
         "--format=%(objectname) %(objecttype) %(*objectname) %(*objecttype) %(symref) %(refname)"},
        ErrorCode::MALFORMED_BUNDLE);

    std::map<std::string, std::string> ref_targets;  // ref -> git commit sha
    std::istringstream lines(listing);
    std::string line;
    while (std::getline(lines, line)) {
        std::istringstream fields(line);
        std::vector<std::string> parts;
        std::string part;
        while (fields >> part) parts.push_back(part);
        // Peeled fields and symref are empty for plain commit refs.
        const std::string& refname = parts.back();
        if (parts.size() == 3 && parts[1] == "commit") {
            ref_targets[refname] = parts[0];
        } else if (parts.size() == 5 && parts[1] == "tag" && parts[3] == "commit") {
            ref_targets[refname] = parts[2];
        } else if (parts.size() == 4 && parts[1] == "commit") {
            spdlog::debug("skipping symbolic ref {}", refname);
        } else {
            spdlog::warn("skipping ref {} (not a commit)", refname);
        }
    }
    if (ref_targets.empty()) throw Error(ErrorCode::EMPTY_REPOSITORY, "no refs in " + git_dir.string());

    const auto objects = read_all_objects(git_dir);
    TreeFlattener trees(objects);
    RepoBuilder builder;
    std::map<std::string, std::string> commit_ids;  // git sha -> model id
    std::map<std::string, std::string> blob_ids;    // git sha -> model id

    // Iterative post-order so parents are added first.
    for (const auto& [ref, tip] : ref_targets) {
        std::vector<std::pair<std::string, bool>> stack{{tip, false}};
        while (!stack.empty()) {
            auto [sha, expanded] = stack.back();
            stack.pop_back();
            if (commit_ids.count(sha)) continue;
            const ParsedCommit parsed = parse_commit(trees.object(sha, "commit").content);
            if (!expanded) {
                stack.emplace_back(sha, true);
                for (auto it = parsed.parents.rbegin(); it != parsed.parents.rend(); ++it) {
                    if (!commit_ids.count(*it)) stack.emplace_back(*it, false);
                }
                continue;
            }
            Commit commit;
            for (const auto& p : parsed.parents) commit.parents.push_back(commit_ids.at(p));
            commit.author_name = parsed.author_name;
            commit.author_email = parsed.author_email;
            commit.timestamp = parsed.timestamp;
            commit.message = parsed.message;
            for (const auto& [path, blob_sha] : trees.flatten(parsed.tree)) {
                auto it = blob_ids.find(blob_sha);
                if (it == blob_ids.end()) {
                    it = blob_ids.emplace(blob_sha, builder.add_blob(trees.object(blob_sha, "blob").content)).first;
                }
                commit.tree[path] = it->second;
            }
            commit_ids[sha] = builder.add_commit(std::move(commit));
        }
    }
    for (const auto& [ref, tip] : ref_targets) builder.set_ref(ref, commit_ids.at(tip));

    auto head = run({"--git-dir", git_dir.string(), "symbolic-ref", "-q", "HEAD"});
    std::string head_ref = head.out;
    while (!head_ref.empty() && (head_ref.back() == '\n' || head_ref.back() == '\r')) head_ref.pop_back();
    if (!ref_targets.count(head_ref)) {
        head_ref.clear();
        for (const auto& [ref, tip] : ref_targets) {
            if (ref.rfind("refs/heads/", 0) == 0) {
                head_ref = ref;
                break;
            }
        }
        if (head_ref.empty()) head_ref = ref_targets.begin()->first;
    }
    builder.set_head(head_ref);
    return std::move(builder).build();
}

}  // namespace

std::string executable() {
    const char* env = std::getenv("SCRUB_GIT_BIN");
    return env && *env ? env : "git";
}

ProcessResult run(const std::vector<std::string>& args, const ProcessOptions& options) {
    std::vector<std::string> argv{executable(), "-c", "init.defaultBranch=main", "-c", "pack.threads=1"};
    argv.insert(argv.end(), args.begin(), args.end());
    ProcessOptions opts = options;
    opts.env.emplace_back("GIT_CONFIG_NOSYSTEM", "1");
    opts.env.emplace_back("GIT_CONFIG_GLOBAL", "/dev/null");
    opts.env.emplace_back("GIT_TERMINAL_PROMPT", "0");
    opts.env.emplace_back("LC_ALL", "C");
    return run_process(argv, opts);
}

std::string run_checked(const std::vector<std::string>& args, ErrorCode code, const ProcessOptions& options) {
    auto result = run(args, options);
    if (result.exit_code != 0) {
        std::string cmd = "git";
        for (const auto& a : args) cmd += " " + a;
        throw Error(code, cmd + " failed: " + result.err);
    }
    return std::move(result.out);
}

RepoModel load_repository(const fs::path& source) {
    std::error_code ec;
    if (!fs::exists(source, ec)) throw Error(ErrorCode::IO_ERROR, source.string() + " does not exist");

    if (fs::is_directory(source)) {
        if (fs::is_empty(source)) throw Error(ErrorCode::EMPTY_REPOSITORY, source.string() + " is empty");
        auto probe = run({"-C", source.string(), "rev-parse", "--absolute-git-dir"});
        if (probe.exit_code != 0) {
            throw Error(ErrorCode::MALFORMED_BUNDLE, source.string() + " is not a repository");
        }
        std::string git_dir = probe.out;
        while (!git_dir.empty() && git_dir.back() == '\n') git_dir.pop_back();
        return load_git_dir(git_dir);
    }

    TempDir tmp("scrub-load");
    const fs::path mirror = tmp.path() / "repo.git";
    auto clone = run({"clone", "--quiet", "--mirror", fs::absolute(source).string(), mirror.string()});
    if (clone.exit_code != 0) {
        throw Error(ErrorCode::MALFORMED_BUNDLE, "cannot read bundle " + source.string() + ": " + clone.err);
    }
    pin_bundle_head(source, mirror);
    return load_git_dir(mirror);
}

void write_repository(const RepoModel& repo, const fs::path& git_dir) {
    run_checked({"init", "--quiet", "--bare", git_dir.string()}, ErrorCode::IO_ERROR);
    if (repo.empty()) return;

    std::string stream;
    std::map<std::string, std::size_t> marks;
    std::size_t next_mark = 1;
    for (const auto& id : unique_blobs(repo)) {
        marks[id] = next_mark;
        stream += "blob\nmark :" + std::to_string(next_mark++) + "\n";
        append_data(stream, repo.blob(id).bytes());
    }
    static constexpr const char* kScratchRef = "refs/scrub-import/scratch";
    for (const auto& id : repo.topological_order()) {
        const Commit& c = repo.commit(id);
        const std::string ident = c.author_name + " <" + c.author_email + "> " +
                                  std::to_string(c.timestamp.seconds) + " " +
                                  format_tz(c.timestamp.tz_offset_minutes) + "\n";
        stream += std::string("reset ") + kScratchRef + "\n";
        stream += std::string("commit ") + kScratchRef + "\nmark :" + std::to_string(next_mark) + "\n";
        marks[id] = next_mark++;
        stream += "author " + ident;
        stream += "committer " + ident;
        append_data(stream, c.message);
        for (std::size_t i = 0; i < c.parents.size(); ++i) {
            stream += (i == 0 ? "from :" : "merge :") + std::to_string(marks.at(c.parents[i])) + "\n";
        }
        stream += "deleteall\n";
        for (const auto& [path, blob] : c.tree) {
            stream += "M 100644 :" + std::to_string(marks.at(blob)) + " ";
            // Quote paths that fast-import would otherwise misparse.
            if (path.find_first_of("\"\n\\") != std::string::npos || path.front() == '"') {
                stream += '"';
                for (char ch : path) {
                    if (ch == '"' || ch == '\\') stream += '\\';
                    if (ch == '\n') {
                        stream += "\\n";
                        continue;
                    }
                    stream += ch;
                }
                stream += "\"\n";
            } else {
                stream += path + "\n";
            }
        }
        stream += "\n";
    }
    for (const auto& [ref, target] : repo.refs()) {
        stream += "reset " + ref + "\nfrom :" + std::to_string(marks.at(target)) + "\n\n";
    }

    const fs::path stream_file = git_dir / "scrub-import.stream";
    {
        std::ofstream out(stream_file, std::ios::binary);
        out << stream;
    }
    ProcessOptions opts;
    opts.stdin_file = stream_file;
    run_checked({"--git-dir", git_dir.string(), "fast-import", "--quiet", "--date-format=raw", "--force"},
                ErrorCode::IO_ERROR, opts);
    fs::remove(stream_file);
    run_checked({"--git-dir", git_dir.string(), "update-ref", "-d", kScratchRef}, ErrorCode::IO_ERROR);
    run_checked({"--git-dir", git_dir.string(), "symbolic-ref", "HEAD", repo.head()}, ErrorCode::IO_ERROR);
}

void write_bundle(const RepoModel& repo, const fs::path& bundle_path) {
    if (repo.empty()) throw Error(ErrorCode::EMPTY_REPOSITORY, "refusing to bundle a repository without refs");
    TempDir tmp("scrub-write");
    const fs::path git_dir = tmp.path() / "repo.git";
    write_repository(repo, git_dir);
    if (bundle_path.has_parent_path()) fs::create_directories(bundle_path.parent_path());
    run_checked({"--git-dir", git_dir.string(), "bundle", "create", "--quiet", fs::absolute(bundle_path).string(),
                 "--all"},
                ErrorCode::IO_ERROR);
}

std::string dump_objects(const fs::path& source) {
    if (fs::is_directory(source)) {
        return run_checked({"-C", source.string(), "cat-file", "--batch-all-objects", "--batch"},
                           ErrorCode::MALFORMED_BUNDLE);
    }
    TempDir tmp("scrub-dump");
    const fs::path mirror = tmp.path() / "repo.git";
    run_checked({"clone", "--quiet", "--mirror", fs::absolute(source).string(), mirror.string()},
                ErrorCode::MALFORMED_BUNDLE);
    return run_checked({"--git-dir", mirror.string(), "cat-file", "--batch-all-objects", "--batch"},
                       ErrorCode::MALFORMED_BUNDLE);
}

std::uintmax_t directory_size(const fs::path& dir) {
    std::uintmax_t total = 0;
    std::error_code ec;
    for (auto it = fs::recursive_directory_iterator(dir, ec); it != fs::recursive_directory_iterator(); ++it) {
        if (it->is_regular_file(ec)) total += it->file_size(ec);
    }
    return total;
}

}  // namespace scrub::git
