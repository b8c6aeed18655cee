#include "scrub/zones.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "scrub/embedded_data.hpp"
#include "scrub/error.hpp"
#include "scrub/repo_model.hpp"

namespace scrub {

namespace {

bool starts_with_at(std::string_view s, std::size_t pos, std::string_view prefix) {
    return !prefix.empty() && s.size() - pos >= prefix.size() && s.compare(pos, prefix.size(), prefix) == 0;
}

bool is_ident_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '$';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

FileClass parse_class(const std::string& s) {
    if (s == "CODE") return FileClass::CODE;
    if (s == "CONFIG") return FileClass::CONFIG;
    if (s == "DOC") return FileClass::DOC;
    if (s == "BINARY") return FileClass::BINARY;
    throw Error(ErrorCode::CONFIG_INVALID, "unknown file class " + s);
}

FunctionStyle parse_style(const std::string& s) {
    if (s == "c_braces") return FunctionStyle::C_BRACES;
    if (s == "keyword_braces") return FunctionStyle::KEYWORD_BRACES;
    if (s == "indent") return FunctionStyle::INDENT;
    if (s == "none") return FunctionStyle::NONE;
    throw Error(ErrorCode::CONFIG_INVALID, "unknown function style " + s);
}

// Scans a quoted literal opened at `pos` with `open`, closed by `close`.
Zone scan_string(std::string_view s, std::size_t pos, std::string_view open, std::string_view close, bool escapes) {
    std::size_t j = pos + open.size();
    while (j < s.size()) {
        if (escapes && s[j] == '\\') {
            j += 2;
            continue;
        }
        if (starts_with_at(s, j, close)) {
            return {ZoneKind::STRING, pos, j + close.size(), pos + open.size(), j};
        }
        ++j;
    }
    const std::size_t body = std::min(pos + open.size(), s.size());
    return {ZoneKind::STRING, pos, s.size(), body, s.size()};
}

std::vector<Zone> lex(std::string_view s, const LexerSpec& spec) {
    std::vector<Zone> zones;
    std::size_t i = 0;
    while (i < s.size()) {
        std::optional<Zone> zone;
        for (const auto& [open, close] : spec.block_comments) {
            if (starts_with_at(s, i, open)) {
                const std::size_t at = s.find(close, i + open.size());
                const std::size_t end = at == std::string_view::npos ? s.size() : at + close.size();
                const std::size_t body_end = at == std::string_view::npos ? s.size() : at;
                zone = Zone{ZoneKind::COMMENT, i, end, std::min(i + open.size(), s.size()), body_end};
                break;
            }
        }
        if (!zone) {
            for (const auto& opener : spec.line_comments) {
                if (!starts_with_at(s, i, opener)) continue;
                if (spec.word_start_line_comments && i > 0 && !is_space(s[i - 1]) && s[i - 1] != ';') continue;
                const std::size_t nl = s.find('\n', i);
                const std::size_t end = nl == std::string_view::npos ? s.size() : nl;
                zone = Zone{ZoneKind::COMMENT, i, end, i + opener.size(), end};
                break;
            }
        }
        if (!zone) {
            for (const auto& q : spec.triple_quotes) {
                if (starts_with_at(s, i, q)) {
                    zone = scan_string(s, i, q, q, true);
                    break;
                }
            }
        }
        if (!zone) {
            for (const auto& q : spec.strings) {
                if (starts_with_at(s, i, q)) {
                    zone = scan_string(s, i, q, q, true);
                    break;
                }
            }
        }
        if (!zone) {
            for (const auto& q : spec.raw_strings) {
                if (starts_with_at(s, i, q)) {
                    zone = scan_string(s, i, q, q, false);
                    break;
                }
            }
        }
        if (zone) {
            i = zone->end;
            zones.push_back(*zone);
        } else {
            ++i;
        }
    }
    return zones;
}

class LineIndex {
public:
    explicit LineIndex(std::string_view s) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '\n') newlines_.push_back(i);
        }
    }
    // Zero-based line number of byte offset `pos`.
    std::size_t line_of(std::size_t pos) const {
        return static_cast<std::size_t>(std::lower_bound(newlines_.begin(), newlines_.end(), pos) - newlines_.begin());
    }

private:
    std::vector<std::size_t> newlines_;
};

std::vector<bool> zone_mask(std::string_view s, const std::vector<Zone>& zones) {
    std::vector<bool> mask(s.size(), false);
    for (const auto& z : zones) std::fill(mask.begin() + static_cast<long>(z.begin), mask.begin() + static_cast<long>(z.end), true);
    return mask;
}

std::size_t line_start(std::string_view s, std::size_t pos) {
    const std::size_t nl = pos == 0 ? std::string_view::npos : s.rfind('\n', pos - 1);
    return nl == std::string_view::npos ? 0 : nl + 1;
}

// Offset of the '}' matching the '{' at `open`, or s.size() - 1 if unbalanced.
std::size_t match_brace(std::string_view s, const std::vector<bool>& in_zone, std::size_t open) {
    int depth = 0;
    for (std::size_t j = open; j < s.size(); ++j) {
        if (in_zone[j]) continue;
        if (s[j] == '{') ++depth;
        if (s[j] == '}' && --depth == 0) return j;
    }
    return s.empty() ? 0 : s.size() - 1;
}

FunctionSpan make_span(std::string_view s, const LineIndex& lines, std::size_t anchor, std::size_t last) {
    const std::size_t begin = line_start(s, anchor);
    const std::size_t end = std::min(last + 1, s.size());
    return {begin, end, lines.line_of(last) - lines.line_of(anchor) + 1};
}

const std::vector<std::string_view> kControlWords = {
    "if", "for", "while", "switch", "catch", "return", "sizeof", "foreach", "using", "lock",
    "synchronized", "fixed", "with", "elif", "else", "do", "try", "typeof", "new", "throw", "await"};

const std::vector<std::string_view> kTypeWords = {"class", "struct", "namespace", "enum", "union", "interface",
                                                  "extends", "implements"};

bool contains_word(std::string_view text, const std::vector<std::string_view>& words) {
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_ident_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_ident_char(text[j])) ++j;
        if (std::find(words.begin(), words.end(), text.substr(i, j - i)) != words.end()) return true;
        i = j;
    }
    return false;
}

std::vector<FunctionSpan> c_brace_functions(std::string_view s, const std::vector<bool>& in_zone) {
    static constexpr std::size_t kMaxSuffix = 80;
    LineIndex lines(s);
    std::vector<FunctionSpan> out;
    for (std::size_t pos = 0; pos < s.size(); ++pos) {
        if (s[pos] != '{' || in_zone[pos]) continue;

        // Walk back over qualifiers / trailing return types to the closing ')'.
        std::size_t k = pos;
        bool found_paren = false;
        while (k > 0 && pos - k < kMaxSuffix) {
            const char c = s[k - 1];
            if (c == ')' && !in_zone[k - 1]) {
                found_paren = true;
                break;
            }
            if (!(is_ident_char(c) || is_space(c) || c == ':' || c == ',' || c == '<' || c == '>' || c == '&' ||
                  c == '*' || c == '-' || c == '.' || c == '?' || c == '[' || c == ']')) {
                break;
            }
            --k;
        }
        if (!found_paren) continue;
        const std::size_t close = k - 1;
        if (contains_word(s.substr(k, pos - k), kTypeWords)) continue;

        int depth = 0;
        std::size_t open = std::string_view::npos;
        for (std::size_t j = close + 1; j-- > 0;) {
            if (in_zone[j]) continue;
            if (s[j] == ')') ++depth;
            if (s[j] == '(' && --depth == 0) {
                open = j;
                break;
            }
        }
        if (open == std::string_view::npos) continue;

        std::size_t q = open;
        while (q > 0 && (s[q - 1] == ' ' || s[q - 1] == '\t')) --q;
        std::size_t ident_end = q;
        while (q > 0 && is_ident_char(s[q - 1])) --q;
        const std::string_view ident = s.substr(q, ident_end - q);
        if (ident.empty() || std::isdigit(static_cast<unsigned char>(ident.front()))) continue;
        if (std::find(kControlWords.begin(), kControlWords.end(), ident) != kControlWords.end()) continue;

        out.push_back(make_span(s, lines, q, match_brace(s, in_zone, pos)));
    }
    return out;
}

std::vector<FunctionSpan> keyword_brace_functions(std::string_view s, const std::vector<bool>& in_zone,
                                                  const std::vector<std::string>& keywords) {
    LineIndex lines(s);
    std::vector<FunctionSpan> out;
    for (const auto& kw : keywords) {
        std::size_t at = 0;
        while ((at = s.find(kw, at)) != std::string_view::npos) {
            const std::size_t after = at + kw.size();
            const bool boundary = (at == 0 || (!is_ident_char(s[at - 1]) && s[at - 1] != '.')) &&
                                  (after >= s.size() || !is_ident_char(s[after]));
            if (!boundary || in_zone[at]) {
                at = after;
                continue;
            }
            int depth = 0;
            std::size_t body = std::string_view::npos;
            for (std::size_t j = after; j < s.size(); ++j) {
                if (in_zone[j]) continue;
                const char c = s[j];
                if (c == '(' || c == '[') ++depth;
                if (c == ')' || c == ']') --depth;
                if (depth > 0) continue;
                if (c == '{') {
                    body = j;
                    break;
                }
                const bool arrow = c == '=' && j + 1 < s.size() && s[j + 1] == '>';
                const bool assign = c == '=' && !arrow && (j == 0 || (s[j - 1] != '=' && s[j - 1] != '!' &&
                                                                      s[j - 1] != '<' && s[j - 1] != '>'));
                if (c == ';' || c == '}' || assign) break;
            }
            if (body != std::string_view::npos) {
                out.push_back(make_span(s, lines, at, match_brace(s, in_zone, body)));
            }
            at = after;
        }
    }
    std::sort(out.begin(), out.end(), [](const FunctionSpan& a, const FunctionSpan& b) { return a.begin < b.begin; });
    return out;
}

std::vector<FunctionSpan> indent_functions(std::string_view s, const std::vector<bool>& in_zone,
                                           const std::vector<std::string>& keywords) {
    struct Line {
        std::size_t begin;
        std::size_t end;  // excluding '\n'
        std::size_t indent;
        bool blank;
    };
    std::vector<Line> lines;
    for (std::size_t pos = 0; pos < s.size();) {
        std::size_t nl = s.find('\n', pos);
        if (nl == std::string_view::npos) nl = s.size();
        std::size_t ind = pos;
        while (ind < nl && (s[ind] == ' ' || s[ind] == '\t')) ++ind;
        lines.push_back({pos, nl, ind - pos, ind == nl});
        pos = nl + 1;
    }

    std::vector<FunctionSpan> out;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const Line& line = lines[li];
        if (line.blank) continue;
        const std::size_t first = line.begin + line.indent;
        if (in_zone[first]) continue;
        std::string_view text = s.substr(first, line.end - first);
        if (text.rfind("async ", 0) == 0) text.remove_prefix(6);
        const bool is_def = std::any_of(keywords.begin(), keywords.end(), [&](const std::string& kw) {
            return text.size() > kw.size() && text.compare(0, kw.size(), kw) == 0 && is_space(text[kw.size()]);
        });
        if (!is_def) continue;

        std::size_t last = li;
        for (std::size_t lj = li + 1; lj < lines.size(); ++lj) {
            const Line& next = lines[lj];
            if (next.blank) continue;
            const std::size_t next_first = next.begin + next.indent;
            if (next.indent > line.indent || in_zone[next.begin]) {
                last = lj;
                continue;
            }
            if (next.indent == line.indent && s.substr(next_first, next.end - next_first) == "end") last = lj;
            break;
        }
        const std::size_t end = std::min(lines[last].end + 1, s.size());
        out.push_back({line.begin, end, last - li + 1});
    }
    return out;
}

}  // namespace

std::string_view to_string(FileClass cls) {
    switch (cls) {
        case FileClass::CODE: return "CODE";
        case FileClass::CONFIG: return "CONFIG";
        case FileClass::DOC: return "DOC";
        case FileClass::BINARY: return "BINARY";
    }
    return "DOC";
}

std::string_view to_string(ZoneKind kind) { return kind == ZoneKind::COMMENT ? "COMMENT" : "STRING"; }

std::string_view base_name(std::string_view path) {
    const std::size_t slash = path.rfind('/');
    return slash == std::string_view::npos ? path : path.substr(slash + 1);
}

std::string extension_key(std::string_view path) {
    const std::string_view name = base_name(path);
    const std::size_t dot = name.rfind('.');
    if (dot == std::string_view::npos || dot == 0) return std::string(name);
    return lower(name.substr(dot));
}

const LanguageMap& LanguageMap::builtin() {
    static const LanguageMap map = from_json(nlohmann::json::parse(embedded::lang_map_json()));
    return map;
}

LanguageMap LanguageMap::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::CONFIG_INVALID, "cannot read language map " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::CONFIG_INVALID, path.string() + ": " + e.what());
    }
}

LanguageMap LanguageMap::from_json(const nlohmann::json& doc) {
    LanguageMap map;
    try {
        for (const auto& [name, spec] : doc.at("languages").items()) {
            LanguageSpec lang;
            lang.name = name;
            lang.supported = spec.value("supported", false);
            if (spec.contains("lexer")) {
                const auto& lx = spec.at("lexer");
                LexerSpec lexer;
                lexer.line_comments = lx.value("line_comments", std::vector<std::string>{});
                for (const auto& pair : lx.value("block_comments", nlohmann::json::array())) {
                    lexer.block_comments.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
                }
                lexer.triple_quotes = lx.value("triple_quotes", std::vector<std::string>{});
                lexer.strings = lx.value("strings", std::vector<std::string>{});
                lexer.raw_strings = lx.value("raw_strings", std::vector<std::string>{});
                lexer.word_start_line_comments = lx.value("word_start_line_comments", false);
                lang.lexer = std::move(lexer);
            }
            if (spec.contains("functions")) {
                lang.function_style = parse_style(spec.at("functions").value("style", "none"));
                lang.function_keywords = spec.at("functions").value("keywords", std::vector<std::string>{});
            }
            map.languages_.emplace(name, std::move(lang));
        }
        auto read_entries = [&](const char* key, std::map<std::string, Entry, std::less<>>& target, bool lowercase) {
            if (!doc.contains(key)) return;
            for (const auto& [k, v] : doc.at(key).items()) {
                const std::string lang = v.at(0).get<std::string>();
                if (!map.languages_.count(lang)) {
                    throw Error(ErrorCode::CONFIG_INVALID, std::string(key) + " entry " + k + " names unknown language " + lang);
                }
                target[lowercase ? lower(k) : k] = Entry{lang, parse_class(v.at(1).get<std::string>())};
            }
        };
        read_entries("extensions", map.extensions_, true);
        read_entries("filenames", map.filenames_, false);
        for (const auto& p : doc.value("doc_name_prefixes", std::vector<std::string>{"readme"})) {
            map.doc_prefixes_.push_back(lower(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::CONFIG_INVALID, std::string("language map: ") + e.what());
    }
    return map;
}

std::optional<LanguageMap::Entry> LanguageMap::lookup(std::string_view path) const {
    const std::string_view name = base_name(path);
    if (auto it = filenames_.find(name); it != filenames_.end()) return it->second;
    if (auto it = extensions_.find(extension_key(path)); it != extensions_.end()) return it->second;
    return std::nullopt;
}

const LanguageSpec* LanguageMap::language(std::string_view name) const {
    auto it = languages_.find(name);
    return it == languages_.end() ? nullptr : &it->second;
}

std::string LanguageMap::language_for(std::string_view path) const {
    auto entry = lookup(path);
    return entry ? entry->language : std::string();
}

bool LanguageMap::is_supported(std::string_view path) const {
    auto entry = lookup(path);
    if (!entry) return false;
    const LanguageSpec* lang = language(entry->language);
    return lang && lang->supported;
}

bool LanguageMap::is_doc_name(std::string_view path) const {
    const std::string name = lower(base_name(path));
    return std::any_of(doc_prefixes_.begin(), doc_prefixes_.end(),
                       [&](const std::string& p) { return name.rfind(p, 0) == 0; });
}

FileClass LanguageMap::classify(std::string_view path, std::string_view content) const {
    if (!is_text_content(content)) return FileClass::BINARY;
    if (is_doc_name(path)) return FileClass::DOC;
    if (auto entry = lookup(path)) return entry->file_class;
    return FileClass::DOC;
}

FileClass classify_file(std::string_view path, std::string_view content, const LanguageMap& map) {
    return map.classify(path, content);
}

std::vector<Zone> extract_zones(std::string_view content, std::string_view language, const LanguageMap& map) {
    const LanguageSpec* lang = map.language(language);
    if (!lang || !lang->lexer) {
        throw Error(ErrorCode::UNSUPPORTED_LANGUAGE, "no lexer for language '" + std::string(language) + "'");
    }
    return lex(content, *lang->lexer);
}

std::vector<FunctionSpan> extract_functions(std::string_view content, std::string_view language,
                                            const LanguageMap& map) {
    const LanguageSpec* lang = map.language(language);
    if (!lang || content.empty() || lang->function_style == FunctionStyle::NONE) return {};
    const std::vector<Zone> zones = lang->lexer ? lex(content, *lang->lexer) : std::vector<Zone>{};
    const std::vector<bool> in_zone = zone_mask(content, zones);
    switch (lang->function_style) {
        case FunctionStyle::C_BRACES: return c_brace_functions(content, in_zone);
        case FunctionStyle::KEYWORD_BRACES: return keyword_brace_functions(content, in_zone, lang->function_keywords);
        case FunctionStyle::INDENT: return indent_functions(content, in_zone, lang->function_keywords);
        case FunctionStyle::NONE: break;
    }
    return {};
}

}  // namespace scrub
