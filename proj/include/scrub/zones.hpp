#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace scrub {

enum class FileClass { CODE, CONFIG, DOC, BINARY };

std::string_view to_string(FileClass cls);

enum class ZoneKind { COMMENT, STRING };

std::string_view to_string(ZoneKind kind);

// Byte range [begin, end) of a comment or string literal.
// [body_begin, body_end) excludes the delimiters.
struct Zone {
    ZoneKind kind;
    std::size_t begin;
    std::size_t end;
    std::size_t body_begin;
    std::size_t body_end;

    bool operator==(const Zone&) const = default;
};

struct FunctionSpan {
    std::size_t begin;
    std::size_t end;
    std::size_t line_count;
};

struct LexerSpec {
    std::vector<std::string> line_comments;
    std::vector<std::pair<std::string, std::string>> block_comments;
    std::vector<std::string> triple_quotes;
    // Delimiters with backslash escapes.
    std::vector<std::string> strings;
    // Delimiters without escapes (shell single quotes, Go backticks).
    std::vector<std::string> raw_strings;
    // Line comments only start at the beginning of a word (shell `#`).
    bool word_start_line_comments = false;
};

enum class FunctionStyle { NONE, C_BRACES, KEYWORD_BRACES, INDENT };

struct LanguageSpec {
    std::string name;
    // Counts toward `loc` and the language shares.
    bool supported = false;
    std::optional<LexerSpec> lexer;
    FunctionStyle function_style = FunctionStyle::NONE;
    std::vector<std::string> function_keywords;
};

// Extension/filename -> (language, class) table plus per-language lexer data.
class LanguageMap {
public:
    struct Entry {
        std::string language;
        FileClass file_class;
    };

    // The table shipped in data/lang_map.json.
    static const LanguageMap& builtin();
    static LanguageMap from_json(const nlohmann::json& doc);
    static LanguageMap load(const std::filesystem::path& path);

    std::optional<Entry> lookup(std::string_view path) const;
    const LanguageSpec* language(std::string_view name) const;
    // Language name for the path, empty when unknown.
    std::string language_for(std::string_view path) const;
    bool is_supported(std::string_view path) const;
    bool is_doc_name(std::string_view path) const;

    FileClass classify(std::string_view path, std::string_view content) const;

private:
    std::map<std::string, LanguageSpec, std::less<>> languages_;
    std::map<std::string, Entry, std::less<>> extensions_;
    std::map<std::string, Entry, std::less<>> filenames_;
    std::vector<std::string> doc_prefixes_;
};

// Lowercased extension including the dot (".py"), or the file name when it
// has none.
std::string extension_key(std::string_view path);
std::string_view base_name(std::string_view path);

FileClass classify_file(std::string_view path, std::string_view content,
                        const LanguageMap& map = LanguageMap::builtin());

// Single left-to-right lexical pass. Throws UNSUPPORTED_LANGUAGE when the
// language has no lexer. Unterminated zones extend to end of input.
std::vector<Zone> extract_zones(std::string_view content, std::string_view language,
                                const LanguageMap& map = LanguageMap::builtin());

// Empty for languages without function support.
std::vector<FunctionSpan> extract_functions(std::string_view content, std::string_view language,
                                            const LanguageMap& map = LanguageMap::builtin());

}  // namespace scrub
