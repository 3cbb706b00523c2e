#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shortprompt::utf8 {

struct CodePoint {
    char32_t value;
    std::size_t offset;  // byte offset of the first unit
    std::size_t length;  // encoded length in bytes
};

/// Decodes `text`, or returns nullopt on malformed input (overlongs,
/// surrogates and values above U+10FFFF are rejected).
std::optional<std::vector<CodePoint>> decode(std::string_view text);

bool is_valid(std::string_view text);

void append(std::string& out, char32_t cp);

bool is_space(char32_t cp) noexcept;
bool is_punctuation(char32_t cp) noexcept;

/// Simple one-to-one lowercase mapping for ASCII, Latin-1, Greek and Cyrillic.
char32_t fold_case(char32_t cp) noexcept;

std::string fold_case(std::string_view text);

/// Splits on Unicode whitespace. Views point into `text`. Throws
/// Errc::invalid_utf8 on malformed input.
std::vector<std::string_view> split_whitespace(std::string_view text);

/// Removes leading and trailing Unicode whitespace.
std::string_view trim(std::string_view text);

/// Removes leading and trailing punctuation code points.
std::string_view strip_punctuation(std::string_view word);

}  // namespace shortprompt::utf8
