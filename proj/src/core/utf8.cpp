#include "shortprompt/core/utf8.hpp"

#include "shortprompt/core/errors.hpp"

namespace shortprompt::utf8 {

std::optional<std::vector<CodePoint>> decode(std::string_view text)
{
    std::vector<CodePoint> out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto b0 = static_cast<unsigned char>(text[i]);
        std::size_t len = 0;
        char32_t cp = 0;
        if (b0 < 0x80) {
            len = 1;
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            return std::nullopt;
        }
        if (i + len > text.size()) {
            return std::nullopt;
        }
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(text[i + k]);
            if ((b & 0xC0) != 0x80) {
                return std::nullopt;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        static constexpr char32_t kMinForLength[] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMinForLength[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            return std::nullopt;
        }
        out.push_back({cp, i, len});
        i += len;
    }
    return out;
}

bool is_valid(std::string_view text) { return decode(text).has_value(); }

void append(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_space(char32_t cp) noexcept
{
    switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
        return true;
    default:
        return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_punctuation(char32_t cp) noexcept
{
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
        return true;
    default:
        break;
    }
    return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
           (cp >= 0x3001 && cp <= 0x3003) || (cp >= 0x3008 && cp <= 0x3011) ||
           (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
           (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65);
}

char32_t fold_case(char32_t cp) noexcept
{
    if (cp >= U'A' && cp <= U'Z') {
        return cp + 0x20;
    }
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) {
        return cp + 0x20;
    }
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) {
        return cp + 0x20;
    }
    if (cp >= 0x410 && cp <= 0x42F) {
        return cp + 0x20;
    }
    if (cp >= 0x400 && cp <= 0x40F) {
        return cp + 0x50;
    }
    return cp;
}

std::string fold_case(std::string_view text)
{
    auto cps = decode(text);
    if (!cps) {
        throw Error(Errc::invalid_utf8);
    }
    std::string out;
    out.reserve(text.size());
    for (const auto& cp : *cps) {
        append(out, fold_case(cp.value));
    }
    return out;
}

std::vector<std::string_view> split_whitespace(std::string_view text)
{
    auto cps = decode(text);
    if (!cps) {
        throw Error(Errc::invalid_utf8);
    }
    std::vector<std::string_view> words;
    std::size_t start = std::string_view::npos;
    for (const auto& cp : *cps) {
        if (is_space(cp.value)) {
            if (start != std::string_view::npos) {
                words.push_back(text.substr(start, cp.offset - start));
                start = std::string_view::npos;
            }
        } else if (start == std::string_view::npos) {
            start = cp.offset;
        }
    }
    if (start != std::string_view::npos) {
        words.push_back(text.substr(start));
    }
    return words;
}

namespace {

template <typename Pred>
std::string_view trim_if(std::string_view text, Pred pred)
{
    auto cps = decode(text);
    if (!cps) {
        throw Error(Errc::invalid_utf8);
    }
    std::size_t first = 0;
    while (first < cps->size() && pred((*cps)[first].value)) {
        ++first;
    }
    if (first == cps->size()) {
        return {};
    }
    std::size_t last = cps->size();
    while (last > first && pred((*cps)[last - 1].value)) {
        --last;
    }
    const auto begin = (*cps)[first].offset;
    const auto end = (*cps)[last - 1].offset + (*cps)[last - 1].length;
    return text.substr(begin, end - begin);
}

}  // namespace

std::string_view trim(std::string_view text) { return trim_if(text, is_space); }

std::string_view strip_punctuation(std::string_view word)
{
    return trim_if(word, is_punctuation);
}

}  // namespace shortprompt::utf8
