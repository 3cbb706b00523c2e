#include "shortprompt/core/codec.hpp"
#include "shortprompt/core/errors.hpp"
#include "shortprompt/core/utf8.hpp"
#include "shortprompt/tokenizer/tokenizer.hpp"


#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace shortprompt::tokenizer {

namespace {

std::string decode_base64(std::string_view in)
{
    const auto bytes = codec::base64_decode(in);
    return std::string(bytes.begin(), bytes.end());
}

enum class CharClass { space, letter, digit, other };

CharClass classify(char32_t cp)
{
    if (utf8::is_space(cp)) {
        return CharClass::space;
    }
    if (cp >= U'0' && cp <= U'9') {
        return CharClass::digit;
    }
    if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || cp == U'\'' ||
        (cp >= 0x80 && !utf8::is_punctuation(cp))) {
        return CharClass::letter;
    }
    return CharClass::other;
}

}  // namespace

BpeTokenizer::BpeTokenizer(std::map<std::string, int> ranks, std::string version)
    : ranks_(ranks.begin(), ranks.end()), spec_{std::string(kId), std::move(version)}
{
}

std::map<std::string, int> BpeTokenizer::parse_ranks(std::string_view document)
{
    std::map<std::string, int> ranks;
    std::size_t line_no = 0;
    while (!document.empty()) {
        ++line_no;
        const auto eol = document.find('\n');
        auto line = document.substr(0, eol);
        document = eol == std::string_view::npos ? std::string_view{} : document.substr(eol + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        const auto sp = line.find(' ');
        int rank = 0;
        if (sp == std::string_view::npos ||
            std::from_chars(line.data() + sp + 1, line.data() + line.size(), rank).ec !=
                std::errc{}) {
            throw Error(Errc::parse_error, "rank file line " + std::to_string(line_no));
        }
        ranks.emplace(decode_base64(line.substr(0, sp)), rank);
    }
    return ranks;
}

std::unique_ptr<BpeTokenizer> BpeTokenizer::from_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::unknown_tokenizer, "cannot open rank file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::make_unique<BpeTokenizer>(parse_ranks(buf.str()), path.stem().string());
}

std::vector<std::string_view> BpeTokenizer::pretokenize(std::string_view text)
{
    auto decoded = utf8::decode(text);
    if (!decoded) {
        throw Error(Errc::invalid_utf8);
    }
    const auto& cps = *decoded;
    std::vector<std::string_view> pieces;
    std::size_t i = 0;
    while (i < cps.size()) {
        const std::size_t begin = cps[i].offset;
        std::size_t j = i;
        auto cls = classify(cps[j].value);
        // A single leading space attaches to the following word or symbol run.
        if (cps[j].value == U' ' && j + 1 < cps.size()) {
            const auto next = classify(cps[j + 1].value);
            if (next == CharClass::letter || next == CharClass::other) {
                ++j;
                cls = next;
            }
        }
        if (cls == CharClass::digit) {
            const std::size_t limit = j + 3;
            while (j < cps.size() && j < limit && classify(cps[j].value) == CharClass::digit) {
                ++j;
            }
        } else {
            while (j < cps.size() && classify(cps[j].value) == cls) {
                ++j;
            }
        }
        const std::size_t end = j < cps.size() ? cps[j].offset : text.size();
        pieces.push_back(text.substr(begin, end - begin));
        i = j;
    }
    return pieces;
}

void BpeTokenizer::encode_piece(std::string_view piece, std::vector<std::string>& out) const
{
    if (ranks_.find(piece) != ranks_.end()) {
        out.emplace_back(piece);
        return;
    }
    std::vector<std::string> parts;
    parts.reserve(piece.size());
    for (char c : piece) {
        parts.emplace_back(1, c);
    }
    while (parts.size() > 1) {
        int best_rank = std::numeric_limits<int>::max();
        std::size_t best = parts.size();
        for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
            const auto merged = parts[k] + parts[k + 1];
            if (auto it = ranks_.find(merged); it != ranks_.end() && it->second < best_rank) {
                best_rank = it->second;
                best = k;
            }
        }
        if (best == parts.size()) {
            break;
        }
        parts[best] += parts[best + 1];
        parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    }
    for (auto& p : parts) {
        out.push_back(std::move(p));
    }
}

TokenList BpeTokenizer::tokenize(std::string_view text) const
{
    TokenList out;
    for (auto piece : pretokenize(text)) {
        encode_piece(piece, out.tokens);
    }
    return out;
}

}  // namespace shortprompt::tokenizer
