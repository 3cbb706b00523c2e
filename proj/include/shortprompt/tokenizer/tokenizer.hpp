#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace shortprompt::tokenizer {

struct TokenizerSpec {
    std::string id = "word-v1";
    std::string version = "1";

    bool operator==(const TokenizerSpec&) const = default;
};

struct TokenList {
    std::vector<std::string> tokens;

    std::size_t count() const noexcept { return tokens.size(); }
};

class Tokenizer {
public:
    virtual ~Tokenizer() = default;

    virtual const TokenizerSpec& spec() const noexcept = 0;

    /// Throws Errc::invalid_utf8 on malformed input.
    virtual TokenList tokenize(std::string_view text) const = 0;

    virtual std::size_t count(std::string_view text) const { return tokenize(text).count(); }
};

// Whitespace words with leading and trailing punctuation runs split off.
// "Hello, world!" -> ["Hello", ",", "world", "!"]
class WordTokenizer final : public Tokenizer {
public:
    static constexpr std::string_view kId = "word-v1";

    const TokenizerSpec& spec() const noexcept override { return spec_; }
    TokenList tokenize(std::string_view text) const override;

private:
    TokenizerSpec spec_{std::string(kId), "1"};
};

// Byte-level BPE over a tiktoken-format rank file ("<base64 token> <rank>"
// per line). Pre-tokenization approximates the GPT-style split into letter
// runs, digit groups of up to three, symbol runs and whitespace.
class BpeTokenizer final : public Tokenizer {
public:
    static constexpr std::string_view kId = "bpe-compat";

    BpeTokenizer(std::map<std::string, int> ranks, std::string version);

    static std::unique_ptr<BpeTokenizer> from_file(const std::filesystem::path& path);
    static std::map<std::string, int> parse_ranks(std::string_view document);

    const TokenizerSpec& spec() const noexcept override { return spec_; }
    TokenList tokenize(std::string_view text) const override;

    /// Splits text into the pieces that are BPE-encoded independently.
    static std::vector<std::string_view> pretokenize(std::string_view text);

private:
    void encode_piece(std::string_view piece, std::vector<std::string>& out) const;

    std::map<std::string, int, std::less<>> ranks_;
    TokenizerSpec spec_;
};

// Resolves a TokenizerSpec to an instance. word-v1 is always available;
// bpe-compat only when a rank file has been configured.
class TokenizerRegistry {
public:
    TokenizerRegistry();

    void set_bpe_vocabulary(const std::filesystem::path& path);

    /// Throws Errc::unknown_tokenizer for unsupported ids.
    std::shared_ptr<const Tokenizer> resolve(const TokenizerSpec& spec) const;

    bool supports(const TokenizerSpec& spec) const noexcept;

private:
    std::shared_ptr<const Tokenizer> word_;
    std::shared_ptr<const Tokenizer> bpe_;
};

/// Convenience wrappers over a default registry (word-v1 only).
TokenList tokenize(std::string_view text, const TokenizerSpec& spec);
std::size_t count_tokens(std::string_view text, const TokenizerSpec& spec);

}  // namespace shortprompt::tokenizer
