#include "shortprompt/core/errors.hpp"
#include "shortprompt/core/utf8.hpp"
#include "shortprompt/tokenizer/tokenizer.hpp"

namespace shortprompt::tokenizer {

TokenList WordTokenizer::tokenize(std::string_view text) const
{
    TokenList out;
    for (auto word : utf8::split_whitespace(text)) {
        const auto core = utf8::strip_punctuation(word);
        if (core.empty()) {
            out.tokens.emplace_back(word);
            continue;
        }
        const auto lead = static_cast<std::size_t>(core.data() - word.data());
        const auto trail_start = lead + core.size();
        if (lead > 0) {
            out.tokens.emplace_back(word.substr(0, lead));
        }
        out.tokens.emplace_back(core);
        if (trail_start < word.size()) {
            out.tokens.emplace_back(word.substr(trail_start));
        }
    }
    return out;
}

TokenizerRegistry::TokenizerRegistry() : word_(std::make_shared<WordTokenizer>()) {}

void TokenizerRegistry::set_bpe_vocabulary(const std::filesystem::path& path)
{
    bpe_ = BpeTokenizer::from_file(path);
}

std::shared_ptr<const Tokenizer> TokenizerRegistry::resolve(const TokenizerSpec& spec) const
{
    if (spec == word_->spec()) {
        return word_;
    }
    if (bpe_ && spec == bpe_->spec()) {
        return bpe_;
    }
    throw Error(Errc::unknown_tokenizer, spec.id + "@" + spec.version);
}

bool TokenizerRegistry::supports(const TokenizerSpec& spec) const noexcept
{
    return spec == word_->spec() || (bpe_ && spec == bpe_->spec());
}

namespace {

const TokenizerRegistry& default_registry()
{
    static const TokenizerRegistry registry;
    return registry;
}

}  // namespace

TokenList tokenize(std::string_view text, const TokenizerSpec& spec)
{
    return default_registry().resolve(spec)->tokenize(text);
}

std::size_t count_tokens(std::string_view text, const TokenizerSpec& spec)
{
    return default_registry().resolve(spec)->count(text);
}

}  // namespace shortprompt::tokenizer
