#include "shortprompt/core/overlap.hpp"

#include "shortprompt/core/utf8.hpp"

namespace shortprompt {

std::string normalize_word(std::string_view word, Normalization rule)
{
    if (rule == Normalization::exact) {
        return std::string(word);
    }
    return utf8::fold_case(utf8::strip_punctuation(word));
}

OverlapResult compute_overlap(std::string_view original, std::string_view player,
                              Normalization rule)
{
    OverlapResult result;
    std::set<std::string> original_set;
    for (auto word : utf8::split_whitespace(original)) {
        result.original_tokens.emplace_back(word);
        if (auto norm = normalize_word(word, rule); !norm.empty()) {
            original_set.insert(std::move(norm));
        }
    }
    for (auto word : utf8::split_whitespace(player)) {
        result.player_tokens.emplace_back(word);
        auto norm = normalize_word(word, rule);
        const bool hit = !norm.empty() && original_set.contains(norm);
        result.per_token_flags.push_back(hit);
        if (hit) {
            result.shared.insert(std::move(norm));
        }
    }
    return result;
}

}  // namespace shortprompt
