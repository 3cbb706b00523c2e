#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace shortprompt {

enum class Normalization {
    casefold_strip,  // lowercase, then drop leading/trailing punctuation
    exact,
};

struct OverlapResult {
    std::vector<std::string> original_tokens;
    std::vector<std::string> player_tokens;
    std::set<std::string> shared;  // normalized forms
    std::vector<bool> per_token_flags;  // one per player token
};

std::string normalize_word(std::string_view word, Normalization rule);

/// Word-level overlap between an original prompt and a player prompt.
/// Words are whitespace-delimited regardless of the scoring tokenizer.
OverlapResult compute_overlap(std::string_view original, std::string_view player,
                              Normalization rule = Normalization::casefold_strip);

}  // namespace shortprompt
