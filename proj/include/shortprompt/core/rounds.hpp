#pragma once

#include "shortprompt/core/category.hpp"
#include "shortprompt/core/prompt_pool.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace shortprompt {

struct RoundSpec {
    int index = 0;  // 1-based; 0 marks the optional practice round
    Category category = Category::demographic_bias;
    std::string original_prompt;
    std::string original_image;  // asset key when pre-rendered

    bool operator==(const RoundSpec&) const = default;
};

/// Draws one entry per category, in a seeded random category order.
/// round_count must equal the number of categories.
std::vector<RoundSpec> select_rounds(const PromptPool& pool, int round_count, std::uint64_t seed);

/// Draws the practice round from whatever the rng yields after the plan.
RoundSpec select_practice_round(const PromptPool& pool, std::uint64_t seed);

}  // namespace shortprompt
