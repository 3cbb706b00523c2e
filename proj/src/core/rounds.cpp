#include "shortprompt/core/rounds.hpp"

#include "shortprompt/core/errors.hpp"
#include "shortprompt/core/random.hpp"

#include <array>
#include <string>

namespace shortprompt {

namespace {

void require_viable(const PromptPool& pool)
{
    const auto missing = pool.missing_categories();
    if (!missing.empty()) {
        std::string names;
        for (Category c : missing) {
            if (!names.empty()) {
                names += ",";
            }
            names += to_string(c);
        }
        throw Error(Errc::pool_missing_category, names);
    }
}

RoundSpec draw(const PromptPool& pool, Category category, int index, Rng& rng)
{
    const auto candidates = pool.entries_for(category);
    const auto& pick = *candidates[rng.below(candidates.size())];
    return RoundSpec{index, category, pick.prompt, pick.image};
}

}  // namespace

std::vector<RoundSpec> select_rounds(const PromptPool& pool, int round_count, std::uint64_t seed)
{
    if (round_count != static_cast<int>(kCategoryCount)) {
        throw Error(Errc::invalid_round_count,
                    "expected " + std::to_string(kCategoryCount) + ", got " +
                        std::to_string(round_count));
    }
    require_viable(pool);

    Rng rng(seed);
    std::array<Category, kCategoryCount> order = kAllCategories;
    rng.shuffle(order);

    std::vector<RoundSpec> plan;
    plan.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        plan.push_back(draw(pool, order[i], static_cast<int>(i) + 1, rng));
    }
    return plan;
}

RoundSpec select_practice_round(const PromptPool& pool, std::uint64_t seed)
{
    require_viable(pool);
    Rng rng(mix_seed(seed, 0x70726163u));
    const auto category = kAllCategories[rng.below(kCategoryCount)];
    return draw(pool, category, 0, rng);
}

}  // namespace shortprompt
