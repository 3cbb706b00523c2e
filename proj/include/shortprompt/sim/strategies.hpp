#pragma once

#include "shortprompt/core/ids.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shortprompt::sim {

enum class BotKind {
    gambler,       // last one or two content words of the original
    verbose,       // the whole original plus a detail suffix
    contrastive,   // the original with its longest word swapped
    random_voter,  // writes the original verbatim, votes at random
    first_voter,   // writes the original verbatim, votes for the first option
    adversarial,   // gambler prompts, plus deliberate protocol violations
};

std::string_view to_string(BotKind kind) noexcept;
std::optional<BotKind> parse_bot_kind(std::string_view name) noexcept;
/// "gambler,verbose,first-voter". Throws Errc::invalid_config.
std::vector<BotKind> parse_roster(std::string_view list);

/// Main-turn prompt for one round.
std::string choose_prompt(BotKind kind, std::string_view original, int round, std::uint64_t seed);

/// Picks a vote. `distance[i]` is how far option i's image is from the
/// original (smaller is closer); empty when the bot did not look.
PlayerId choose_vote(BotKind kind, const std::vector<PlayerId>& options,
                     const std::vector<double>& distance, int round, std::uint64_t seed);

/// Whether this kind compares images before voting.
bool inspects_images(BotKind kind) noexcept;

/// Quick Draw prompts this kind tries during Reveal (may exceed the budget).
std::vector<std::string> quick_draw_prompts(BotKind kind, std::string_view original, int round,
                                            std::uint64_t seed);

}  // namespace shortprompt::sim
