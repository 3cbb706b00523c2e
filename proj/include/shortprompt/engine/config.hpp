#pragma once

#include "shortprompt/core/rounds.hpp"
#include "shortprompt/tokenizer/tokenizer.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shortprompt::engine {

struct SessionConfig {
    int round_count = 6;
    int prompt_timer_s = 70;
    int vote_timer_s = 20;
    int max_players = 8;
    tokenizer::TokenizerSpec tokenizer;
    std::string provider_id = "mock";
    std::optional<std::uint64_t> provider_seed;  // falls back to `seed`
    std::uint64_t seed = 0;
    bool practice_round = false;
    // When non-empty, used instead of drawing from the pool; round_count
    // must then equal its size.
    std::vector<RoundSpec> custom_plan;

    std::uint64_t effective_provider_seed() const noexcept { return provider_seed.value_or(seed); }

    bool operator==(const SessionConfig&) const = default;
};

inline constexpr int kMaxPlayersLimit = 64;

/// Throws Errc::invalid_config describing the first violated constraint.
void validate(const SessionConfig& config);

/// Reads the fields present in `body` over `defaults`, then validates.
/// Unknown keys are rejected. Throws Errc::invalid_config.
SessionConfig parse_session_config(const nlohmann::json& body, const SessionConfig& defaults = {});

nlohmann::json to_json(const SessionConfig& config);

nlohmann::json to_json(const RoundSpec& round);
RoundSpec round_spec_from_json(const nlohmann::json& j);

}  // namespace shortprompt::engine
