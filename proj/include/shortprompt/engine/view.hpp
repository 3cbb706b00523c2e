#pragma once

#include "shortprompt/core/category.hpp"
#include "shortprompt/core/ids.hpp"
#include "shortprompt/core/scoring.hpp"
#include "shortprompt/engine/phase.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace shortprompt::engine {

struct PlayerView {
    PlayerId id;
    std::string nickname;
    bool connected = true;
    bool ready = false;
    bool creator = false;
    int total = 0;

    bool operator==(const PlayerView&) const = default;
};

// One player's entry for the current round as far as the viewer may see it.
struct CardView {
    PlayerId player;
    std::string status;  // pending | success | failed | none
    std::string asset;
    std::optional<std::string> prompt;
    std::optional<int> token_count;
    bool auto_submitted = false;
    std::vector<bool> overlap;  // per whitespace word, against the original prompt
    std::optional<ScoreDelta> score;

    bool operator==(const CardView&) const = default;
};

struct QuickDrawView {
    PlayerId author;
    std::string prompt;
    std::string status;  // pending | success | failed
    std::string asset;

    bool operator==(const QuickDrawView&) const = default;
};

struct RoundView {
    int index = 0;
    bool practice = false;
    Category category = Category::demographic_bias;
    std::string original_status;  // pending | success | failed
    std::string original_asset;
    std::optional<std::string> original_prompt;
    std::vector<PlayerId> submitted;
    std::vector<CardView> cards;
    std::vector<PlayerId> vote_options;
    std::optional<PlayerId> own_vote;
    std::vector<PlayerId> voted;
    std::vector<Vote> votes;
    std::vector<PlayerId> abstained;
    std::vector<PlayerId> no_submission;
    int quick_draw_remaining = 0;
    std::vector<QuickDrawView> quick_draws;

    bool operator==(const RoundView&) const = default;
};

struct RoundSummaryEntry {
    PlayerId player;
    std::optional<std::string> prompt;
    int token_count = 0;
    ScoreDelta score;

    bool operator==(const RoundSummaryEntry&) const = default;
};

struct RoundSummary {
    int index = 0;
    Category category = Category::demographic_bias;
    std::string original_prompt;
    std::vector<RoundSummaryEntry> entries;

    bool operator==(const RoundSummary&) const = default;
};

struct SessionView {
    std::string session;
    std::string room_code;
    PlayerId viewer;
    PhaseKind phase = PhaseKind::lobby;
    int round = 0;
    int round_count = 0;
    int prompt_timer_s = 0;
    int vote_timer_s = 0;
    std::optional<std::int64_t> deadline_ms;
    std::optional<std::int64_t> remaining_ms;
    std::uint64_t event_seq = 0;
    std::uint64_t version = 0;
    int pending_generations = 0;
    std::vector<PlayerView> players;
    std::optional<RoundView> current;
    std::vector<RoundSummary> history;  // scored rounds, oldest first

    bool operator==(const SessionView&) const = default;
};

nlohmann::json to_json(const SessionView& view);
SessionView session_view_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ScoreDelta& d);
ScoreDelta score_delta_from_json(const nlohmann::json& j);

}  // namespace shortprompt::engine
