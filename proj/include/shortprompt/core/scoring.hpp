#pragma once

#include "shortprompt/core/ids.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shortprompt {

struct PromptSubmission {
    PlayerId player;
    std::string text;
    int token_count = 0;
    std::int64_t submitted_at_ms = 0;  // monotonic, relative to session start
    bool auto_submitted = false;

    bool operator==(const PromptSubmission&) const = default;
};

struct Vote {
    PlayerId voter;
    PlayerId target;

    bool operator==(const Vote&) const = default;
};

// `none` marks a player who did not submit this round.
enum class ImageOutcome { success, failed, none };

std::string_view to_string(ImageOutcome outcome) noexcept;

struct ScoreDelta {
    PlayerId player;
    int votes_received = 0;
    int penalty = 0;  // 0 or 1
    int delta = 0;    // votes_received - penalty

    bool operator==(const ScoreDelta&) const = default;
};

using RoundScores = std::map<PlayerId, ScoreDelta>;

/// Scores one round: one point per vote received, minus one for every
/// submitter at the maximum token count unless all submitters tie.
///
/// The player set is the key set of `outcomes`. Throws on self-votes,
/// votes for a player without a successful image, double votes, unknown
/// players, or submissions that disagree with `outcomes`.
RoundScores compute_round_scores(std::span<const PromptSubmission> submissions,
                                 std::span<const Vote> votes,
                                 const std::map<PlayerId, ImageOutcome>& outcomes);

struct Scoreboard {
    std::vector<std::pair<int, RoundScores>> per_round;  // (round index, deltas)
    std::map<PlayerId, int> totals;

    bool operator==(const Scoreboard&) const = default;
};

/// Rounds are numbered 1..n in list order. Every map must cover the same players.
Scoreboard accumulate_scoreboard(std::span<const RoundScores> rounds);

}  // namespace shortprompt
