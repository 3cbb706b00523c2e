#include "shortprompt/core/scoring.hpp"

#include "shortprompt/core/errors.hpp"

#include <algorithm>
#include <set>

namespace shortprompt {

std::string_view to_string(ImageOutcome outcome) noexcept
{
    switch (outcome) {
    case ImageOutcome::success: return "success";
    case ImageOutcome::failed: return "failed";
    case ImageOutcome::none: return "none";
    }
    return "none";
}

RoundScores compute_round_scores(std::span<const PromptSubmission> submissions,
                                 std::span<const Vote> votes,
                                 const std::map<PlayerId, ImageOutcome>& outcomes)
{
    RoundScores scores;
    for (const auto& [player, outcome] : outcomes) {
        scores[player] = ScoreDelta{player, 0, 0, 0};
    }

    std::map<PlayerId, int> lengths;
    for (const auto& s : submissions) {
        auto it = outcomes.find(s.player);
        if (it == outcomes.end()) {
            throw Error(Errc::unknown_player, "submission from " + to_string(s.player));
        }
        if (it->second == ImageOutcome::none) {
            throw Error(Errc::mismatched_players,
                        to_string(s.player) + " submitted but is marked no-submission");
        }
        if (!lengths.emplace(s.player, s.token_count).second) {
            throw Error(Errc::duplicate_submission, to_string(s.player));
        }
    }

    std::set<PlayerId> voters;
    for (const auto& v : votes) {
        if (!outcomes.contains(v.voter)) {
            throw Error(Errc::unknown_player, "voter " + to_string(v.voter));
        }
        if (v.voter == v.target) {
            throw Error(Errc::self_vote, to_string(v.voter));
        }
        auto target = outcomes.find(v.target);
        if (target == outcomes.end() || target->second != ImageOutcome::success) {
            throw Error(Errc::target_has_no_image, to_string(v.target));
        }
        if (!voters.insert(v.voter).second) {
            throw Error(Errc::already_voted, to_string(v.voter));
        }
        ++scores[v.target].votes_received;
    }

    if (!lengths.empty()) {
        const auto [lo, hi] = std::minmax_element(
            lengths.begin(), lengths.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
        if (lo->second != hi->second) {
            for (const auto& [player, count] : lengths) {
                if (count == hi->second) {
                    scores[player].penalty = 1;
                }
            }
        }
    }

    for (auto& [player, d] : scores) {
        d.delta = d.votes_received - d.penalty;
    }
    return scores;
}

Scoreboard accumulate_scoreboard(std::span<const RoundScores> rounds)
{
    Scoreboard board;
    if (rounds.empty()) {
        return board;
    }
    for (const auto& [player, d] : rounds.front()) {
        board.totals[player] = 0;
    }
    int index = 0;
    for (const auto& round : rounds) {
        ++index;
        if (round.size() != board.totals.size() ||
            !std::equal(round.begin(), round.end(), board.totals.begin(),
                        [](const auto& a, const auto& b) { return a.first == b.first; })) {
            throw Error(Errc::mismatched_players, "round " + std::to_string(index));
        }
        for (const auto& [player, d] : round) {
            board.totals[player] += d.delta;
        }
        board.per_round.emplace_back(index, round);
    }
    return board;
}

}  // namespace shortprompt
