#pragma once

// Brute-force scorer kept independent of shortprompt::compute_round_scores:
// plain loops over flat vectors, no shared helpers.

#include "shortprompt/core/scoring.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace sptest {

struct RefCase {
    std::vector<shortprompt::PromptSubmission> submissions;
    std::vector<shortprompt::Vote> votes;
    std::map<shortprompt::PlayerId, shortprompt::ImageOutcome> outcomes;
};

inline std::map<shortprompt::PlayerId, int> reference_deltas(const RefCase& c)
{
    std::map<shortprompt::PlayerId, int> out;
    int longest = -1;
    int shortest = 1 << 30;
    for (const auto& s : c.submissions) {
        if (s.token_count > longest) longest = s.token_count;
        if (s.token_count < shortest) shortest = s.token_count;
    }
    for (const auto& [player, outcome] : c.outcomes) {
        int points = 0;
        for (const auto& v : c.votes) {
            if (v.target == player) points += 1;
        }
        for (const auto& s : c.submissions) {
            if (s.player == player && longest != shortest && s.token_count == longest) {
                points -= 1;
            }
        }
        out[player] = points;
    }
    return out;
}

// Random valid round: 2-8 players, some without submissions, some failed
// images, each voter votes at most once for another player's successful image.
inline RefCase random_case(std::mt19937_64& gen)
{
    using namespace shortprompt;
    RefCase c;
    const int players = 2 + static_cast<int>(gen() % 7);
    for (int i = 1; i <= players; ++i) {
        const PlayerId id{static_cast<std::uint32_t>(i)};
        const auto roll = gen() % 10;
        if (roll < 2) {
            c.outcomes[id] = ImageOutcome::none;
            continue;
        }
        c.outcomes[id] = roll < 4 ? ImageOutcome::failed : ImageOutcome::success;
        // Narrow range so ties at the maximum are common.
        const int tokens = 1 + static_cast<int>(gen() % 4);
        c.submissions.push_back({id, "t", tokens, 0, false});
    }
    for (const auto& [voter, _] : c.outcomes) {
        if (gen() % 5 == 0) continue;  // abstain
        std::vector<PlayerId> options;
        for (const auto& [target, outcome] : c.outcomes) {
            if (target != voter && outcome == ImageOutcome::success) options.push_back(target);
        }
        if (options.empty()) continue;
        c.votes.push_back({voter, options[gen() % options.size()]});
    }
    return c;
}

}  // namespace sptest
