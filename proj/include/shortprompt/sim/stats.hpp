#pragma once

#include "shortprompt/sim/replay.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

namespace shortprompt::sim {

struct RoundImages {
    int round = 0;
    int main = 0;
    int quick_draw = 0;
    int cap = 0;  // players * 3

    int total() const noexcept { return main + quick_draw; }
};

struct SessionStats {
    int players = 0;
    std::vector<RoundImages> images;  // scored rounds
    int total_images = 0;
    bool within_caps = true;
    std::map<Category, int> category_rounds;
    std::map<int, int> token_counts;  // token count -> submissions
    std::map<PlayerId, int> penalties;
    std::map<PlayerId, std::map<PlayerId, int>> votes;  // voter -> target -> count
};

SessionStats compute_stats(const ReplayReport& report);

nlohmann::json to_json(const SessionStats& stats);
std::string to_table(const SessionStats& stats, const ReplayReport& report);

}  // namespace shortprompt::sim
