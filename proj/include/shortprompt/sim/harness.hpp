#pragma once

#include "shortprompt/core/prompt_pool.hpp"
#include "shortprompt/engine/config.hpp"
#include "shortprompt/sim/strategies.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace shortprompt::sim {

struct SimOptions {
    std::vector<BotKind> roster;
    std::uint64_t seed = 1;
    PromptPool pool = PromptPool::builtin();
    engine::SessionConfig config;  // seed is overwritten with `seed`
    std::filesystem::path log_dir = "logs";
    // Per action: wait this long for the ack and the resulting broadcasts.
    std::chrono::milliseconds action_timeout{10000};
};

struct ActionSample {
    std::string type;
    double latency_ms = 0;  // send -> every client holds the resulting state
};

struct SimResult {
    std::filesystem::path log_path;
    std::string session;
    std::string room_code;
    std::vector<ActionSample> samples;
    // Error codes the adversarial bot provoked on purpose, with counts.
    std::map<std::string, int> provoked_errors;
    std::map<std::string, int> totals;  // nickname -> final score
    std::string end_reason;
    int rounds_played = 0;
    double runtime_s = 0;
};

/// Starts an in-process gateway with the mock provider on a loopback port,
/// creates one session and plays it to the end with one WebSocket client
/// per bot. Bots act one at a time in roster order and every action waits
/// until all clients have seen its broadcast and no image is pending, so a
/// fixed seed gives the same event log.
///
/// Any unexpected error frame ends the run with that error. A roster of one
/// fails with Errc::not_enough_players at game start.
SimResult run_simulation(const SimOptions& options);

/// Nickname used for roster slot `index`.
std::string bot_nickname(BotKind kind, std::size_t index);

}  // namespace shortprompt::sim
