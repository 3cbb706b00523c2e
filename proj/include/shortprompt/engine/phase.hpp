#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace shortprompt::engine {

enum class PhaseKind { lobby, prompting, generating, voting, reveal, scoreboard, closed };

std::string_view to_string(PhaseKind kind) noexcept;
std::optional<PhaseKind> parse_phase(std::string_view name) noexcept;

struct Phase {
    PhaseKind kind = PhaseKind::lobby;
    int round = 0;
    std::optional<std::int64_t> deadline_ms;  // monotonic, session-relative
    // Bumped on every phase entry; timers carry it so stale expiries are ignored.
    std::uint64_t instance = 0;
};

}  // namespace shortprompt::engine
