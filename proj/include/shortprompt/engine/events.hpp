#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace shortprompt::engine {

enum class EventKind {
    session_created,
    player_joined,
    game_started,
    round_started,
    prompt_submitted,
    generation_issued,
    generation_resolved,
    vote_cast,
    phase_changed,
    quick_draw_issued,
    quick_draw_resolved,
    round_scored,
    session_ended,
};

std::string_view to_string(EventKind kind) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view name) noexcept;

// One append-only log entry. Everything derived from a clock lives in
// `timing` (and the wall-clock stamp added at persistence) so that logs can
// be compared across runs with the "at" object removed.
struct GameEvent {
    std::uint64_t seq = 0;
    std::int64_t mono_ms = 0;
    EventKind kind = EventKind::session_created;
    nlohmann::json payload = nlohmann::json::object();
    nlohmann::json timing = nlohmann::json::object();
};

/// {"seq", "kind", "payload", "at": {"mono_ms", "wall"?, ...timing}}
nlohmann::json to_json(const GameEvent& event, const std::optional<std::string>& wall = {});

/// Inverse of to_json; throws Errc::parse_error on malformed records.
GameEvent event_from_json(const nlohmann::json& j);

}  // namespace shortprompt::engine
