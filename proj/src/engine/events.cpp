#include "shortprompt/engine/events.hpp"

#include "shortprompt/core/errors.hpp"

#include <array>
#include <utility>

namespace shortprompt::engine {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 13> kNames{{
    {EventKind::session_created, "session-created"},
    {EventKind::player_joined, "player-joined"},
    {EventKind::game_started, "game-started"},
    {EventKind::round_started, "round-started"},
    {EventKind::prompt_submitted, "prompt-submitted"},
    {EventKind::generation_issued, "generation-issued"},
    {EventKind::generation_resolved, "generation-resolved"},
    {EventKind::vote_cast, "vote-cast"},
    {EventKind::phase_changed, "phase-changed"},
    {EventKind::quick_draw_issued, "quick-draw-issued"},
    {EventKind::quick_draw_resolved, "quick-draw-resolved"},
    {EventKind::round_scored, "round-scored"},
    {EventKind::session_ended, "session-ended"},
}};

}  // namespace

std::string_view to_string(EventKind kind) noexcept
{
    for (const auto& [k, name] : kNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view name) noexcept
{
    for (const auto& [k, n] : kNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

json to_json(const GameEvent& e, const std::optional<std::string>& wall)
{
    json at = e.timing.is_object() ? e.timing : json::object();
    at["mono_ms"] = e.mono_ms;
    if (wall) {
        at["wall"] = *wall;
    }
    return json{{"seq", e.seq}, {"kind", to_string(e.kind)}, {"payload", e.payload}, {"at", at}};
}

GameEvent event_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("seq") || !j["seq"].is_number_unsigned() ||
        !j.contains("kind") || !j["kind"].is_string() || !j.contains("payload") ||
        !j["payload"].is_object()) {
        throw Error(Errc::parse_error, "event needs seq, kind and payload");
    }
    GameEvent e;
    e.seq = j["seq"].get<std::uint64_t>();
    const auto kind = parse_event_kind(j["kind"].get<std::string>());
    if (!kind) {
        throw Error(Errc::parse_error, "unknown event kind " + j["kind"].get<std::string>());
    }
    e.kind = *kind;
    e.payload = j["payload"];
    if (auto it = j.find("at"); it != j.end() && it->is_object()) {
        e.timing = *it;
        if (auto m = it->find("mono_ms"); m != it->end() && m->is_number_integer()) {
            e.mono_ms = m->get<std::int64_t>();
        }
        e.timing.erase("mono_ms");
        e.timing.erase("wall");
    }
    return e;
}

}  // namespace shortprompt::engine
