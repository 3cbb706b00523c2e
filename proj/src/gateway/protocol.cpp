#include "shortprompt/gateway/protocol.hpp"

#include "shortprompt/core/random.hpp"

#include <array>
#include <cstdio>
#include <utility>

namespace shortprompt::gateway {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<ClientType, std::string_view>, 8> kTypes{{
    {ClientType::draft_count_request, "draft-count-request"},
    {ClientType::submit_prompt, "submit-prompt"},
    {ClientType::cast_vote, "cast-vote"},
    {ClientType::quick_draw, "quick-draw"},
    {ClientType::ready, "ready"},
    {ClientType::force_advance, "force-advance"},
    {ClientType::start_game, "start-game"},
    {ClientType::snapshot_request, "snapshot-request"},
}};

ParseOutcome fail(std::optional<std::uint64_t> ref, Errc code, std::string detail)
{
    ParseOutcome out;
    out.ref = ref;
    out.code = code;
    out.detail = std::move(detail);
    return out;
}

}  // namespace

std::string_view to_string(ClientType type) noexcept
{
    for (const auto& [t, name] : kTypes) {
        if (t == type) return name;
    }
    return "unknown";
}

std::optional<ClientType> parse_client_type(std::string_view name) noexcept
{
    for (const auto& [t, n] : kTypes) {
        if (n == name) return t;
    }
    return std::nullopt;
}

ParseOutcome parse_client_message(std::string_view frame)
{
    if (frame.size() > kMaxFrameBytes) {
        return fail(std::nullopt, Errc::malformed_message, "frame too large");
    }
    json j = json::parse(frame, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        return fail(std::nullopt, Errc::malformed_message, "frame is not a JSON object");
    }
    std::optional<std::uint64_t> ref;
    if (auto it = j.find("seq"); it != j.end() && it->is_number_unsigned()) {
        ref = it->get<std::uint64_t>();
    }
    if (!ref) {
        return fail(std::nullopt, Errc::malformed_message, "seq must be a non-negative integer");
    }
    auto type_it = j.find("type");
    if (type_it == j.end() || !type_it->is_string()) {
        return fail(ref, Errc::malformed_message, "type must be a string");
    }
    const auto type = parse_client_type(type_it->get<std::string>());
    if (!type) {
        return fail(ref, Errc::unknown_type, type_it->get<std::string>());
    }
    json payload = j.value("payload", json::object());
    if (!payload.is_object()) {
        return fail(ref, Errc::malformed_message, "payload must be an object");
    }

    ClientMessage m;
    m.type = *type;
    m.seq = *ref;
    switch (*type) {
    case ClientType::draft_count_request:
    case ClientType::submit_prompt:
    case ClientType::quick_draw: {
        auto t = payload.find("text");
        if (t == payload.end() || !t->is_string()) {
            return fail(ref, Errc::malformed_message, "payload.text must be a string");
        }
        m.text = t->get<std::string>();
        break;
    }
    case ClientType::cast_vote: {
        auto t = payload.find("target");
        if (t == payload.end() || !t->is_number_unsigned() || t->get<std::uint64_t>() > 0xFFFFFFFFu) {
            return fail(ref, Errc::malformed_message, "payload.target must be a player id");
        }
        m.target = PlayerId{t->get<std::uint32_t>()};
        break;
    }
    case ClientType::ready: {
        auto r = payload.find("ready");
        if (r != payload.end() && !r->is_boolean()) {
            return fail(ref, Errc::malformed_message, "payload.ready must be a boolean");
        }
        m.ready = r == payload.end() || r->get<bool>();
        break;
    }
    default: break;
    }
    ParseOutcome out;
    out.message = std::move(m);
    return out;
}

json client_frame(const ClientMessage& m)
{
    json payload = json::object();
    switch (m.type) {
    case ClientType::draft_count_request:
    case ClientType::submit_prompt:
    case ClientType::quick_draw: payload["text"] = m.text; break;
    case ClientType::cast_vote: payload["target"] = m.target.value; break;
    case ClientType::ready: payload["ready"] = m.ready; break;
    default: break;
    }
    return {{"type", to_string(m.type)}, {"seq", m.seq}, {"payload", payload}};
}

json server_frame(std::string_view type, const std::string& session, std::uint64_t seq, json payload)
{
    return {{"type", type}, {"session", session}, {"seq", seq}, {"payload", std::move(payload)}};
}

json error_payload(std::optional<std::uint64_t> ref, Errc code, const std::string& detail)
{
    return {{"ref", ref ? json(*ref) : json(nullptr)}, {"code", to_string(code)}, {"detail", detail}};
}

std::string text_hash(std::string_view text)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
    return buf;
}

}  // namespace shortprompt::gateway
