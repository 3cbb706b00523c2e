#pragma once

#include "shortprompt/core/errors.hpp"
#include "shortprompt/core/ids.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace shortprompt::gateway {

// Client -> server frames: {"type": ..., "seq": n, "payload": {...}}
enum class ClientType {
    draft_count_request,
    submit_prompt,
    cast_vote,
    quick_draw,
    ready,
    force_advance,
    start_game,
    snapshot_request,
};

std::string_view to_string(ClientType type) noexcept;
std::optional<ClientType> parse_client_type(std::string_view name) noexcept;

struct ClientMessage {
    ClientType type = ClientType::snapshot_request;
    std::uint64_t seq = 0;
    std::string text;     // draft-count-request, submit-prompt, quick-draw
    PlayerId target;      // cast-vote
    bool ready = true;    // ready
};

struct ParseOutcome {
    std::optional<ClientMessage> message;
    // Set on failure; ref echoes the frame's seq when one could be read.
    std::optional<std::uint64_t> ref;
    Errc code = Errc::malformed_message;
    std::string detail;
};

inline constexpr std::size_t kMaxFrameBytes = 16 * 1024;

ParseOutcome parse_client_message(std::string_view frame);

nlohmann::json client_frame(const ClientMessage& message);

// Server -> client frames: {"type", "session", "seq", "payload"}; seq counts
// frames on one connection.
nlohmann::json server_frame(std::string_view type, const std::string& session, std::uint64_t seq,
                            nlohmann::json payload);

nlohmann::json error_payload(std::optional<std::uint64_t> ref, Errc code, const std::string& detail = {});

/// Hex FNV-1a of the exact text, echoed in count replies so clients can
/// match a reply to the draft it was computed for.
std::string text_hash(std::string_view text);

}  // namespace shortprompt::gateway
