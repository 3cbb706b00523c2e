#include "shortprompt/core/errors.hpp"

namespace shortprompt {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::invalid_config: return "invalid-config";
    case Errc::invalid_round_count: return "invalid-round-count";
    case Errc::pool_missing_category: return "pool-missing-category";
    case Errc::pool_parse_error: return "pool-parse-error";
    case Errc::unknown_category: return "unknown-category";
    case Errc::self_vote: return "self-vote";
    case Errc::target_has_no_image: return "target-has-no-image";
    case Errc::already_voted: return "already-voted";
    case Errc::duplicate_submission: return "duplicate-submission";
    case Errc::unknown_player: return "unknown-player";
    case Errc::mismatched_players: return "mismatched-players";
    case Errc::unknown_tokenizer: return "unknown-tokenizer";
    case Errc::invalid_utf8: return "invalid-utf8";
    case Errc::empty_prompt: return "empty-prompt";
    case Errc::empty_nickname: return "empty-nickname";
    case Errc::cap_exceeded: return "cap-exceeded";
    case Errc::session_full: return "session-full";
    case Errc::duplicate_nickname: return "duplicate-nickname";
    case Errc::game_already_started: return "game-already-started";
    case Errc::not_enough_players: return "not-enough-players";
    case Errc::not_creator: return "not-creator";
    case Errc::wrong_phase: return "wrong-phase";
    case Errc::already_submitted: return "already-submitted";
    case Errc::quick_draw_budget_exhausted: return "quick-draw-budget-exhausted";
    case Errc::not_all_ready: return "not-all-ready";
    case Errc::unknown_viewer: return "unknown-viewer";
    case Errc::unknown_room: return "unknown-room";
    case Errc::out_of_order: return "out-of-order";
    case Errc::log_failure: return "log-failure";
    case Errc::malformed_message: return "malformed-message";
    case Errc::unknown_type: return "unknown-type";
    case Errc::throttled: return "throttled";
    case Errc::provider_unavailable: return "provider-unavailable";
    case Errc::parse_error: return "parse-error";
    case Errc::unsupported_version: return "unsupported-version";
    }
    return "unknown";
}

namespace {

std::string format_what(Errc code, const std::string& detail)
{
    std::string what(to_string(code));
    if (!detail.empty()) {
        what += ": ";
        what += detail;
    }
    return what;
}

}  // namespace

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(format_what(code, detail)), code_(code), detail_(detail)
{
}

std::optional<Errc> parse_errc(std::string_view name) noexcept
{
    for (int i = 0; i <= static_cast<int>(Errc::unsupported_version); ++i) {
        if (to_string(static_cast<Errc>(i)) == name) return static_cast<Errc>(i);
    }
    return std::nullopt;
}

}  // namespace shortprompt
