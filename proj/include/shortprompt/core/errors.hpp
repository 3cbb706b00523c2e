#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace shortprompt {

// Machine-readable failure codes shared by every module. The wire protocol
// sends `to_string(code)` verbatim in error frames.
enum class Errc {
    invalid_config,
    invalid_round_count,
    pool_missing_category,
    pool_parse_error,
    unknown_category,
    self_vote,
    target_has_no_image,
    already_voted,
    duplicate_submission,
    unknown_player,
    mismatched_players,
    unknown_tokenizer,
    invalid_utf8,
    empty_prompt,
    empty_nickname,
    cap_exceeded,
    session_full,
    duplicate_nickname,
    game_already_started,
    not_enough_players,
    not_creator,
    wrong_phase,
    already_submitted,
    quick_draw_budget_exhausted,
    not_all_ready,
    unknown_viewer,
    unknown_room,
    out_of_order,
    log_failure,
    malformed_message,
    unknown_type,
    throttled,
    provider_unavailable,
    parse_error,
    unsupported_version,
};

std::string_view to_string(Errc code) noexcept;
std::optional<Errc> parse_errc(std::string_view name) noexcept;

class Error : public std::runtime_error {
public:
    explicit Error(Errc code, const std::string& detail = {});

    Errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string detail_;
};

}  // namespace shortprompt
