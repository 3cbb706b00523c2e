#pragma once

#include "shortprompt/core/ids.hpp"
#include "shortprompt/core/prompt_pool.hpp"
#include "shortprompt/core/rounds.hpp"
#include "shortprompt/core/scoring.hpp"
#include "shortprompt/engine/config.hpp"
#include "shortprompt/engine/events.hpp"
#include "shortprompt/engine/phase.hpp"
#include "shortprompt/engine/view.hpp"
#include "shortprompt/imaging/generation.hpp"
#include "shortprompt/tokenizer/tokenizer.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace shortprompt::engine {

struct ArmTimer {
    std::uint64_t phase_instance = 0;
    std::int64_t deadline_ms = 0;
};

struct IssueGeneration {
    imaging::GenerationRequest request;
};

using Effect = std::variant<GameEvent, ArmTimer, IssueGeneration>;

struct PlayerState {
    PlayerId id;
    std::string nickname;
    bool connected = true;
    bool ready = false;
    bool creator = false;
};

inline constexpr int kQuickDrawBudget = 2;

// Authoritative state machine for one room. Not thread-safe: the owner feeds
// it every input from a single serialized loop, passing the session-relative
// monotonic time, and drains the resulting effects after each call.
//
// Every call either throws shortprompt::Error and leaves the state untouched,
// or succeeds and bumps version() if anything changed.
class Session {
public:
    Session(std::string id, std::string room_code, SessionConfig config,
            std::vector<RoundSpec> plan, std::optional<RoundSpec> practice,
            std::shared_ptr<const tokenizer::Tokenizer> tokenizer, std::int64_t now_ms);

    /// Draws the plan (or takes config.custom_plan) and validates the config.
    static std::unique_ptr<Session> create(std::string id, std::string room_code,
                                           const SessionConfig& config, const PromptPool& pool,
                                           std::shared_ptr<const tokenizer::Tokenizer> tokenizer,
                                           std::int64_t now_ms);

    PlayerId join(std::string_view nickname, bool creator, std::int64_t now_ms);
    void start_game(PlayerId initiator, std::int64_t now_ms);

    /// Latest unsent text; auto-submitted if the prompt timer runs out.
    void update_draft(PlayerId player, std::string_view text);
    PromptSubmission submit_prompt(PlayerId player, std::string_view text, std::int64_t now_ms);
    /// Returns false for unknown or already-resolved request ids.
    bool on_generation_resolved(const imaging::ImageRecord& record, std::int64_t now_ms);
    void cast_vote(PlayerId voter, PlayerId target, std::int64_t now_ms);
    /// Returns the attempts left after this one.
    int request_quick_draw(PlayerId player, std::string_view text, std::int64_t now_ms);
    void set_ready(PlayerId player, bool ready, std::int64_t now_ms);
    /// Reveal: advances when everyone connected is ready, or unconditionally
    /// for the creator. Practice round: the creator may also end Prompting
    /// and Voting, which have no timers there.
    void force_advance(PlayerId initiator, std::int64_t now_ms);
    /// No-op unless `phase_instance` is the current phase's.
    void on_timer_expiry(std::uint64_t phase_instance, std::int64_t now_ms);
    void set_connected(PlayerId player, bool connected, std::int64_t now_ms);
    /// Ends the session early with session-ended(reason).
    void close(std::string_view reason, std::int64_t now_ms);

    /// Throws Errc::unknown_viewer.
    SessionView snapshot(PlayerId viewer, std::int64_t now_ms) const;

    std::vector<Effect> drain_effects();

    /// First line of the event log.
    nlohmann::json log_header() const;

    const std::string& id() const noexcept { return id_; }
    const std::string& room_code() const noexcept { return room_code_; }
    const SessionConfig& config() const noexcept { return config_; }
    const std::vector<RoundSpec>& plan() const noexcept { return plan_; }
    const Phase& phase() const noexcept { return phase_; }
    const std::vector<PlayerState>& players() const noexcept { return players_; }
    std::optional<PlayerId> creator() const noexcept;
    std::optional<PlayerId> find_player(std::string_view nickname) const;
    std::uint64_t version() const noexcept { return version_; }
    std::uint64_t last_seq() const noexcept { return seq_; }
    int pending_generations() const noexcept { return static_cast<int>(pending_.size()); }
    int quick_draw_used(PlayerId player, int round) const;
    const Scoreboard& scoreboard() const noexcept { return scoreboard_; }

private:
    enum class SlotStatus { pending, success, failed };

    struct ImageSlot {
        std::string request_id;
        SlotStatus status = SlotStatus::pending;
        std::string asset;
    };

    struct QuickDraw {
        PlayerId author;
        std::string prompt;
        ImageSlot image;
    };

    struct RoundState {
        RoundSpec spec;
        bool practice = false;
        bool revealed = false;
        ImageSlot original;
        std::map<PlayerId, std::string> drafts;
        std::map<PlayerId, PromptSubmission> submissions;
        std::set<PlayerId> no_submission;
        std::map<PlayerId, ImageSlot> mains;
        std::map<PlayerId, std::vector<PlayerId>> options;
        std::map<PlayerId, PlayerId> votes;
        std::vector<Vote> vote_order;
        std::set<PlayerId> abstained;
        std::map<PlayerId, int> quick_used;
        std::vector<QuickDraw> quick_draws;
        std::optional<RoundScores> scores;
    };

    struct Pending {
        imaging::GenerationKind kind;
        std::size_t round_slot;
        std::optional<PlayerId> player;
        std::size_t quick_index = 0;
        std::optional<imaging::ImageRecord> result;
    };

    PlayerState& player(PlayerId id);
    const PlayerState* find(PlayerId id) const noexcept;
    RoundState& current();
    const RoundState* current_or_null() const noexcept;
    bool in_practice() const noexcept;
    bool is_creator(PlayerId id) const noexcept;
    bool any_connected() const noexcept;

    void emit(EventKind kind, nlohmann::json payload, std::int64_t now_ms,
              nlohmann::json timing = nlohmann::json::object());
    std::string next_request_id();
    void issue(imaging::GenerationKind kind, std::string prompt, std::optional<PlayerId> player,
               std::size_t quick_index, std::int64_t now_ms);
    void release(const std::string& request_id, const imaging::ImageRecord& record,
                 std::int64_t now_ms);

    void enter_phase(PhaseKind kind, std::int64_t now_ms, nlohmann::json extra = {});
    void enter_round(std::size_t slot, std::int64_t now_ms);
    void record_submission(PlayerId player, std::string text, bool automatic, std::int64_t now_ms);
    void maybe_finish_prompting(std::int64_t now_ms);
    void finish_prompting(std::int64_t now_ms);
    void maybe_finish_generating(std::int64_t now_ms);
    void enter_voting(std::int64_t now_ms);
    void maybe_finish_voting(std::int64_t now_ms);
    void finish_voting(std::int64_t now_ms);
    void enter_reveal(std::int64_t now_ms, nlohmann::json extra);
    void maybe_advance_reveal(std::int64_t now_ms);
    void advance(std::int64_t now_ms);

    RoundView round_view(const RoundState& round, PlayerId viewer) const;

    std::string id_;
    std::string room_code_;
    SessionConfig config_;
    std::vector<RoundSpec> plan_;
    std::optional<RoundSpec> practice_;
    std::shared_ptr<const tokenizer::Tokenizer> tokenizer_;

    std::vector<PlayerState> players_;
    Phase phase_;
    std::vector<RoundState> rounds_;  // entered rounds, in play order
    std::vector<RoundScores> scored_;
    Scoreboard scoreboard_;

    std::uint64_t seq_ = 0;
    std::uint64_t version_ = 0;
    std::uint64_t request_counter_ = 0;
    // Completions are released strictly in issue order so that the log does
    // not depend on which provider call happens to finish first.
    std::deque<std::string> issue_order_;
    std::map<std::string, Pending> pending_;
    std::vector<Effect> effects_;
};

}  // namespace shortprompt::engine
