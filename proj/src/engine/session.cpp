#include "shortprompt/engine/session.hpp"

#include "shortprompt/core/errors.hpp"
#include "shortprompt/core/overlap.hpp"
#include "shortprompt/core/utf8.hpp"

#include <algorithm>

namespace shortprompt::engine {

using nlohmann::json;
using imaging::GenerationKind;

namespace {

json ids(const std::vector<PlayerId>& v)
{
    json out = json::array();
    for (auto id : v) out.push_back(id.value);
    return out;
}

json ids(const std::set<PlayerId>& v)
{
    return ids(std::vector<PlayerId>(v.begin(), v.end()));
}

std::string_view slot_name(bool pending, bool success)
{
    if (pending) return "pending";
    return success ? "success" : "failed";
}

std::string checked_text(std::string_view text)
{
    if (!utf8::is_valid(text)) {
        throw Error(Errc::invalid_utf8, "prompt is not valid UTF-8");
    }
    auto trimmed = utf8::trim(text);
    if (trimmed.empty()) {
        throw Error(Errc::empty_prompt);
    }
    return std::string(trimmed);
}

}  // namespace

Session::Session(std::string id, std::string room_code, SessionConfig config,
                 std::vector<RoundSpec> plan, std::optional<RoundSpec> practice,
                 std::shared_ptr<const tokenizer::Tokenizer> tokenizer, std::int64_t now_ms)
    : id_(std::move(id)),
      room_code_(std::move(room_code)),
      config_(std::move(config)),
      plan_(std::move(plan)),
      practice_(std::move(practice)),
      tokenizer_(std::move(tokenizer))
{
    validate(config_);
    if (!tokenizer_) {
        throw Error(Errc::unknown_tokenizer, "no tokenizer supplied");
    }
    if (static_cast<int>(plan_.size()) != config_.round_count) {
        throw Error(Errc::invalid_round_count, "plan size differs from round_count");
    }
    if (practice_) {
        practice_->index = 0;
    }
    emit(EventKind::session_created,
         {{"session", id_},
          {"room_code", room_code_},
          {"round_count", config_.round_count},
          {"practice", practice_.has_value()}},
         now_ms);
    version_ = 1;
}

std::unique_ptr<Session> Session::create(std::string id, std::string room_code,
                                         const SessionConfig& config, const PromptPool& pool,
                                         std::shared_ptr<const tokenizer::Tokenizer> tokenizer,
                                         std::int64_t now_ms)
{
    validate(config);
    if (tokenizer && tokenizer->spec().id != config.tokenizer.id) {
        throw Error(Errc::invalid_config, "tokenizer does not match config");
    }
    auto plan = config.custom_plan.empty() ? select_rounds(pool, config.round_count, config.seed)
                                           : config.custom_plan;
    std::optional<RoundSpec> practice;
    if (config.practice_round) {
        practice = select_practice_round(pool, config.seed);
    }
    return std::make_unique<Session>(std::move(id), std::move(room_code), config, std::move(plan),
                                     std::move(practice), std::move(tokenizer), now_ms);
}

// ---------------------------------------------------------------- lookups

const PlayerState* Session::find(PlayerId id) const noexcept
{
    if (id.value == 0 || id.value > players_.size()) return nullptr;
    return &players_[id.value - 1];
}

PlayerState& Session::player(PlayerId id)
{
    if (!find(id)) {
        throw Error(Errc::unknown_player, to_string(id));
    }
    return players_[id.value - 1];
}

std::optional<PlayerId> Session::creator() const noexcept
{
    for (const auto& p : players_) {
        if (p.creator) return p.id;
    }
    return std::nullopt;
}

std::optional<PlayerId> Session::find_player(std::string_view nickname) const
{
    const auto key = utf8::fold_case(utf8::trim(nickname));
    for (const auto& p : players_) {
        if (utf8::fold_case(p.nickname) == key) return p.id;
    }
    return std::nullopt;
}

bool Session::is_creator(PlayerId id) const noexcept
{
    const auto* p = find(id);
    return p && p->creator;
}

bool Session::any_connected() const noexcept
{
    return std::any_of(players_.begin(), players_.end(), [](const auto& p) { return p.connected; });
}

Session::RoundState& Session::current()
{
    return rounds_.back();
}

const Session::RoundState* Session::current_or_null() const noexcept
{
    return rounds_.empty() ? nullptr : &rounds_.back();
}

bool Session::in_practice() const noexcept
{
    return !rounds_.empty() && rounds_.back().practice;
}

int Session::quick_draw_used(PlayerId player, int round) const
{
    for (const auto& r : rounds_) {
        if (r.spec.index == round) {
            auto it = r.quick_used.find(player);
            return it == r.quick_used.end() ? 0 : it->second;
        }
    }
    return 0;
}

// ---------------------------------------------------------------- effects

void Session::emit(EventKind kind, json payload, std::int64_t now_ms, json timing)
{
    GameEvent e;
    e.seq = ++seq_;
    e.mono_ms = now_ms;
    e.kind = kind;
    e.payload = std::move(payload);
    e.timing = std::move(timing);
    effects_.emplace_back(std::move(e));
}

std::vector<Effect> Session::drain_effects()
{
    std::vector<Effect> out;
    out.swap(effects_);
    return out;
}

std::string Session::next_request_id()
{
    return id_ + "/g" + std::to_string(++request_counter_);
}

void Session::issue(GenerationKind kind, std::string prompt, std::optional<PlayerId> who,
                    std::size_t quick_index, std::int64_t now_ms)
{
    auto& round = current();
    const auto request_id = next_request_id();
    pending_[request_id] = Pending{kind, rounds_.size() - 1, who, quick_index, std::nullopt};
    issue_order_.push_back(request_id);

    switch (kind) {
    case GenerationKind::original: round.original = {request_id, SlotStatus::pending, {}}; break;
    case GenerationKind::main: round.mains[*who] = {request_id, SlotStatus::pending, {}}; break;
    case GenerationKind::quick_draw: round.quick_draws[quick_index].image.request_id = request_id; break;
    }

    json payload{{"request_id", request_id},
                 {"round", round.spec.index},
                 {"kind", imaging::to_string(kind)},
                 {"prompt", prompt}};
    if (who) payload["player"] = who->value;
    if (kind == GenerationKind::quick_draw) {
        payload["remaining"] = kQuickDrawBudget - round.quick_used[*who];
        emit(EventKind::quick_draw_issued, std::move(payload), now_ms);
    } else {
        emit(EventKind::generation_issued, std::move(payload), now_ms);
    }

    imaging::GenerationRequest req;
    req.prompt = std::move(prompt);
    req.request_id = request_id;
    req.context = {id_, round.spec.index, who, kind, config_.effective_provider_seed()};
    effects_.emplace_back(IssueGeneration{std::move(req)});
}

bool Session::on_generation_resolved(const imaging::ImageRecord& record, std::int64_t now_ms)
{
    auto it = pending_.find(record.request_id);
    if (it == pending_.end() || it->second.result) {
        return false;
    }
    it->second.result = record;
    while (!issue_order_.empty()) {
        auto head = pending_.find(issue_order_.front());
        if (!head->second.result) break;
        const auto id = issue_order_.front();
        const auto done = *head->second.result;
        issue_order_.pop_front();
        release(id, done, now_ms);
    }
    ++version_;
    return true;
}

void Session::release(const std::string& request_id, const imaging::ImageRecord& record,
                      std::int64_t now_ms)
{
    const Pending p = pending_.at(request_id);
    pending_.erase(request_id);
    auto& round = rounds_[p.round_slot];
    const bool ok = record.ok();
    const ImageSlot resolved{request_id, ok ? SlotStatus::success : SlotStatus::failed,
                             ok ? record.asset_key : std::string()};

    json payload{{"request_id", request_id},
                 {"round", round.spec.index},
                 {"kind", imaging::to_string(p.kind)},
                 {"status", ok ? "success" : "failed"},
                 {"asset", resolved.asset},
                 {"provider", record.provider_id},
                 {"attempt", record.attempt},
                 {"reason", imaging::to_string(record.reason)}};
    if (p.player) payload["player"] = p.player->value;
    const json timing{{"latency_ms", record.latency_ms}};

    switch (p.kind) {
    case GenerationKind::original:
        round.original = resolved;
        emit(EventKind::generation_resolved, std::move(payload), now_ms, timing);
        break;
    case GenerationKind::main:
        round.mains[*p.player] = resolved;
        emit(EventKind::generation_resolved, std::move(payload), now_ms, timing);
        if (p.round_slot + 1 == rounds_.size()) {
            maybe_finish_generating(now_ms);
        }
        break;
    case GenerationKind::quick_draw: {
        auto& q = round.quick_draws[p.quick_index];
        q.image = resolved;
        payload["prompt"] = q.prompt;
        emit(EventKind::quick_draw_resolved, std::move(payload), now_ms, timing);
        break;
    }
    }
}

// ---------------------------------------------------------------- lobby

PlayerId Session::join(std::string_view nickname, bool as_creator, std::int64_t now_ms)
{
    if (phase_.kind != PhaseKind::lobby) {
        throw Error(Errc::game_already_started);
    }
    if (!utf8::is_valid(nickname)) {
        throw Error(Errc::invalid_utf8, "nickname is not valid UTF-8");
    }
    const std::string name(utf8::trim(nickname));
    if (name.empty()) {
        throw Error(Errc::empty_nickname);
    }
    if (find_player(name)) {
        throw Error(Errc::duplicate_nickname, name);
    }
    if (static_cast<int>(players_.size()) >= config_.max_players) {
        throw Error(Errc::session_full);
    }
    if (as_creator && creator()) {
        throw Error(Errc::not_creator, "creator seat already taken");
    }
    const PlayerId id{static_cast<std::uint32_t>(players_.size() + 1)};
    players_.push_back({id, name, true, false, as_creator});
    emit(EventKind::player_joined, {{"player", id.value}, {"nickname", name}, {"creator", as_creator}},
         now_ms);
    ++version_;
    return id;
}

void Session::start_game(PlayerId initiator, std::int64_t now_ms)
{
    if (phase_.kind != PhaseKind::lobby) {
        throw Error(Errc::game_already_started);
    }
    player(initiator);
    if (!is_creator(initiator)) {
        throw Error(Errc::not_creator);
    }
    if (players_.size() < 2) {
        throw Error(Errc::not_enough_players);
    }
    json plan = json::array();
    for (const auto& r : plan_) {
        plan.push_back({{"index", r.index}, {"category", to_string(r.category)}});
    }
    std::vector<PlayerId> seats;
    for (const auto& p : players_) seats.push_back(p.id);
    emit(EventKind::game_started,
         {{"players", ids(seats)}, {"plan", plan}, {"practice", practice_.has_value()}}, now_ms);
    enter_round(0, now_ms);
    ++version_;
}

// ---------------------------------------------------------------- phases

void Session::enter_phase(PhaseKind kind, std::int64_t now_ms, json extra)
{
    phase_.kind = kind;
    phase_.round = rounds_.empty() ? 0 : current().spec.index;
    ++phase_.instance;
    phase_.deadline_ms.reset();
    if (!in_practice() || kind == PhaseKind::scoreboard || kind == PhaseKind::closed) {
        if (kind == PhaseKind::prompting) {
            phase_.deadline_ms = now_ms + std::int64_t{config_.prompt_timer_s} * 1000;
        } else if (kind == PhaseKind::voting) {
            phase_.deadline_ms = now_ms + std::int64_t{config_.vote_timer_s} * 1000;
        }
    }
    json payload{{"phase", to_string(kind)}, {"round", phase_.round}, {"instance", phase_.instance}};
    if (extra.is_object()) {
        payload.update(extra);
    }
    json timing = json::object();
    if (phase_.deadline_ms) {
        timing["deadline_ms"] = *phase_.deadline_ms;
    }
    emit(EventKind::phase_changed, std::move(payload), now_ms, std::move(timing));
    if (phase_.deadline_ms) {
        effects_.emplace_back(ArmTimer{phase_.instance, *phase_.deadline_ms});
    }
}

void Session::enter_round(std::size_t slot, std::int64_t now_ms)
{
    RoundState round;
    if (practice_) {
        round.practice = slot == 0;
        round.spec = slot == 0 ? *practice_ : plan_[slot - 1];
    } else {
        round.spec = plan_[slot];
    }
    for (auto& p : players_) p.ready = false;
    rounds_.push_back(std::move(round));
    auto& r = current();
    emit(EventKind::round_started,
         {{"round", r.spec.index},
          {"category", to_string(r.spec.category)},
          {"practice", r.practice},
          {"original_prompt", r.spec.original_prompt}},
         now_ms);
    enter_phase(PhaseKind::prompting, now_ms);
    if (!r.spec.original_image.empty()) {
        r.original = {{}, SlotStatus::success, r.spec.original_image};
    } else {
        issue(GenerationKind::original, r.spec.original_prompt, std::nullopt, 0, now_ms);
    }
}

void Session::update_draft(PlayerId who, std::string_view text)
{
    player(who);
    if (phase_.kind != PhaseKind::prompting) {
        throw Error(Errc::wrong_phase);
    }
    if (!utf8::is_valid(text)) {
        throw Error(Errc::invalid_utf8, "draft is not valid UTF-8");
    }
    if (current().submissions.contains(who)) {
        return;
    }
    current().drafts[who] = std::string(text);
}

PromptSubmission Session::submit_prompt(PlayerId who, std::string_view text, std::int64_t now_ms)
{
    player(who);
    if (phase_.kind != PhaseKind::prompting) {
        throw Error(Errc::wrong_phase);
    }
    if (current().submissions.contains(who)) {
        throw Error(Errc::already_submitted);
    }
    auto clean = checked_text(text);
    record_submission(who, std::move(clean), false, now_ms);
    auto sub = current().submissions.at(who);
    maybe_finish_prompting(now_ms);
    ++version_;
    return sub;
}

void Session::record_submission(PlayerId who, std::string text, bool automatic, std::int64_t now_ms)
{
    auto& r = current();
    const int count = static_cast<int>(tokenizer_->count(text));
    r.submissions[who] = PromptSubmission{who, text, count, now_ms, automatic};
    r.drafts.erase(who);
    emit(EventKind::prompt_submitted,
         {{"round", r.spec.index},
          {"player", who.value},
          {"text", text},
          {"token_count", count},
          {"auto_submitted", automatic}},
         now_ms);
}

void Session::maybe_finish_prompting(std::int64_t now_ms)
{
    if (phase_.kind != PhaseKind::prompting || !any_connected()) return;
    const auto& r = current();
    for (const auto& p : players_) {
        if (p.connected && !r.submissions.contains(p.id)) return;
    }
    finish_prompting(now_ms);
}

void Session::finish_prompting(std::int64_t now_ms)
{
    auto& r = current();
    for (const auto& p : players_) {
        if (r.submissions.contains(p.id)) continue;
        auto it = r.drafts.find(p.id);
        const auto draft = it == r.drafts.end() ? std::string_view{} : utf8::trim(it->second);
        if (draft.empty()) {
            r.no_submission.insert(p.id);
        } else {
            record_submission(p.id, std::string(draft), true, now_ms);
        }
    }
    const json extra{{"no_submission", ids(r.no_submission)}};
    if (r.submissions.empty()) {
        enter_reveal(now_ms, extra);
        return;
    }
    enter_phase(PhaseKind::generating, now_ms, extra);
    for (const auto& [who, sub] : r.submissions) {
        issue(GenerationKind::main, sub.text, who, 0, now_ms);
    }
}

void Session::maybe_finish_generating(std::int64_t now_ms)
{
    if (phase_.kind != PhaseKind::generating) return;
    auto& r = current();
    for (const auto& [_, slot] : r.mains) {
        if (slot.status == SlotStatus::pending) return;
    }
    bool anyone = false;
    for (const auto& p : players_) {
        auto& opts = r.options[p.id];
        for (const auto& [who, slot] : r.mains) {
            if (who != p.id && slot.status == SlotStatus::success) opts.push_back(who);
        }
        anyone = anyone || !opts.empty();
    }
    if (!anyone) {
        enter_reveal(now_ms, json::object());
        return;
    }
    enter_voting(now_ms);
}

void Session::enter_voting(std::int64_t now_ms)
{
    auto& r = current();
    json options = json::array();
    for (const auto& p : players_) {
        const auto& opts = r.options[p.id];
        if (opts.empty()) r.abstained.insert(p.id);
        options.push_back({{"player", p.id.value}, {"options", ids(opts)}});
    }
    enter_phase(PhaseKind::voting, now_ms,
                {{"options", options}, {"abstained", ids(r.abstained)}});
    maybe_finish_voting(now_ms);
}

void Session::cast_vote(PlayerId voter, PlayerId target, std::int64_t now_ms)
{
    player(voter);
    if (phase_.kind != PhaseKind::voting) {
        throw Error(Errc::wrong_phase);
    }
    auto& r = current();
    if (r.votes.contains(voter)) {
        throw Error(Errc::already_voted);
    }
    if (voter == target) {
        throw Error(Errc::self_vote);
    }
    player(target);
    const auto& opts = r.options[voter];
    if (std::find(opts.begin(), opts.end(), target) == opts.end()) {
        throw Error(Errc::target_has_no_image, to_string(target));
    }
    r.votes[voter] = target;
    r.vote_order.push_back({voter, target});
    emit(EventKind::vote_cast, {{"round", r.spec.index}, {"voter", voter.value}, {"target", target.value}},
         now_ms);
    maybe_finish_voting(now_ms);
    ++version_;
}

void Session::maybe_finish_voting(std::int64_t now_ms)
{
    if (phase_.kind != PhaseKind::voting || !any_connected()) return;
    const auto& r = current();
    for (const auto& p : players_) {
        if (p.connected && !r.votes.contains(p.id) && !r.abstained.contains(p.id)) return;
    }
    finish_voting(now_ms);
}

void Session::finish_voting(std::int64_t now_ms)
{
    auto& r = current();
    for (const auto& p : players_) {
        if (!r.votes.contains(p.id)) r.abstained.insert(p.id);
    }
    enter_reveal(now_ms, {{"abstained", ids(r.abstained)}});
}

void Session::enter_reveal(std::int64_t now_ms, json extra)
{
    auto& r = current();
    r.revealed = true;
    for (auto& p : players_) p.ready = false;
    enter_phase(PhaseKind::reveal, now_ms, std::move(extra));
    if (r.practice) return;

    std::vector<PromptSubmission> subs;
    std::map<PlayerId, ImageOutcome> outcomes;
    for (const auto& p : players_) {
        auto it = r.mains.find(p.id);
        if (it == r.mains.end()) {
            outcomes[p.id] = ImageOutcome::none;
        } else {
            outcomes[p.id] = it->second.status == SlotStatus::success ? ImageOutcome::success
                                                                      : ImageOutcome::failed;
            subs.push_back(r.submissions.at(p.id));
        }
    }
    r.scores = compute_round_scores(subs, r.vote_order, outcomes);
    scored_.push_back(*r.scores);
    scoreboard_ = accumulate_scoreboard(scored_);

    json deltas = json::array();
    for (const auto& [_, d] : *r.scores) deltas.push_back(to_json(d));
    json totals = json::array();
    for (const auto& [who, t] : scoreboard_.totals) totals.push_back({{"player", who.value}, {"total", t}});
    emit(EventKind::round_scored, {{"round", r.spec.index}, {"deltas", deltas}, {"totals", totals}},
         now_ms);
}

// ---------------------------------------------------------------- reveal

int Session::request_quick_draw(PlayerId who, std::string_view text, std::int64_t now_ms)
{
    player(who);
    if (phase_.kind != PhaseKind::reveal) {
        throw Error(Errc::wrong_phase);
    }
    auto& r = current();
    if (r.quick_used[who] >= kQuickDrawBudget) {
        throw Error(Errc::quick_draw_budget_exhausted);
    }
    auto clean = checked_text(text);
    ++r.quick_used[who];
    r.quick_draws.push_back({who, clean, {}});
    issue(GenerationKind::quick_draw, std::move(clean), who, r.quick_draws.size() - 1, now_ms);
    ++version_;
    return kQuickDrawBudget - r.quick_used[who];
}

void Session::set_ready(PlayerId who, bool ready, std::int64_t now_ms)
{
    auto& p = player(who);
    if (phase_.kind != PhaseKind::reveal) {
        throw Error(Errc::wrong_phase);
    }
    p.ready = ready;
    maybe_advance_reveal(now_ms);
    ++version_;
}

void Session::maybe_advance_reveal(std::int64_t now_ms)
{
    if (phase_.kind != PhaseKind::reveal || !any_connected()) return;
    for (const auto& p : players_) {
        if (p.connected && !p.ready) return;
    }
    advance(now_ms);
}

void Session::advance(std::int64_t now_ms)
{
    const std::size_t total = plan_.size() + (practice_ ? 1 : 0);
    if (rounds_.size() < total) {
        enter_round(rounds_.size(), now_ms);
        return;
    }
    enter_phase(PhaseKind::scoreboard, now_ms);
    json totals = json::array();
    for (const auto& p : players_) {
        auto it = scoreboard_.totals.find(p.id);
        totals.push_back({{"player", p.id.value}, {"total", it == scoreboard_.totals.end() ? 0 : it->second}});
    }
    emit(EventKind::session_ended,
         {{"reason", "completed"}, {"rounds", static_cast<int>(scored_.size())}, {"totals", totals}}, now_ms);
}

void Session::force_advance(PlayerId initiator, std::int64_t now_ms)
{
    player(initiator);
    switch (phase_.kind) {
    case PhaseKind::reveal: {
        const bool all_ready = any_connected() &&
                               std::all_of(players_.begin(), players_.end(),
                                           [](const auto& p) { return !p.connected || p.ready; });
        if (!all_ready && !is_creator(initiator)) {
            throw Error(Errc::not_all_ready);
        }
        advance(now_ms);
        break;
    }
    case PhaseKind::prompting:
    case PhaseKind::voting:
        if (!in_practice()) {
            throw Error(Errc::wrong_phase);
        }
        if (!is_creator(initiator)) {
            throw Error(Errc::not_creator);
        }
        if (phase_.kind == PhaseKind::prompting) {
            finish_prompting(now_ms);
        } else {
            finish_voting(now_ms);
        }
        break;
    default:
        throw Error(Errc::wrong_phase);
    }
    ++version_;
}

// ---------------------------------------------------------------- timers, presence

void Session::on_timer_expiry(std::uint64_t phase_instance, std::int64_t now_ms)
{
    if (phase_instance != phase_.instance || !phase_.deadline_ms) {
        return;
    }
    if (phase_.kind == PhaseKind::prompting) {
        finish_prompting(now_ms);
    } else if (phase_.kind == PhaseKind::voting) {
        finish_voting(now_ms);
    } else {
        return;
    }
    ++version_;
}

void Session::set_connected(PlayerId who, bool connected, std::int64_t now_ms)
{
    auto& p = player(who);
    if (p.connected == connected) return;
    p.connected = connected;
    // Either direction can complete a phase: a leaver was the last holdout,
    // or the first player back had already acted while everyone was away.
    maybe_finish_prompting(now_ms);
    maybe_finish_voting(now_ms);
    maybe_advance_reveal(now_ms);
    ++version_;
}

void Session::close(std::string_view reason, std::int64_t now_ms)
{
    if (phase_.kind == PhaseKind::closed) return;
    const bool ended = phase_.kind == PhaseKind::scoreboard;
    issue_order_.clear();
    pending_.clear();
    if (ended) {
        phase_.kind = PhaseKind::closed;
        phase_.deadline_ms.reset();
        ++phase_.instance;
    } else {
        enter_phase(PhaseKind::closed, now_ms);
        json totals = json::array();
        for (const auto& [who, t] : scoreboard_.totals) {
            totals.push_back({{"player", who.value}, {"total", t}});
        }
        emit(EventKind::session_ended,
             {{"reason", std::string(reason)}, {"rounds", static_cast<int>(scored_.size())}, {"totals", totals}},
             now_ms);
    }
    ++version_;
}

// ---------------------------------------------------------------- views

RoundView Session::round_view(const RoundState& r, PlayerId viewer) const
{
    RoundView v;
    v.index = r.spec.index;
    v.practice = r.practice;
    v.category = r.spec.category;
    v.original_status = slot_name(r.original.status == SlotStatus::pending,
                                  r.original.status == SlotStatus::success);
    v.original_asset = r.original.asset;
    if (r.revealed) v.original_prompt = r.spec.original_prompt;

    for (const auto& [who, sub] : r.submissions) {
        v.submitted.push_back(who);
        CardView c;
        c.player = who;
        auto m = r.mains.find(who);
        if (m == r.mains.end()) {
            c.status = "pending";
        } else {
            c.status = slot_name(m->second.status == SlotStatus::pending,
                                 m->second.status == SlotStatus::success);
            c.asset = m->second.asset;
        }
        if (r.revealed || who == viewer) {
            c.prompt = sub.text;
            c.token_count = sub.token_count;
            c.auto_submitted = sub.auto_submitted;
        }
        if (r.revealed) {
            c.overlap = compute_overlap(r.spec.original_prompt, sub.text).per_token_flags;
            if (r.scores) c.score = r.scores->at(who);
        }
        v.cards.push_back(std::move(c));
    }
    if (auto it = r.options.find(viewer); it != r.options.end()) v.vote_options = it->second;
    if (auto it = r.votes.find(viewer); it != r.votes.end()) v.own_vote = it->second;
    for (const auto& [who, _] : r.votes) v.voted.push_back(who);
    if (r.revealed) {
        v.votes = r.vote_order;
        v.abstained.assign(r.abstained.begin(), r.abstained.end());
    }
    v.no_submission.assign(r.no_submission.begin(), r.no_submission.end());
    auto used = r.quick_used.find(viewer);
    v.quick_draw_remaining = kQuickDrawBudget - (used == r.quick_used.end() ? 0 : used->second);
    for (const auto& q : r.quick_draws) {
        v.quick_draws.push_back({q.author, q.prompt,
                                 std::string(slot_name(q.image.status == SlotStatus::pending,
                                                       q.image.status == SlotStatus::success)),
                                 q.image.asset});
    }
    return v;
}

SessionView Session::snapshot(PlayerId viewer, std::int64_t now_ms) const
{
    if (!find(viewer)) {
        throw Error(Errc::unknown_viewer, to_string(viewer));
    }
    SessionView v;
    v.session = id_;
    v.room_code = room_code_;
    v.viewer = viewer;
    v.phase = phase_.kind;
    v.round = phase_.round;
    v.round_count = config_.round_count;
    v.prompt_timer_s = config_.prompt_timer_s;
    v.vote_timer_s = config_.vote_timer_s;
    v.deadline_ms = phase_.deadline_ms;
    if (phase_.deadline_ms) v.remaining_ms = std::max<std::int64_t>(0, *phase_.deadline_ms - now_ms);
    v.event_seq = seq_;
    v.version = version_;
    v.pending_generations = pending_generations();
    for (const auto& p : players_) {
        auto it = scoreboard_.totals.find(p.id);
        v.players.push_back({p.id, p.nickname, p.connected, p.ready, p.creator,
                             it == scoreboard_.totals.end() ? 0 : it->second});
    }
    if (const auto* r = current_or_null()) v.current = round_view(*r, viewer);
    for (const auto& r : rounds_) {
        if (!r.scores) continue;
        RoundSummary s{r.spec.index, r.spec.category, r.spec.original_prompt, {}};
        for (const auto& [who, d] : *r.scores) {
            RoundSummaryEntry e{who, std::nullopt, 0, d};
            if (auto sub = r.submissions.find(who); sub != r.submissions.end()) {
                e.prompt = sub->second.text;
                e.token_count = sub->second.token_count;
            }
            s.entries.push_back(std::move(e));
        }
        v.history.push_back(std::move(s));
    }
    return v;
}

json Session::log_header() const
{
    json plan = json::array();
    for (const auto& r : plan_) plan.push_back(to_json(r));
    json h{{"type", "header"},
           {"version", 1},
           {"session", id_},
           {"room_code", room_code_},
           {"config", to_json(config_)},
           {"seed", config_.seed},
           {"provider", {{"id", config_.provider_id}, {"seed", config_.effective_provider_seed()}}},
           {"tokenizer", {{"id", tokenizer_->spec().id}, {"version", tokenizer_->spec().version}}},
           {"plan", plan}};
    if (practice_) h["practice"] = to_json(*practice_);
    return h;
}

}  // namespace shortprompt::engine
