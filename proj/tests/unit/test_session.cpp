#include <doctest.h>

#include "support/engine_driver.hpp"

#include "shortprompt/core/category.hpp"

#include <set>

using namespace sptest;

namespace {

// Three players through Prompting with the given prompts; all images succeed
// unless listed in `failed`.
struct ThreeUp {
    Driver d;
    PlayerId a, b, c;

    explicit ThreeUp(SessionConfig cfg = {}) : d(cfg)
    {
        auto ids = d.lobby(3);
        a = ids[0], b = ids[1], c = ids[2];
        d.start(a);
        d.resolve_all();  // original
    }

    void to_voting(const std::string& pa, const std::string& pb, const std::string& pc,
                   std::set<PlayerId> failed = {})
    {
        d.submit(a, pa);
        d.submit(b, pb);
        d.submit(c, pc);
        d.resolve_all([&](const imaging::GenerationRequest& r) {
            return r.context.player && failed.contains(*r.context.player);
        });
    }
};

}  // namespace

TEST_CASE("create: default config gives a Lobby session with one round per category")
{
    Driver d;
    CHECK(d.phase() == PhaseKind::lobby);
    REQUIRE(d->plan().size() == 6);
    std::set<Category> seen;
    for (const auto& r : d->plan()) seen.insert(r.category);
    CHECK(seen.size() == kCategoryCount);
    REQUIRE(d.events.size() == 1);
    CHECK(d.events[0].kind == EventKind::session_created);
    CHECK(d.events[0].seq == 1);
}

TEST_CASE("create: invalid configs")
{
    CHECK(error_code([] { parse_session_config({{"round_count", 0}}); }) == Errc::invalid_config);
    CHECK(error_code([] { parse_session_config({{"round_count", -1}}); }) == Errc::invalid_config);
    CHECK(error_code([] { parse_session_config({{"prompt_timer_s", 0}}); }) == Errc::invalid_config);
    CHECK(error_code([] { parse_session_config({{"max_players", 1}}); }) == Errc::invalid_config);
    CHECK(error_code([] { parse_session_config({{"colour", "red"}}); }) == Errc::invalid_config);
    CHECK(error_code([] { parse_session_config({{"seed", "x"}}); }) == Errc::invalid_config);
    CHECK(error_code([] { parse_session_config(nlohmann::json::array()); }) == Errc::invalid_config);

    const auto c = parse_session_config({{"seed", 7}, {"vote_timer_s", 5}});
    CHECK(c.seed == 7);
    CHECK(c.vote_timer_s == 5);
    CHECK(c.prompt_timer_s == 70);
    CHECK(c.effective_provider_seed() == 7);
    CHECK(parse_session_config(to_json(c)) == SessionConfig{c.round_count, c.prompt_timer_s, c.vote_timer_s,
                                                             c.max_players, c.tokenizer, c.provider_id,
                                                             std::uint64_t{7}, 7, false, {}});
}

TEST_CASE("create: custom plan sets its own round count")
{
    nlohmann::json body{{"plan",
                         {{{"index", 1}, {"category", "realism"}, {"prompt", "A pretty cow"}},
                          {{"index", 2}, {"category", "co-occurrence"}, {"prompt", "A horse"}}}}};
    const auto c = parse_session_config(body);
    CHECK(c.round_count == 2);
    Driver d(c);
    CHECK(d->plan() == c.custom_plan);
    body["round_count"] = 3;
    CHECK(error_code([&] { parse_session_config(body); }) == Errc::invalid_config);
}

TEST_CASE("join: order, post-start, full, duplicates")
{
    Driver d;
    auto ids = d.lobby(3);
    CHECK(ids == std::vector<PlayerId>{{1}, {2}, {3}});
    CHECK(d->players()[1].nickname == "B");
    CHECK(error_code([&] { d.join("  b "); }) == Errc::duplicate_nickname);
    CHECK(error_code([&] { d.join("   "); }) == Errc::empty_nickname);
    CHECK(error_code([&] { d.join("Z", true); }) == Errc::not_creator);
    d.start(ids[0]);
    CHECK(error_code([&] { d.join("D"); }) == Errc::game_already_started);

    Driver full;
    full.lobby(8);
    CHECK(error_code([&] { full.join("ninth"); }) == Errc::session_full);
}

TEST_CASE("start_game: Prompting(1) with a 70 s deadline and the original issued")
{
    Driver d;
    d.now = 1234;
    auto ids = d.lobby(3);
    CHECK(error_code([&] { d.start(ids[1]); }) == Errc::not_creator);
    d.start(ids[0]);
    CHECK(d.phase() == PhaseKind::prompting);
    CHECK(d->phase().round == 1);
    REQUIRE(d->phase().deadline_ms);
    CHECK(*d->phase().deadline_ms == 1234 + 70'000);
    REQUIRE(d.outstanding.size() == 1);
    CHECK(d.outstanding[0].context.kind == imaging::GenerationKind::original);
    CHECK(d.outstanding[0].prompt == d->plan()[0].original_prompt);

    Driver solo;
    auto one = solo.join("only", true);
    CHECK(error_code([&] { solo.start(one); }) == Errc::not_enough_players);
}

TEST_CASE("submit_prompt: last submitter triggers Generating immediately")
{
    ThreeUp t;
    t.d.now = 40'000;
    t.d.submit(t.a, "cow");
    t.d.submit(t.b, "a cow");
    CHECK(t.d.phase() == PhaseKind::prompting);
    t.d.submit(t.c, "a pretty cow");
    CHECK(t.d.phase() == PhaseKind::generating);
    CHECK(t.d.outstanding.size() == 3);
    const auto changes = t.d.of_kind(EventKind::phase_changed);
    CHECK(changes.back()->mono_ms == 40'000);
    auto subs = t.d.of_kind(EventKind::prompt_submitted);
    REQUIRE(subs.size() == 3);
    CHECK(subs[2]->payload["token_count"] == 3);
    CHECK(subs[2]->payload["text"] == "a pretty cow");
}

TEST_CASE("submit_prompt: errors")
{
    ThreeUp t;
    t.d.submit(t.a, "cow");
    CHECK(error_code([&] { t.d.submit(t.a, "again"); }) == Errc::already_submitted);
    CHECK(error_code([&] { t.d.submit(t.b, "  \t "); }) == Errc::empty_prompt);
    CHECK(error_code([&] { t.d.submit(t.b, "\xC3"); }) == Errc::invalid_utf8);
    t.d.submit(t.b, "cow");
    t.d.submit(t.c, "cow");
    t.d.resolve_all();
    REQUIRE(t.d.phase() == PhaseKind::voting);
    CHECK(error_code([&] { t.d.submit(t.a, "late"); }) == Errc::wrong_phase);
}

TEST_CASE("timer expiry: drafts auto-submit, empty drafts become no-submission")
{
    ThreeUp t;
    t.d->update_draft(t.a, "cow");
    t.d->update_draft(t.b, "");
    t.d->update_draft(t.c, "a cow");
    t.d.expire();
    CHECK(t.d.phase() == PhaseKind::generating);
    auto subs = t.d.of_kind(EventKind::prompt_submitted);
    REQUIRE(subs.size() == 2);
    CHECK(subs[0]->payload["player"] == t.a.value);
    CHECK(subs[0]->payload["auto_submitted"] == true);
    CHECK(subs[1]->payload["player"] == t.c.value);
    const auto view = t.d->snapshot(t.b, t.d.now);
    CHECK(view.current->no_submission == std::vector<PlayerId>{t.b});
}

TEST_CASE("timer expiry: missing votes become abstentions")
{
    ThreeUp t;
    t.to_voting("cow", "a cow", "brown cow");
    t.d.vote(t.a, t.b);
    t.d.expire();
    CHECK(t.d.phase() == PhaseKind::reveal);
    const auto v = t.d->snapshot(t.a, t.d.now);
    CHECK(v.current->abstained == std::vector<PlayerId>{t.b, t.c});
    CHECK(v.current->votes.size() == 1);
}

TEST_CASE("timer expiry: stale instance is a no-op")
{
    ThreeUp t;
    const auto prompting_timer = *t.d.timer;
    t.to_voting("cow", "a cow", "brown cow");
    const auto version = t.d->version();
    const auto seq = t.d->last_seq();
    t.d->on_timer_expiry(prompting_timer.phase_instance, t.d.now + 100'000);
    t.d.pump();
    CHECK(t.d.phase() == PhaseKind::voting);
    CHECK(t.d->version() == version);
    CHECK(t.d->last_seq() == seq);
}

TEST_CASE("images ready: three successes give two options each")
{
    ThreeUp t;
    t.to_voting("cow", "a cow", "brown cow");
    CHECK(t.d.phase() == PhaseKind::voting);
    REQUIRE(t.d->phase().deadline_ms);
    CHECK(*t.d->phase().deadline_ms == t.d.now + 20'000);
    for (auto p : {t.a, t.b, t.c}) {
        const auto opts = t.d->snapshot(p, t.d.now).current->vote_options;
        CHECK(opts.size() == 2);
        CHECK(std::find(opts.begin(), opts.end(), p) == opts.end());
    }
}

TEST_CASE("images ready: one success leaves its owner without options")
{
    ThreeUp t;
    t.to_voting("cow", "a cow", "brown cow", {t.b, t.c});
    REQUIRE(t.d.phase() == PhaseKind::voting);
    CHECK(t.d->snapshot(t.a, t.d.now).current->vote_options.empty());
    CHECK(t.d->snapshot(t.b, t.d.now).current->vote_options == std::vector<PlayerId>{t.a});
    CHECK(error_code([&] { t.d.vote(t.a, t.b); }) == Errc::target_has_no_image);
    t.d.vote(t.b, t.a);
    t.d.vote(t.c, t.a);
    CHECK(t.d.phase() == PhaseKind::reveal);
}

TEST_CASE("images ready: no successes or no submissions skip Voting")
{
    ThreeUp t;
    t.to_voting("cow", "a cow", "brown cow", {t.a, t.b, t.c});
    CHECK(t.d.phase() == PhaseKind::reveal);

    ThreeUp empty;
    empty.d.expire();
    CHECK(empty.d.phase() == PhaseKind::reveal);
    std::vector<std::string> phases;
    for (const auto* e : empty.d.of_kind(EventKind::phase_changed)) {
        phases.push_back(e->payload["phase"]);
    }
    CHECK(phases == std::vector<std::string>{"prompting", "reveal"});
    const auto scored = empty.d.of_kind(EventKind::round_scored);
    REQUIRE(scored.size() == 1);
    for (const auto& d : scored[0]->payload["deltas"]) CHECK(d["delta"] == 0);
}

TEST_CASE("cast_vote: A->B, B->A, C->A reproduces the scoring example")
{
    ThreeUp t;
    t.to_voting("cow", "a pretty brown cow", "pretty cow");
    t.d.vote(t.a, t.b);
    t.d.vote(t.b, t.a);
    CHECK(t.d.phase() == PhaseKind::voting);
    t.d.vote(t.c, t.a);
    CHECK(t.d.phase() == PhaseKind::reveal);
    const auto scored = t.d.of_kind(EventKind::round_scored);
    REQUIRE(scored.size() == 1);
    std::map<std::uint32_t, int> delta;
    for (const auto& d : scored[0]->payload["deltas"]) delta[d["player"]] = d["delta"];
    CHECK(delta == std::map<std::uint32_t, int>{{1, 2}, {2, 0}, {3, 0}});
    CHECK(t.d->scoreboard().totals.at(t.a) == 2);
}

TEST_CASE("cast_vote: errors")
{
    ThreeUp t;
    t.to_voting("cow", "a cow", "brown cow", {t.c});
    CHECK(error_code([&] { t.d.vote(t.a, t.a); }) == Errc::self_vote);
    CHECK(error_code([&] { t.d.vote(t.a, t.c); }) == Errc::target_has_no_image);
    CHECK(error_code([&] { t.d.vote(t.a, PlayerId{9}); }) == Errc::unknown_player);
    t.d.vote(t.a, t.b);
    CHECK(error_code([&] { t.d.vote(t.a, t.b); }) == Errc::already_voted);
}

TEST_CASE("quick draw: two attempts per player per round, broadcast with attribution")
{
    ThreeUp t;
    t.to_voting("cow", "a cow", "brown cow");
    CHECK(error_code([&] { t.d->request_quick_draw(t.a, "mother", t.d.now); }) == Errc::wrong_phase);
    t.d.vote(t.a, t.b);
    t.d.vote(t.b, t.a);
    t.d.vote(t.c, t.a);
    REQUIRE(t.d.phase() == PhaseKind::reveal);

    CHECK(t.d->request_quick_draw(t.a, "mother", t.d.now) == 1);
    CHECK(t.d->request_quick_draw(t.a, "a mother", t.d.now) == 0);
    CHECK(error_code([&] { t.d->request_quick_draw(t.a, "third", t.d.now); }) ==
          Errc::quick_draw_budget_exhausted);
    CHECK(error_code([&] { t.d->request_quick_draw(t.b, " ", t.d.now); }) == Errc::empty_prompt);
    t.d.pump();
    CHECK(t.d->quick_draw_used(t.a, 1) == 2);
    t.d.resolve_all();
    for (auto p : {t.a, t.b, t.c}) {
        const auto v = t.d->snapshot(p, t.d.now);
        REQUIRE(v.current->quick_draws.size() == 2);
        CHECK(v.current->quick_draws[0].author == t.a);
        CHECK(v.current->quick_draws[0].prompt == "mother");
        CHECK(v.current->quick_draws[0].status == "success");
    }
    CHECK(t.d.of_kind(EventKind::quick_draw_resolved).size() == 2);
}

TEST_CASE("advance: creator forces, non-creator cannot, all-ready advances")
{
    ThreeUp t;
    t.to_voting("cow", "a cow", "brown cow");
    t.d.expire();
    REQUIRE(t.d.phase() == PhaseKind::reveal);
    CHECK(error_code([&] { t.d->force_advance(t.b, t.d.now); }) == Errc::not_all_ready);
    t.d->set_ready(t.b, true, t.d.now);
    t.d->set_ready(t.c, true, t.d.now);
    CHECK(t.d.phase() == PhaseKind::reveal);
    t.d->force_advance(t.a, t.d.now);
    t.d.pump();
    CHECK(t.d.phase() == PhaseKind::prompting);
    CHECK(t.d->phase().round == 2);
    for (const auto& p : t.d->players()) CHECK_FALSE(p.ready);
}

TEST_CASE("advance: six rounds of all-ready end at the Scoreboard")
{
    ThreeUp t;
    for (int round = 1; round <= 6; ++round) {
        REQUIRE(t.d->phase().round == round);
        t.d.resolve_all();
        t.to_voting("cow", "a cow", "brown cow");
        t.d.vote(t.a, t.b);
        t.d.vote(t.b, t.c);
        t.d.vote(t.c, t.a);
        REQUIRE(t.d.phase() == PhaseKind::reveal);
        for (auto p : {t.a, t.b, t.c}) t.d->set_ready(p, true, t.d.now);
        t.d.pump();
    }
    CHECK(t.d.phase() == PhaseKind::scoreboard);
    const auto v = t.d->snapshot(t.b, t.d.now);
    CHECK(v.history.size() == 6);
    const auto ended = t.d.of_kind(EventKind::session_ended);
    REQUIRE(ended.size() == 1);
    CHECK(ended[0]->payload["reason"] == "completed");
    // Each round: one vote each, "brown cow" and "a cow" tie at 2 tokens.
    for (const auto& p : v.players) CHECK(p.total == (p.id == t.a ? 6 : 0));
    for (std::size_t i = 0; i < t.d.events.size(); ++i) CHECK(t.d.events[i].seq == i + 1);
}

TEST_CASE("snapshot: hidden information and determinism")
{
    ThreeUp t;
    t.d.submit(t.b, "secret cow");
    auto va = t.d->snapshot(t.a, t.d.now);
    REQUIRE(va.current->cards.size() == 1);
    CHECK_FALSE(va.current->cards[0].prompt.has_value());
    CHECK_FALSE(va.current->original_prompt.has_value());
    auto vb = t.d->snapshot(t.b, t.d.now);
    CHECK(vb.current->cards[0].prompt == "secret cow");
    CHECK(t.d->snapshot(t.a, t.d.now) == va);

    t.d.submit(t.a, "cow");
    t.d.submit(t.c, "a cow");
    t.d.resolve_all();
    t.d.vote(t.a, t.b);
    va = t.d->snapshot(t.a, t.d.now);
    auto vc = t.d->snapshot(t.c, t.d.now);
    CHECK(va.current->own_vote == t.b);
    CHECK_FALSE(vc.current->own_vote.has_value());
    CHECK(vc.current->votes.empty());
    CHECK(vc.current->voted == std::vector<PlayerId>{t.a});
    for (const auto& c : vc.current->cards) CHECK(c.prompt.has_value() == (c.player == t.c));

    t.d.vote(t.b, t.a);
    t.d.vote(t.c, t.a);
    const auto reveal = t.d->snapshot(t.c, t.d.now);
    CHECK(reveal.current->original_prompt == t.d->plan()[0].original_prompt);
    CHECK(reveal.current->votes.size() == 3);
    for (const auto& c : reveal.current->cards) {
        CHECK(c.prompt.has_value());
        CHECK(c.score.has_value());
        CHECK(c.overlap.size() == c.token_count);
    }
    CHECK(session_view_from_json(to_json(reveal)) == reveal);
    CHECK(t.d->snapshot(t.c, t.d.now) == reveal);
    CHECK(error_code([&] { t.d->snapshot(PlayerId{42}, 0); }) == Errc::unknown_viewer);
}

TEST_CASE("generation completions are released in issue order")
{
    ThreeUp t;
    t.d.submit(t.a, "cow");
    t.d.submit(t.b, "a cow");
    t.d.submit(t.c, "brown cow");
    REQUIRE(t.d.outstanding.size() == 3);
    const auto before = t.d.events.size();
    t.d.resolve_at(2, true);
    t.d.resolve_at(1, true);
    CHECK(t.d.events.size() == before);
    CHECK(t.d->pending_generations() == 3);
    t.d.resolve_at(0, true);
    auto resolved = t.d.of_kind(EventKind::generation_resolved);
    REQUIRE(resolved.size() == 4);
    CHECK(resolved[1]->payload["player"] == 1);
    CHECK(resolved[2]->payload["player"] == 2);
    CHECK(resolved[3]->payload["player"] == 3);
    CHECK(t.d->pending_generations() == 0);
    CHECK(t.d.phase() == PhaseKind::voting);
}

TEST_CASE("disconnects: connected players decide, absent players auto-resolve")
{
    ThreeUp t;
    t.d->update_draft(t.c, "away cow");
    t.d->set_connected(t.c, false, t.d.now);
    t.d.submit(t.a, "cow");
    t.d.submit(t.b, "a cow");
    CHECK(t.d.phase() == PhaseKind::generating);
    auto subs = t.d.of_kind(EventKind::prompt_submitted);
    REQUIRE(subs.size() == 3);
    CHECK(subs[2]->payload["auto_submitted"] == true);
    t.d.resolve_all();
    t.d.vote(t.a, t.b);
    t.d.vote(t.b, t.c);
    CHECK(t.d.phase() == PhaseKind::reveal);
    t.d->set_connected(t.c, true, t.d.now);
    t.d->set_ready(t.a, true, t.d.now);
    t.d->set_ready(t.b, true, t.d.now);
    CHECK(t.d.phase() == PhaseKind::reveal);
    t.d->set_connected(t.c, false, t.d.now);
    t.d.pump();
    CHECK(t.d.phase() == PhaseKind::prompting);
}

TEST_CASE("practice round is untimed, unscored and creator-driven")
{
    SessionConfig cfg;
    cfg.practice_round = true;
    ThreeUp t(cfg);
    CHECK(t.d->phase().round == 0);
    CHECK_FALSE(t.d->phase().deadline_ms.has_value());
    CHECK(error_code([&] { t.d->force_advance(t.b, t.d.now); }) == Errc::not_creator);
    t.d.submit(t.b, "cow");
    t.d->force_advance(t.a, t.d.now);
    t.d.pump();
    CHECK(t.d.phase() == PhaseKind::generating);
    t.d.resolve_all();
    CHECK(t.d.phase() == PhaseKind::voting);
    CHECK_FALSE(t.d->phase().deadline_ms.has_value());
    t.d->force_advance(t.a, t.d.now);
    t.d.pump();
    CHECK(t.d.phase() == PhaseKind::reveal);
    CHECK(t.d.of_kind(EventKind::round_scored).empty());
    t.d->force_advance(t.a, t.d.now);
    t.d.pump();
    CHECK(t.d->phase().round == 1);
    CHECK(t.d->phase().deadline_ms.has_value());
}

TEST_CASE("close: session-ended with reason, then every action is rejected")
{
    ThreeUp t;
    t.d->close("log-failure", t.d.now);
    t.d.pump();
    const auto ended = t.d.of_kind(EventKind::session_ended);
    REQUIRE(ended.size() == 1);
    CHECK(ended[0]->payload["reason"] == "log-failure");
    CHECK(t.d.phase() == PhaseKind::closed);
    CHECK(error_code([&] { t.d.submit(t.a, "cow"); }) == Errc::wrong_phase);
    CHECK_FALSE(t.d->on_generation_resolved(t.d.record_for(t.d.outstanding.empty()
                                                                ? imaging::GenerationRequest{}
                                                                : t.d.outstanding[0],
                                                            true),
                                            t.d.now));
}

TEST_CASE("events round-trip through JSON and keep clock fields under at")
{
    ThreeUp t;
    t.to_voting("cow", "a cow", "brown cow");
    for (const auto& e : t.d.events) {
        const auto j = to_json(e, std::string("2026-01-01T00:00:00Z"));
        CHECK(j["at"].contains("wall"));
        const auto back = event_from_json(j);
        CHECK(back.seq == e.seq);
        CHECK(back.kind == e.kind);
        CHECK(back.payload == e.payload);
        CHECK(back.mono_ms == e.mono_ms);
        CHECK(back.timing == e.timing);
    }
    const auto header = t.d->log_header();
    CHECK(header["type"] == "header");
    CHECK(header["tokenizer"]["id"] == "word-v1");
    CHECK(header["plan"].size() == 6);
}
