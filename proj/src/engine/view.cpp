#include "shortprompt/engine/view.hpp"

#include "shortprompt/core/errors.hpp"

namespace shortprompt::engine {

using nlohmann::json;

namespace {

json ids(const std::vector<PlayerId>& v)
{
    json out = json::array();
    for (auto id : v) out.push_back(id.value);
    return out;
}

std::vector<PlayerId> ids_from(const json& j)
{
    std::vector<PlayerId> out;
    for (const auto& x : j) out.push_back(PlayerId{x.get<std::uint32_t>()});
    return out;
}

template <class T>
void put_opt(json& j, const char* key, const std::optional<T>& v)
{
    j[key] = v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

json card_json(const CardView& c)
{
    json j{{"player", c.player.value},
           {"status", c.status},
           {"asset", c.asset},
           {"auto_submitted", c.auto_submitted},
           {"overlap", c.overlap}};
    put_opt(j, "prompt", c.prompt);
    put_opt(j, "token_count", c.token_count);
    j["score"] = c.score ? to_json(*c.score) : json(nullptr);
    return j;
}

CardView card_from(const json& j)
{
    CardView c;
    c.player = PlayerId{j.at("player").get<std::uint32_t>()};
    c.status = j.at("status").get<std::string>();
    c.asset = j.at("asset").get<std::string>();
    c.auto_submitted = j.at("auto_submitted").get<bool>();
    c.overlap = j.at("overlap").get<std::vector<bool>>();
    c.prompt = get_opt<std::string>(j, "prompt");
    c.token_count = get_opt<int>(j, "token_count");
    if (j.contains("score") && !j["score"].is_null()) c.score = score_delta_from_json(j["score"]);
    return c;
}

json round_json(const RoundView& r)
{
    json cards = json::array();
    for (const auto& c : r.cards) cards.push_back(card_json(c));
    json votes = json::array();
    for (const auto& v : r.votes) votes.push_back({{"voter", v.voter.value}, {"target", v.target.value}});
    json quick = json::array();
    for (const auto& q : r.quick_draws) {
        quick.push_back({{"author", q.author.value},
                         {"prompt", q.prompt},
                         {"status", q.status},
                         {"asset", q.asset}});
    }
    json j{{"index", r.index},
           {"practice", r.practice},
           {"category", to_string(r.category)},
           {"original_status", r.original_status},
           {"original_asset", r.original_asset},
           {"submitted", ids(r.submitted)},
           {"cards", cards},
           {"vote_options", ids(r.vote_options)},
           {"voted", ids(r.voted)},
           {"votes", votes},
           {"abstained", ids(r.abstained)},
           {"no_submission", ids(r.no_submission)},
           {"quick_draw_remaining", r.quick_draw_remaining},
           {"quick_draws", quick}};
    put_opt(j, "original_prompt", r.original_prompt);
    j["own_vote"] = r.own_vote ? json(r.own_vote->value) : json(nullptr);
    return j;
}

RoundView round_from(const json& j)
{
    RoundView r;
    r.index = j.at("index").get<int>();
    r.practice = j.at("practice").get<bool>();
    r.category = category_from_string(j.at("category").get<std::string>());
    r.original_status = j.at("original_status").get<std::string>();
    r.original_asset = j.at("original_asset").get<std::string>();
    r.original_prompt = get_opt<std::string>(j, "original_prompt");
    r.submitted = ids_from(j.at("submitted"));
    for (const auto& c : j.at("cards")) r.cards.push_back(card_from(c));
    r.vote_options = ids_from(j.at("vote_options"));
    if (auto v = get_opt<std::uint32_t>(j, "own_vote")) r.own_vote = PlayerId{*v};
    r.voted = ids_from(j.at("voted"));
    for (const auto& v : j.at("votes")) {
        r.votes.push_back({PlayerId{v.at("voter").get<std::uint32_t>()},
                           PlayerId{v.at("target").get<std::uint32_t>()}});
    }
    r.abstained = ids_from(j.at("abstained"));
    r.no_submission = ids_from(j.at("no_submission"));
    r.quick_draw_remaining = j.at("quick_draw_remaining").get<int>();
    for (const auto& q : j.at("quick_draws")) {
        r.quick_draws.push_back({PlayerId{q.at("author").get<std::uint32_t>()},
                                 q.at("prompt").get<std::string>(), q.at("status").get<std::string>(),
                                 q.at("asset").get<std::string>()});
    }
    return r;
}

}  // namespace

json to_json(const ScoreDelta& d)
{
    return {{"player", d.player.value},
            {"votes", d.votes_received},
            {"penalty", d.penalty},
            {"delta", d.delta}};
}

ScoreDelta score_delta_from_json(const json& j)
{
    return {PlayerId{j.at("player").get<std::uint32_t>()}, j.at("votes").get<int>(),
            j.at("penalty").get<int>(), j.at("delta").get<int>()};
}

json to_json(const SessionView& v)
{
    json players = json::array();
    for (const auto& p : v.players) {
        players.push_back({{"id", p.id.value},
                           {"nickname", p.nickname},
                           {"connected", p.connected},
                           {"ready", p.ready},
                           {"creator", p.creator},
                           {"total", p.total}});
    }
    json history = json::array();
    for (const auto& h : v.history) {
        json entries = json::array();
        for (const auto& e : h.entries) {
            json x{{"player", e.player.value}, {"token_count", e.token_count}, {"score", to_json(e.score)}};
            put_opt(x, "prompt", e.prompt);
            entries.push_back(std::move(x));
        }
        history.push_back({{"index", h.index},
                           {"category", to_string(h.category)},
                           {"original_prompt", h.original_prompt},
                           {"entries", entries}});
    }
    json j{{"session", v.session},
           {"room_code", v.room_code},
           {"viewer", v.viewer.value},
           {"phase", to_string(v.phase)},
           {"round", v.round},
           {"round_count", v.round_count},
           {"prompt_timer_s", v.prompt_timer_s},
           {"vote_timer_s", v.vote_timer_s},
           {"event_seq", v.event_seq},
           {"version", v.version},
           {"pending_generations", v.pending_generations},
           {"players", players},
           {"history", history}};
    put_opt(j, "deadline_ms", v.deadline_ms);
    put_opt(j, "remaining_ms", v.remaining_ms);
    j["current"] = v.current ? round_json(*v.current) : json(nullptr);
    return j;
}

SessionView session_view_from_json(const json& j)
{
    try {
        SessionView v;
        v.session = j.at("session").get<std::string>();
        v.room_code = j.at("room_code").get<std::string>();
        v.viewer = PlayerId{j.at("viewer").get<std::uint32_t>()};
        const auto phase = parse_phase(j.at("phase").get<std::string>());
        if (!phase) throw Error(Errc::parse_error, "unknown phase");
        v.phase = *phase;
        v.round = j.at("round").get<int>();
        v.round_count = j.at("round_count").get<int>();
        v.prompt_timer_s = j.at("prompt_timer_s").get<int>();
        v.vote_timer_s = j.at("vote_timer_s").get<int>();
        v.deadline_ms = get_opt<std::int64_t>(j, "deadline_ms");
        v.remaining_ms = get_opt<std::int64_t>(j, "remaining_ms");
        v.event_seq = j.at("event_seq").get<std::uint64_t>();
        v.version = j.at("version").get<std::uint64_t>();
        v.pending_generations = j.at("pending_generations").get<int>();
        for (const auto& p : j.at("players")) {
            v.players.push_back({PlayerId{p.at("id").get<std::uint32_t>()},
                                 p.at("nickname").get<std::string>(), p.at("connected").get<bool>(),
                                 p.at("ready").get<bool>(), p.at("creator").get<bool>(),
                                 p.at("total").get<int>()});
        }
        if (!j.at("current").is_null()) v.current = round_from(j["current"]);
        for (const auto& h : j.at("history")) {
            RoundSummary s;
            s.index = h.at("index").get<int>();
            s.category = category_from_string(h.at("category").get<std::string>());
            s.original_prompt = h.at("original_prompt").get<std::string>();
            for (const auto& e : h.at("entries")) {
                s.entries.push_back({PlayerId{e.at("player").get<std::uint32_t>()},
                                     get_opt<std::string>(e, "prompt"), e.at("token_count").get<int>(),
                                     score_delta_from_json(e.at("score"))});
            }
            v.history.push_back(std::move(s));
        }
        return v;
    } catch (const json::exception& e) {
        throw Error(Errc::parse_error, e.what());
    }
}

std::string_view to_string(PhaseKind kind) noexcept
{
    switch (kind) {
    case PhaseKind::lobby: return "lobby";
    case PhaseKind::prompting: return "prompting";
    case PhaseKind::generating: return "generating";
    case PhaseKind::voting: return "voting";
    case PhaseKind::reveal: return "reveal";
    case PhaseKind::scoreboard: return "scoreboard";
    case PhaseKind::closed: return "closed";
    }
    return "unknown";
}

std::optional<PhaseKind> parse_phase(std::string_view name) noexcept
{
    for (auto k : {PhaseKind::lobby, PhaseKind::prompting, PhaseKind::generating, PhaseKind::voting,
                   PhaseKind::reveal, PhaseKind::scoreboard, PhaseKind::closed}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

}  // namespace shortprompt::engine
