#include "shortprompt/sim/replay.hpp"

#include "shortprompt/core/errors.hpp"
#include "shortprompt/engine/events.hpp"
#include "shortprompt/engine/view.hpp"
#include "shortprompt/tokenizer/tokenizer.hpp"

#include <fstream>
#include <istream>

namespace shortprompt::sim {

using nlohmann::json;
using engine::EventKind;

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what)
{
    throw Error(Errc::parse_error, "line " + std::to_string(line) + ": " + what);
}

PlayerId pid(const json& j)
{
    return PlayerId{j.get<std::uint32_t>()};
}

std::string describe(const RoundScores& scores)
{
    std::string out;
    for (const auto& [p, d] : scores) {
        if (!out.empty()) out += ' ';
        out += to_string(p) + "=" + std::to_string(d.delta);
    }
    return out;
}

}  // namespace

ReplayReport replay(std::istream& in, const tokenizer::TokenizerRegistry& tokenizers)
{
    ReplayReport report;
    std::string text;
    std::size_t line = 0;

    if (!std::getline(in, text)) {
        parse_fail(1, "empty log");
    }
    ++line;
    report.header = json::parse(text, nullptr, false);
    if (report.header.is_discarded() || !report.header.is_object() ||
        report.header.value("type", "") != "header") {
        parse_fail(line, "missing header record");
    }
    if (report.header.value("version", -1) != kLogVersion) {
        throw Error(Errc::unsupported_version, "log version " + report.header.value("version", json()).dump());
    }

    std::shared_ptr<const tokenizer::Tokenizer> tok;
    try {
        const auto& t = report.header.at("tokenizer");
        tok = tokenizers.resolve({t.at("id").get<std::string>(), t.at("version").get<std::string>()});
    } catch (const Error& e) {
        report.mismatches.push_back({0, "cannot recount tokens: " + e.detail()});
    } catch (const json::exception&) {
        parse_fail(1, "header lacks tokenizer spec");
    }

    std::uint64_t expected_seq = 1;
    RoundRecord* current = nullptr;
    auto round_by_index = [&](int index) -> RoundRecord* {
        for (auto& r : report.rounds) {
            if (r.index == index) return &r;
        }
        return nullptr;
    };

    while (std::getline(in, text)) {
        ++line;
        if (text.empty()) continue;
        const json j = json::parse(text, nullptr, false);
        if (j.is_discarded()) parse_fail(line, "invalid JSON");
        engine::GameEvent e;
        try {
            e = engine::event_from_json(j);
        } catch (const Error& err) {
            parse_fail(line, err.detail());
        }
        ++report.events;
        const int here = current ? current->index : 0;
        if (e.seq != expected_seq) {
            report.mismatches.push_back({here, "seq gap: expected " + std::to_string(expected_seq) + ", found " +
                                                   std::to_string(e.seq)});
        }
        expected_seq = e.seq + 1;

        const auto& p = e.payload;
        try {
            switch (e.kind) {
            case EventKind::player_joined: {
                const auto id = pid(p.at("player"));
                report.players.push_back(id);
                report.nicknames[id] = p.at("nickname").get<std::string>();
                break;
            }
            case EventKind::round_started: {
                RoundRecord r;
                r.index = p.at("round").get<int>();
                r.category = category_from_string(p.at("category").get<std::string>());
                r.practice = p.at("practice").get<bool>();
                report.rounds.push_back(std::move(r));
                current = &report.rounds.back();
                break;
            }
            case EventKind::prompt_submitted: {
                auto* r = round_by_index(p.at("round").get<int>());
                if (!r) parse_fail(line, "prompt for unknown round");
                PromptSubmission s{pid(p.at("player")), p.at("text").get<std::string>(),
                                   p.at("token_count").get<int>(), e.mono_ms, p.at("auto_submitted").get<bool>()};
                if (tok) {
                    const auto recount = static_cast<int>(tok->count(s.text));
                    if (recount != s.token_count) {
                        report.mismatches.push_back({r->index, "token_count for " + to_string(s.player) + " logged " +
                                                                   std::to_string(s.token_count) + ", recounted " +
                                                                   std::to_string(recount)});
                    }
                }
                r->submissions.push_back(std::move(s));
                break;
            }
            case EventKind::generation_issued:
                if (p.at("kind") == "main") {
                    if (auto* r = round_by_index(p.at("round").get<int>())) ++r->main_issued;
                }
                break;
            case EventKind::quick_draw_issued:
                if (auto* r = round_by_index(p.at("round").get<int>())) ++r->quick_issued;
                break;
            case EventKind::generation_resolved:
                if (p.at("kind") == "main") {
                    auto* r = round_by_index(p.at("round").get<int>());
                    if (!r) parse_fail(line, "image for unknown round");
                    r->main_outcomes[pid(p.at("player"))] =
                        p.at("status") == "success" ? ImageOutcome::success : ImageOutcome::failed;
                }
                break;
            case EventKind::vote_cast: {
                auto* r = round_by_index(p.at("round").get<int>());
                if (!r) parse_fail(line, "vote for unknown round");
                r->votes.push_back({pid(p.at("voter")), pid(p.at("target"))});
                break;
            }
            case EventKind::round_scored: {
                auto* r = round_by_index(p.at("round").get<int>());
                if (!r) parse_fail(line, "score for unknown round");
                RoundScores logged;
                for (const auto& d : p.at("deltas")) {
                    const auto delta = engine::score_delta_from_json(d);
                    logged[delta.player] = delta;
                }
                r->logged = std::move(logged);
                report.logged_totals.clear();
                for (const auto& t : p.at("totals")) report.logged_totals[pid(t.at("player"))] = t.at("total").get<int>();
                break;
            }
            case EventKind::session_ended: {
                report.end_reason = p.at("reason").get<std::string>();
                if (*report.end_reason == "completed") {
                    std::map<PlayerId, int> totals;
                    for (const auto& t : p.at("totals")) totals[pid(t.at("player"))] = t.at("total").get<int>();
                    report.logged_totals = totals;
                }
                break;
            }
            default: break;
            }
        } catch (const json::exception& ex) {
            parse_fail(line, ex.what());
        } catch (const Error& err) {
            if (err.code() == Errc::parse_error) throw;
            parse_fail(line, err.what());
        }
    }

    // Independent recomputation, round by round.
    std::vector<RoundScores> recomputed;
    for (const auto& r : report.rounds) {
        if (r.practice) continue;
        if (!r.logged) {
            if (report.end_reason == "completed") {
                report.mismatches.push_back({r.index, "round has no round-scored event"});
            }
            continue;
        }
        std::map<PlayerId, ImageOutcome> outcomes;
        for (auto id : report.players) outcomes[id] = ImageOutcome::none;
        for (const auto& [id, o] : r.main_outcomes) outcomes[id] = o;
        try {
            auto scores = compute_round_scores(r.submissions, r.votes, outcomes);
            if (scores != *r.logged) {
                report.mismatches.push_back(
                    {r.index, "recomputed " + describe(scores) + " but logged " + describe(*r.logged)});
            }
            recomputed.push_back(std::move(scores));
        } catch (const Error& err) {
            report.mismatches.push_back({r.index, std::string("round data rejected: ") + err.what()});
        }
    }
    try {
        report.recomputed = accumulate_scoreboard(recomputed);
    } catch (const Error& err) {
        report.mismatches.push_back({0, std::string("cannot accumulate: ") + err.what()});
    }
    if (!report.logged_totals.empty() && report.ok()) {
        for (const auto& [id, total] : report.logged_totals) {
            auto it = report.recomputed.totals.find(id);
            const int mine = it == report.recomputed.totals.end() ? 0 : it->second;
            if (mine != total) {
                report.mismatches.push_back({0, "total for " + to_string(id) + " logged " + std::to_string(total) +
                                                    ", recomputed " + std::to_string(mine)});
            }
        }
    }
    return report;
}

ReplayReport replay_file(const std::filesystem::path& path, const tokenizer::TokenizerRegistry& tokenizers)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::parse_error, "cannot open " + path.string());
    }
    return replay(in, tokenizers);
}

json to_json(const ReplayReport& r)
{
    json mismatches = json::array();
    for (const auto& m : r.mismatches) mismatches.push_back({{"round", m.round}, {"detail", m.detail}});
    json rounds = json::array();
    for (const auto& [index, scores] : r.recomputed.per_round) {
        json deltas = json::array();
        for (const auto& [_, d] : scores) deltas.push_back(engine::to_json(d));
        rounds.push_back({{"round", index}, {"deltas", deltas}});
    }
    json totals = json::array();
    for (const auto& [id, t] : r.recomputed.totals) {
        totals.push_back({{"player", id.value}, {"nickname", r.nicknames.count(id) ? r.nicknames.at(id) : ""}, {"total", t}});
    }
    return {{"session", r.header.value("session", "")},
            {"events", r.events},
            {"end_reason", r.end_reason ? json(*r.end_reason) : json(nullptr)},
            {"ok", r.ok()},
            {"mismatches", mismatches},
            {"rounds", rounds},
            {"totals", totals}};
}

}  // namespace shortprompt::sim
