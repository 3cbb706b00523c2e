#include "shortprompt/engine/config.hpp"

#include "shortprompt/core/category.hpp"
#include "shortprompt/core/errors.hpp"
#include "shortprompt/core/utf8.hpp"

#include <set>

namespace shortprompt::engine {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& detail)
{
    throw Error(Errc::invalid_config, detail);
}

int get_int(const json& j, const char* key)
{
    const auto& v = j.at(key);
    if (!v.is_number_integer()) {
        bad(std::string(key) + " must be an integer");
    }
    const auto wide = v.get<std::int64_t>();
    if (wide < -1'000'000 || wide > 1'000'000) {
        bad(std::string(key) + " out of range");
    }
    return static_cast<int>(wide);
}

std::uint64_t get_u64(const json& j, const char* key)
{
    const auto& v = j.at(key);
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        bad(std::string(key) + " must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
}

std::string get_string(const json& j, const char* key)
{
    const auto& v = j.at(key);
    if (!v.is_string()) {
        bad(std::string(key) + " must be a string");
    }
    return v.get<std::string>();
}

void only_keys(const json& j, std::initializer_list<std::string_view> allowed, const char* where)
{
    if (!j.is_object()) {
        bad(std::string(where) + " must be an object");
    }
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto a : allowed) {
            known = known || a == key;
        }
        if (!known) {
            bad("unknown key " + key + " in " + where);
        }
    }
}

}  // namespace

void validate(const SessionConfig& c)
{
    if (c.prompt_timer_s <= 0 || c.vote_timer_s <= 0) {
        bad("timers must be positive");
    }
    if (c.max_players < 2 || c.max_players > kMaxPlayersLimit) {
        bad("max_players must be in [2, " + std::to_string(kMaxPlayersLimit) + "]");
    }
    if (c.tokenizer.id.empty()) {
        bad("tokenizer id must be set");
    }
    if (c.provider_id.empty()) {
        bad("provider id must be set");
    }
    if (c.custom_plan.empty()) {
        if (c.round_count != static_cast<int>(kCategoryCount)) {
            bad("round_count must be " + std::to_string(kCategoryCount) +
                " without a custom plan");
        }
        return;
    }
    if (c.round_count != static_cast<int>(c.custom_plan.size())) {
        bad("round_count must equal the custom plan size");
    }
    for (std::size_t i = 0; i < c.custom_plan.size(); ++i) {
        const auto& r = c.custom_plan[i];
        if (r.index != static_cast<int>(i) + 1) {
            bad("custom plan indices must run 1..n");
        }
        if (utf8::trim(r.original_prompt).empty()) {
            bad("custom plan prompt must be non-empty");
        }
    }
}

json to_json(const RoundSpec& r)
{
    json j{{"index", r.index},
           {"category", to_string(r.category)},
           {"prompt", r.original_prompt}};
    if (!r.original_image.empty()) {
        j["image"] = r.original_image;
    }
    return j;
}

RoundSpec round_spec_from_json(const json& j)
{
    only_keys(j, {"index", "category", "prompt", "image"}, "plan entry");
    RoundSpec r;
    try {
        r.index = get_int(j, "index");
        r.category = category_from_string(get_string(j, "category"));
        r.original_prompt = get_string(j, "prompt");
        if (j.contains("image") && !j["image"].is_null()) {
            r.original_image = get_string(j, "image");
        }
    } catch (const json::exception& e) {
        bad(e.what());
    } catch (const Error& e) {
        if (e.code() == Errc::invalid_config) {
            throw;
        }
        bad(e.what());
    }
    if (!utf8::is_valid(r.original_prompt)) {
        bad("plan prompt is not valid UTF-8");
    }
    return r;
}

SessionConfig parse_session_config(const json& body, const SessionConfig& defaults)
{
    SessionConfig c = defaults;
    if (body.is_null()) {
        validate(c);
        return c;
    }
    only_keys(body,
              {"round_count", "prompt_timer_s", "vote_timer_s", "max_players", "tokenizer",
               "provider", "seed", "practice_round", "plan"},
              "config");
    try {
        if (body.contains("round_count")) c.round_count = get_int(body, "round_count");
        if (body.contains("prompt_timer_s")) c.prompt_timer_s = get_int(body, "prompt_timer_s");
        if (body.contains("vote_timer_s")) c.vote_timer_s = get_int(body, "vote_timer_s");
        if (body.contains("max_players")) c.max_players = get_int(body, "max_players");
        if (body.contains("seed")) c.seed = get_u64(body, "seed");
        if (body.contains("practice_round")) {
            if (!body["practice_round"].is_boolean()) bad("practice_round must be a boolean");
            c.practice_round = body["practice_round"].get<bool>();
        }
        if (body.contains("tokenizer")) {
            const auto& t = body["tokenizer"];
            only_keys(t, {"id", "version"}, "tokenizer");
            c.tokenizer.id = get_string(t, "id");
            c.tokenizer.version = t.contains("version") ? get_string(t, "version") : "1";
        }
        if (body.contains("provider")) {
            const auto& p = body["provider"];
            only_keys(p, {"id", "seed"}, "provider");
            if (p.contains("id")) c.provider_id = get_string(p, "id");
            if (p.contains("seed")) c.provider_seed = get_u64(p, "seed");
        }
        if (body.contains("plan")) {
            const auto& plan = body["plan"];
            if (!plan.is_array()) bad("plan must be an array");
            c.custom_plan.clear();
            for (const auto& entry : plan) {
                c.custom_plan.push_back(round_spec_from_json(entry));
            }
            if (!body.contains("round_count")) {
                c.round_count = static_cast<int>(c.custom_plan.size());
            }
        }
    } catch (const json::exception& e) {
        bad(e.what());
    }
    validate(c);
    return c;
}

json to_json(const SessionConfig& c)
{
    json j{{"round_count", c.round_count},
           {"prompt_timer_s", c.prompt_timer_s},
           {"vote_timer_s", c.vote_timer_s},
           {"max_players", c.max_players},
           {"tokenizer", {{"id", c.tokenizer.id}, {"version", c.tokenizer.version}}},
           {"provider", {{"id", c.provider_id}, {"seed", c.effective_provider_seed()}}},
           {"seed", c.seed},
           {"practice_round", c.practice_round}};
    if (!c.custom_plan.empty()) {
        json plan = json::array();
        for (const auto& r : c.custom_plan) {
            plan.push_back(to_json(r));
        }
        j["plan"] = std::move(plan);
    }
    return j;
}

}  // namespace shortprompt::engine
