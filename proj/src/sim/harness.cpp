#include "shortprompt/sim/harness.hpp"

#include "shortprompt/core/errors.hpp"
#include "shortprompt/core/random.hpp"
#include "shortprompt/gateway/event_log.hpp"
#include "shortprompt/gateway/server.hpp"
#include "shortprompt/imaging/png.hpp"
#include "shortprompt/sim/client.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace shortprompt::sim {

using nlohmann::json;

std::string bot_nickname(BotKind kind, std::size_t index)
{
    return std::string(to_string(kind)) + "-" + std::to_string(index + 1);
}

namespace {

struct Action {
    std::string type;
    json payload = json::object();
    std::optional<Errc> expect{};  // deliberate violation
};

struct RoundMemory {
    std::optional<std::pair<int, bool>> key;  // (index, practice)
    std::string original;
    std::optional<imaging::PngImage> original_png;
    std::map<std::string, double> distance;  // asset -> distance
    bool drafted = false;
    bool resubmitted = false;
    bool self_voted = false;
    std::size_t quick_attempts = 0;
    bool ready = false;
};

struct Bot {
    BotKind kind;
    std::string nickname;
    std::uint64_t seed = 0;
    std::unique_ptr<WsClient> ws;
    std::optional<PlayerId> id;
    json view;
    std::uint64_t version = 0;
    std::vector<std::pair<std::uint64_t, Clock::time_point>> history;
    std::map<std::uint64_t, json> replies;  // ref -> ack/error/count frame
    bool closed = false;
    RoundMemory round;
};

[[noreturn]] void fail_with(const json& payload)
{
    const auto code = parse_errc(payload.value("code", ""));
    throw Error(code.value_or(Errc::malformed_message), payload.value("detail", ""));
}

std::vector<PlayerId> ids_of(const json& arr)
{
    std::vector<PlayerId> out;
    for (const auto& v : arr) out.push_back(PlayerId{v.get<std::uint32_t>()});
    return out;
}

bool contains(const json& arr, PlayerId id)
{
    return std::any_of(arr.begin(), arr.end(), [&](const json& v) { return v.get<std::uint32_t>() == id.value; });
}

double image_distance(const imaging::PngImage& a, const imaging::PngImage& b)
{
    if (a.width != b.width || a.height != b.height || a.rgb.empty()) return 255.0;
    double sum = 0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) sum += std::abs(int(a.rgb[i]) - int(b.rgb[i]));
    return sum / static_cast<double>(a.rgb.size());
}

class Run {
public:
    explicit Run(const SimOptions& options) : options_(options) {}

    SimResult go();

private:
    const SimOptions& options_;
    std::unique_ptr<gateway::Gateway> gateway_;
    std::string host_ = "127.0.0.1";
    std::uint16_t port_ = 0;
    Inbox inbox_;
    std::vector<Bot> bots_;
    std::shared_ptr<const tokenizer::Tokenizer> tokenizer_;
    SimResult result_;
    bool start_sent_ = false;
    bool ended_ = false;

    void handle(const Frame& f);
    void await(const std::function<bool()>& done, const std::string& what);
    bool quiescent(std::uint64_t target) const;
    imaging::PngImage fetch(const std::string& asset);
    void sync_round(Bot& bot);
    std::optional<Action> decide(std::size_t index);
    void perform(Bot& bot, const Action& action);
};

void Run::handle(const Frame& f)
{
    auto& bot = bots_.at(static_cast<std::size_t>(f.client));
    const auto type = f.body.value("type", "");
    const json payload = f.body.value("payload", json::object());
    if (type == "welcome") {
        bot.id = PlayerId{payload.at("player").get<std::uint32_t>()};
        bot.view = payload.at("view");
        bot.version = bot.view.at("version").get<std::uint64_t>();
        bot.history.emplace_back(bot.version, f.arrived);
    } else if (type == "state") {
        bot.view = payload.at("view");
        bot.version = payload.at("version").get<std::uint64_t>();
        bot.history.emplace_back(bot.version, f.arrived);
    } else if (type == "ack" || type == "count" || type == "error") {
        if (!payload.contains("ref") || payload["ref"].is_null()) {
            if (type == "error") fail_with(payload);
            return;
        }
        json reply = payload;
        reply["_type"] = type;
        bot.replies[payload["ref"].get<std::uint64_t>()] = std::move(reply);
    } else if (type == "session-ended") {
        ended_ = true;
        result_.end_reason = payload.value("reason", "");
    } else if (type == "_closed") {
        bot.closed = true;
    }
}

void Run::await(const std::function<bool()>& done, const std::string& what)
{
    const auto deadline = Clock::now() + options_.action_timeout;
    while (!done()) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
        if (left.count() <= 0) {
            throw std::runtime_error("simulation timed out waiting for " + what);
        }
        if (auto f = inbox_.pop(left)) handle(*f);
    }
}

bool Run::quiescent(std::uint64_t target) const
{
    std::optional<std::uint64_t> seen;
    for (const auto& b : bots_) {
        if (b.closed || !b.id) continue;
        if (b.version < target) return false;
        if (seen && *seen != b.version) return false;
        seen = b.version;
        if (b.view.value("pending_generations", 0) != 0) return false;
    }
    return true;
}

imaging::PngImage Run::fetch(const std::string& asset)
{
    auto r = http_get(host_, port_, "/assets/" + asset + ".png");
    if (r.status != 200) {
        throw std::runtime_error("asset " + asset + " answered " + std::to_string(r.status));
    }
    return imaging::decode_png(
        std::span(reinterpret_cast<const std::uint8_t*>(r.body.data()), r.body.size()));
}

void Run::sync_round(Bot& bot)
{
    const auto& cur = bot.view.at("current");
    const std::pair key{cur.at("index").get<int>(), cur.at("practice").get<bool>()};
    if (bot.round.key == key) return;
    bot.round = RoundMemory{};
    bot.round.key = key;
    if (cur.at("original_status") == "success") {
        auto png = fetch(cur.at("original_asset").get<std::string>());
        bot.round.original = png.text["prompt"];
        bot.round.original_png = std::move(png);
    }
    if (bot.round.original.empty()) {
        // No readable original: fall back to the category name.
        bot.round.original = cur.at("category").get<std::string>();
    }
}

std::optional<Action> Run::decide(std::size_t index)
{
    auto& bot = bots_[index];
    if (bot.closed || !bot.id) return std::nullopt;
    const auto phase = bot.view.value("phase", "");
    const auto me = *bot.id;

    if (phase == "lobby") {
        if (index == 0 && !start_sent_) {
            start_sent_ = true;
            return Action{"start-game"};
        }
        return std::nullopt;
    }
    if (!bot.view.contains("current") || bot.view["current"].is_null()) return std::nullopt;
    sync_round(bot);
    const auto& cur = bot.view["current"];
    auto& mem = bot.round;
    const int round = cur.at("index").get<int>() + (cur.at("practice").get<bool>() ? 1000 : 0);

    if (phase == "prompting") {
        const auto text = choose_prompt(bot.kind, mem.original, round, bot.seed);
        if (!contains(cur.at("submitted"), me)) {
            if (!mem.drafted) {
                mem.drafted = true;
                return Action{"draft-count-request", {{"text", text}}};
            }
            return Action{"submit-prompt", {{"text", text}}};
        }
        if (bot.kind == BotKind::adversarial && !mem.resubmitted) {
            mem.resubmitted = true;
            return Action{"submit-prompt", {{"text", text}}, Errc::already_submitted};
        }
        return std::nullopt;
    }
    if (phase == "voting") {
        const auto options = ids_of(cur.at("vote_options"));
        if (options.empty() || !cur.at("own_vote").is_null() || contains(cur.at("abstained"), me)) {
            return std::nullopt;
        }
        if (bot.kind == BotKind::adversarial && !mem.self_voted) {
            mem.self_voted = true;
            return Action{"cast-vote", {{"target", me.value}}, Errc::self_vote};
        }
        std::vector<double> distance;
        if (inspects_images(bot.kind) && mem.original_png) {
            for (auto option : options) {
                std::string asset;
                for (const auto& card : cur.at("cards")) {
                    if (card.at("player").get<std::uint32_t>() == option.value) asset = card.value("asset", "");
                }
                auto it = mem.distance.find(asset);
                if (it == mem.distance.end()) {
                    const double d = asset.empty() ? 255.0 : image_distance(*mem.original_png, fetch(asset));
                    it = mem.distance.emplace(asset, d).first;
                }
                distance.push_back(it->second);
            }
        }
        const auto target = choose_vote(bot.kind, options, distance, round, bot.seed);
        return Action{"cast-vote", {{"target", target.value}}};
    }
    if (phase == "reveal") {
        const auto prompts = quick_draw_prompts(bot.kind, mem.original, round, bot.seed);
        if (mem.quick_attempts < prompts.size()) {
            const auto& text = prompts[mem.quick_attempts++];
            std::optional<Errc> expect;
            if (cur.value("quick_draw_remaining", 0) <= 0) expect = Errc::quick_draw_budget_exhausted;
            return Action{"quick-draw", {{"text", text}}, expect};
        }
        if (!mem.ready) {
            mem.ready = true;
            return Action{"ready", {{"ready", true}}};
        }
    }
    return std::nullopt;
}

void Run::perform(Bot& bot, const Action& action)
{
    for (auto& b : bots_) b.history.clear();
    const auto before = bot.version;
    const std::uint64_t seq = bot.replies.empty() ? 1 : bot.replies.rbegin()->first + 1;
    bot.replies[seq] = json();  // reserved until the reply lands
    const auto sent = bot.ws->send({{"type", action.type}, {"seq", seq}, {"payload", action.payload}});
    await([&] { return !bot.replies[seq].is_null() || bot.closed; }, action.type + " reply");
    const json reply = bot.replies[seq];
    if (reply.is_null()) {
        throw std::runtime_error(bot.nickname + " lost its connection");
    }
    const auto kind = reply.value("_type", "");

    if (kind == "error") {
        if (action.expect && reply.value("code", "") == to_string(*action.expect)) {
            ++result_.provoked_errors[std::string(to_string(*action.expect))];
            return;
        }
        fail_with(reply);
    }
    if (action.expect) {
        throw std::runtime_error(bot.nickname + ": " + action.type + " was accepted, expected " +
                                 std::string(to_string(*action.expect)));
    }
    if (kind == "count") {
        const auto expected = tokenizer_->count(action.payload.at("text").get<std::string>());
        if (reply.at("token_count").get<std::size_t>() != expected) {
            throw std::runtime_error("server token count disagrees for \"" +
                                     action.payload.at("text").get<std::string>() + "\"");
        }
        return;
    }
    const auto target = reply.at("version").get<std::uint64_t>();
    await([&] { return ended_ ? quiescent(0) : quiescent(target); }, action.type + " broadcast");
    if (target <= before) return;
    Clock::time_point last = sent;
    for (const auto& b : bots_) {
        if (b.closed) continue;
        for (const auto& [v, at] : b.history) {
            if (v >= target) {
                last = std::max(last, at);
                break;
            }
        }
    }
    result_.samples.push_back({action.type, std::chrono::duration<double, std::milli>(last - sent).count()});
}

SimResult Run::go()
{
    const auto t0 = Clock::now();
    if (options_.roster.empty()) {
        throw Error(Errc::not_enough_players, "empty roster");
    }

    gateway::GatewayOptions gopts;
    gopts.server.port = 0;
    gopts.registry.log_dir = options_.log_dir;
    gopts.registry.seed = options_.seed;
    gopts.registry.sink_factory = [](const std::filesystem::path& path) {
        // Reruns with the same seed reuse the session id; the newest run wins.
        std::error_code ec;
        std::filesystem::remove(path, ec);
        return std::make_unique<gateway::FileSink>(path);
    };
    gopts.pool = options_.pool;
    gateway_ = std::make_unique<gateway::Gateway>(std::move(gopts));
    gateway_->start();
    port_ = gateway_->port();

    engine::SessionConfig config = options_.config;
    config.seed = options_.seed;
    tokenizer_ = tokenizer::TokenizerRegistry().resolve(config.tokenizer);

    auto created = http_post_json(host_, port_, "/sessions", engine::to_json(config));
    const json body = json::parse(created.body, nullptr, false);
    if (created.status != 201) {
        const auto code = body.is_object() ? parse_errc(body.value("error", "")) : std::nullopt;
        throw Error(code.value_or(Errc::invalid_config), body.is_object() ? body.value("detail", "") : created.body);
    }
    result_.session = body.at("session").get<std::string>();
    result_.room_code = body.at("room_code").get<std::string>();
    result_.log_path = options_.log_dir / (result_.session + ".jsonl");

    bots_.resize(options_.roster.size());
    for (std::size_t i = 0; i < bots_.size(); ++i) {
        auto& bot = bots_[i];
        bot.kind = options_.roster[i];
        bot.nickname = bot_nickname(bot.kind, i);
        bot.seed = mix_seed(options_.seed, i + 1);
        bot.ws = std::make_unique<WsClient>(inbox_, static_cast<int>(i));
        std::string target = "/ws?code=" + result_.room_code + "&nickname=" + url_encode(bot.nickname);
        if (i == 0) target += "&creator=" + url_encode(body.at("creator_token").get<std::string>());
        bot.ws->connect(host_, port_, target);
        await([&] { return bot.id.has_value() || bot.closed; }, bot.nickname + " welcome");
        if (!bot.id) throw std::runtime_error(bot.nickname + " was refused");
        await([&] { return quiescent(bot.version); }, bot.nickname + " join broadcast");
    }

    while (!ended_) {
        std::optional<std::pair<std::size_t, Action>> next;
        for (std::size_t i = 0; i < bots_.size() && !next; ++i) {
            if (auto a = decide(i)) next.emplace(i, std::move(*a));
        }
        if (!next) {
            throw std::runtime_error("simulation stalled in phase " + bots_[0].view.value("phase", "?"));
        }
        perform(bots_[next->first], next->second);
    }

    const auto& final_view = bots_[0].view;
    for (const auto& p : final_view.at("players")) {
        result_.totals[p.at("nickname").get<std::string>()] = p.at("total").get<int>();
    }
    result_.rounds_played = static_cast<int>(final_view.at("history").size());

    for (auto& b : bots_) b.ws.reset();
    gateway_->stop();
    gateway_.reset();
    result_.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
    return std::move(result_);
}

}  // namespace

SimResult run_simulation(const SimOptions& options)
{
    Run run(options);
    return run.go();
}

}  // namespace shortprompt::sim
