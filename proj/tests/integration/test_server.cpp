#include "support/memory_sink.hpp"
#include "support/ws_peer.hpp"

#include "shortprompt/gateway/server.hpp"
#include "shortprompt/imaging/png.hpp"
#include "shortprompt/sim/client.hpp"

#include <doctest.h>

using namespace shortprompt;
using nlohmann::json;
using sptest::WsPeer;

namespace {

class SickBackend : public imaging::ImageBackend {
public:
    std::string provider_id() const override { return "sick"; }
    std::string cache_identity(const imaging::GenerationRequest&) const override { return "sick"; }
    imaging::BackendResult render(const imaging::GenerationRequest&, std::chrono::milliseconds) override
    {
        return {{}, imaging::FailureReason::provider_error, "down"};
    }
    bool healthy() override { return false; }
};

struct Server {
    std::shared_ptr<sptest::MemoryLog> mem = std::make_shared<sptest::MemoryLog>();
    std::unique_ptr<gateway::Gateway> gw;

    explicit Server(std::shared_ptr<imaging::ImageBackend> backend = nullptr, bool frozen_clock = false)
    {
        gateway::GatewayOptions opts;
        opts.server.port = 0;
        opts.registry.seed = 3;
        opts.registry.sink_factory = [mem = mem](const std::filesystem::path&) {
            return std::make_unique<sptest::MemorySink>(mem);
        };
        if (frozen_clock) {
            const auto t = std::chrono::steady_clock::now();
            opts.server.clock = [t] { return t; };
        }
        opts.backend = std::move(backend);
        gw = std::make_unique<gateway::Gateway>(std::move(opts));
        gw->start();
    }
    ~Server() { gw->stop(); }

    std::uint16_t port() const { return gw->port(); }

    json create(const json& body = json::object())
    {
        auto r = sim::http_post_json("127.0.0.1", port(), "/sessions", body);
        REQUIRE(r.status == 201);
        return json::parse(r.body);
    }

    std::string join_target(const json& created, const std::string& nickname, bool creator = false)
    {
        std::string t = "/ws?code=" + created["room_code"].get<std::string>() + "&nickname=" + sim::url_encode(nickname);
        if (creator) t += "&creator=" + created["creator_token"].get<std::string>();
        return t;
    }
};

}  // namespace

TEST_CASE("health and session creation over HTTP")
{
    Server s;
    auto health = sim::http_get("127.0.0.1", s.port(), "/healthz");
    CHECK(health.status == 200);

    auto created = s.create({{"prompt_timer_s", 30}});
    CHECK(gateway::is_room_code(created["room_code"].get<std::string>()));
    CHECK(created["session"].get<std::string>().size() == 13);
    CHECK(created["creator_token"].get<std::string>().size() == 32);

    auto bad = sim::http_post_json("127.0.0.1", s.port(), "/sessions", {{"round_count", 3}});
    CHECK(bad.status == 400);
    CHECK(json::parse(bad.body)["error"] == "invalid-config");

    auto unknown_key = sim::http_post_json("127.0.0.1", s.port(), "/sessions", {{"colour", "red"}});
    CHECK(unknown_key.status == 400);

    CHECK(sim::http_get("127.0.0.1", s.port(), "/nowhere").status == 404);
    CHECK(sim::http_get("127.0.0.1", s.port(), "/assets/" + std::string(64, 'a') + ".png").status == 404);
}

TEST_CASE("session creation reports an unhealthy provider as 503")
{
    Server s(std::make_shared<SickBackend>());
    auto r = sim::http_post_json("127.0.0.1", s.port(), "/sessions", json::object());
    CHECK(r.status == 503);
    CHECK(json::parse(r.body)["error"] == "provider-unavailable");
}

TEST_CASE("joining an unknown room gets an error frame and a close")
{
    Server s;
    WsPeer peer(s.port(), "/ws?code=ZZZZZ&nickname=x");
    auto err = peer.expect("error");
    REQUIRE(err);
    CHECK((*err)["payload"]["code"] == "unknown-room");
    CHECK((*err)["payload"]["ref"].is_null());
    CHECK(peer.expect("_closed"));
}

TEST_CASE("draft counts come from the server tokenizer")
{
    Server s;
    auto created = s.create();
    WsPeer a(s.port(), s.join_target(created, "Ann", true));
    REQUIRE(a.expect("welcome"));
    const auto seq = a.send("draft-count-request", {{"text", "a pretty cow"}});
    auto count = a.reply(seq);
    REQUIRE(count);
    CHECK((*count)["type"] == "count");
    CHECK((*count)["payload"]["token_count"] == 3);
    CHECK((*count)["payload"]["text_hash"] == gateway::text_hash("a pretty cow"));

    // WebSocket text frames must be UTF-8; the server drops the connection.
    a.send_raw("{\"type\":\"draft-count-request\",\"seq\":9,\"payload\":{\"text\":\"\xff\"}}");
    CHECK(a.expect("_closed"));
}

TEST_CASE("a burst of count requests is throttled after ten")
{
    Server s(nullptr, true);
    auto created = s.create();
    WsPeer a(s.port(), s.join_target(created, "Ann", true));
    REQUIRE(a.expect("welcome"));
    std::vector<std::uint64_t> seqs;
    for (int i = 0; i < 25; ++i) seqs.push_back(a.send("draft-count-request", {{"text", "cow " + std::to_string(i)}}));
    int counts = 0;
    int throttled = 0;
    for (auto seq : seqs) {
        auto r = a.reply(seq);
        REQUIRE(r);
        if ((*r)["type"] == "count") {
            ++counts;
        } else if ((*r)["payload"]["code"] == "throttled") {
            ++throttled;
        }
    }
    CHECK(counts == 10);
    CHECK(throttled == 15);
}

TEST_CASE("malformed frames are answered without dropping the connection")
{
    Server s;
    auto created = s.create();
    WsPeer a(s.port(), s.join_target(created, "Ann", true));
    REQUIRE(a.expect("welcome"));
    a.send_raw("this is not json");
    auto err = a.expect("error");
    REQUIRE(err);
    CHECK((*err)["payload"]["code"] == "malformed-message");
    a.send_raw(R"({"type":"fly","seq":41})");
    err = a.expect("error");
    REQUIRE(err);
    CHECK((*err)["payload"]["code"] == "unknown-type");
    CHECK((*err)["payload"]["ref"] == 41);

    a.send("snapshot-request");
    auto state = a.expect("state");
    REQUIRE(state);
    CHECK((*state)["payload"]["view"]["phase"] == "lobby");
}

TEST_CASE("a reconnecting player gets a snapshot with the remaining time")
{
    Server s;
    auto created = s.create();
    WsPeer a(s.port(), s.join_target(created, "Ann", true));
    auto welcome_a = a.expect("welcome");
    REQUIRE(welcome_a);
    std::string token;
    {
        WsPeer b(s.port(), s.join_target(created, "Bo"));
        auto welcome = b.expect("welcome");
        REQUIRE(welcome);
        token = (*welcome)["payload"]["token"].get<std::string>();
        CHECK((*welcome)["payload"]["player"] == 2);

        const auto seq = a.send("start-game");
        auto ack = a.reply(seq);
        REQUIRE(ack);
        CHECK((*ack)["type"] == "ack");
        REQUIRE(b.state_where([](const json& v) { return v["phase"] == "prompting"; }));

        const auto sub = b.send("submit-prompt", {{"text", "zq secret words"}});
        REQUIRE(b.reply(sub));
        auto seen_by_a = a.state_where([](const json& v) { return v["current"]["submitted"].size() == 1; });
        REQUIRE(seen_by_a);
        CHECK(seen_by_a->dump().find("zq secret") == std::string::npos);
        b.close();
    }
    REQUIRE(a.state_where([](const json& v) { return v["players"][1]["connected"] == false; }));

    WsPeer back(s.port(), "/ws?code=" + created["room_code"].get<std::string>() + "&token=" + token);
    auto welcome = back.expect("welcome");
    REQUIRE(welcome);
    const auto& view = (*welcome)["payload"]["view"];
    CHECK((*welcome)["payload"]["player"] == 2);
    CHECK(view["viewer"] == 2);
    CHECK(view["phase"] == "prompting");
    REQUIRE(view["remaining_ms"].is_number());
    CHECK(view["remaining_ms"].get<std::int64_t>() > 0);
    CHECK(view["remaining_ms"].get<std::int64_t>() <= 70000);
    CHECK(view["players"][1]["connected"] == true);
    CHECK(view["current"]["submitted"].size() == 1);

    // The original is fetchable and carries its prompt.
    const auto asset = view["current"]["original_asset"].get<std::string>();
    if (!asset.empty()) {
        auto png = sim::http_get("127.0.0.1", s.port(), "/assets/" + asset + ".png");
        CHECK(png.status == 200);
        auto img = imaging::decode_png(std::span(reinterpret_cast<const std::uint8_t*>(png.body.data()), png.body.size()));
        CHECK_FALSE(img.text["prompt"].empty());
    }
}

TEST_CASE("state frames carry the event seq and per-connection frame numbers")
{
    Server s;
    auto created = s.create();
    WsPeer a(s.port(), s.join_target(created, "Ann", true));
    REQUIRE(a.expect("welcome"));
    WsPeer b(s.port(), s.join_target(created, "Bo"));
    REQUIRE(b.expect("welcome"));
    auto state = a.expect("state");
    REQUIRE(state);
    CHECK((*state)["session"] == created["session"]);
    CHECK((*state)["payload"]["event_seq"].get<std::uint64_t>() >= 2);
    std::uint64_t last = 0;
    for (const auto& f : a.seen) {
        CHECK(f["seq"].get<std::uint64_t>() == last + 1);
        last = f["seq"].get<std::uint64_t>();
    }
    // Persisted before it was sent.
    CHECK(s.mem->size() - 1 >= (*state)["payload"]["event_seq"].get<std::size_t>());
}
