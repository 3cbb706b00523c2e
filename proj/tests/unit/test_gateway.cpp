#include "support/memory_sink.hpp"

#include "shortprompt/gateway/event_log.hpp"
#include "shortprompt/gateway/protocol.hpp"
#include "shortprompt/gateway/rate_limiter.hpp"
#include "shortprompt/gateway/registry.hpp"
#include "shortprompt/gateway/room_codes.hpp"
#include "shortprompt/imaging/backend.hpp"

#include <boost/asio/executor_work_guard.hpp>
#include <boost/asio/io_context.hpp>
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

using namespace shortprompt;
using namespace shortprompt::gateway;
using nlohmann::json;

TEST_CASE("client frames parse into messages")
{
    auto ok = parse_client_message(R"({"type":"submit-prompt","seq":4,"payload":{"text":"a cow"}})");
    REQUIRE(ok.message);
    CHECK(ok.message->type == ClientType::submit_prompt);
    CHECK(ok.message->seq == 4);
    CHECK(ok.message->text == "a cow");

    auto vote = parse_client_message(R"({"type":"cast-vote","seq":5,"payload":{"target":2}})");
    REQUIRE(vote.message);
    CHECK(vote.message->target == PlayerId{2});

    auto snap = parse_client_message(R"({"type":"snapshot-request","seq":1})");
    REQUIRE(snap.message);
    CHECK(snap.message->type == ClientType::snapshot_request);

    // Round trip through the encoder.
    ClientMessage m;
    m.type = ClientType::quick_draw;
    m.seq = 9;
    m.text = "one more";
    auto back = parse_client_message(client_frame(m).dump());
    REQUIRE(back.message);
    CHECK(back.message->text == "one more");
}

TEST_CASE("bad client frames are classified")
{
    auto garbage = parse_client_message("{not json");
    CHECK_FALSE(garbage.message);
    CHECK(garbage.code == Errc::malformed_message);
    CHECK_FALSE(garbage.ref);

    auto array = parse_client_message("[1,2]");
    CHECK(array.code == Errc::malformed_message);

    auto unknown = parse_client_message(R"({"type":"teleport","seq":3})");
    CHECK(unknown.code == Errc::unknown_type);
    CHECK(unknown.ref == 3u);

    auto negative = parse_client_message(R"({"type":"ready","seq":-1})");
    CHECK(negative.code == Errc::malformed_message);

    auto no_target = parse_client_message(R"({"type":"cast-vote","seq":2,"payload":{}})");
    CHECK(no_target.code == Errc::malformed_message);
    CHECK(no_target.ref == 2u);

    const std::string huge = R"({"type":"submit-prompt","seq":1,"payload":{"text":")" +
                             std::string(kMaxFrameBytes, 'a') + "\"}}";
    CHECK(parse_client_message(huge).code == Errc::malformed_message);
}

TEST_CASE("server frames and error payloads have the documented shape")
{
    auto f = server_frame("ack", "s1", 7, {{"ref", 3}});
    CHECK(f["type"] == "ack");
    CHECK(f["session"] == "s1");
    CHECK(f["seq"] == 7);
    CHECK(f["payload"]["ref"] == 3);

    auto e = error_payload(std::nullopt, Errc::self_vote, "no");
    CHECK(e["ref"].is_null());
    CHECK(e["code"] == "self-vote");
    CHECK(text_hash("a pretty cow").size() == 16);
    CHECK(text_hash("a pretty cow") != text_hash("a pretty cow "));
}

TEST_CASE("room codes use the unambiguous alphabet and do not repeat")
{
    RoomCodeGenerator gen(42);
    std::set<std::string> seen;
    for (int i = 0; i < 2000; ++i) {
        auto code = gen.next([&](std::string_view c) { return seen.contains(std::string(c)); });
        CHECK(code.size() == static_cast<std::size_t>(kRoomCodeLength));
        CHECK(is_room_code(code));
        CHECK(code.find_first_of("01OI") == std::string::npos);
        CHECK(seen.insert(code).second);
    }
    CHECK_FALSE(is_room_code("AB"));
    CHECK_FALSE(is_room_code("ABCDEFG"));
    CHECK_FALSE(is_room_code("ABC0E"));
    CHECK(is_room_code("ABCD"));

    RoomCodeGenerator a(7), b(7);
    auto never = [](std::string_view) { return false; };
    CHECK(a.next(never) == b.next(never));
}

TEST_CASE("count requests are capped at ten per second")
{
    auto now = std::chrono::steady_clock::time_point{};
    RateLimiter limiter(10, std::chrono::seconds(1), [&] { return now; });
    int admitted = 0;
    int throttled = 0;
    // 25 requests spread over 960 ms.
    for (int i = 0; i < 25; ++i) {
        (limiter.admit() ? admitted : throttled)++;
        if (i < 10) {
            CHECK(admitted == i + 1);
        }
        now += std::chrono::milliseconds(40);
    }
    CHECK(admitted == 10);
    CHECK(throttled == 15);
    now += std::chrono::seconds(1);
    CHECK(limiter.admit());
}

namespace {

engine::GameEvent event(std::uint64_t seq)
{
    engine::GameEvent e;
    e.seq = seq;
    e.mono_ms = static_cast<std::int64_t>(seq) * 10;
    e.kind = engine::EventKind::player_joined;
    e.payload = {{"player", 1}, {"nickname", "A"}, {"creator", true}};
    return e;
}

}  // namespace

TEST_CASE("event log enforces order and stays failed")
{
    auto mem = std::make_shared<sptest::MemoryLog>();
    EventLog log(std::make_unique<sptest::MemorySink>(mem), {{"type", "header"}, {"version", 1}});
    CHECK(mem->size() == 1);
    log.append(event(1), "2026-01-01T00:00:00.000Z");
    CHECK(log.last_seq() == 1);

    try {
        log.append(event(3), "w");
        FAIL("gap accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::out_of_order);
    }
    CHECK_THROWS_AS(log.append(event(1), "w"), Error);
    CHECK(mem->size() == 2);

    mem->fail = true;
    try {
        log.append(event(2), "w");
        FAIL("failure hidden");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::log_failure);
    }
    mem->fail = false;
    CHECK(log.failed());
    CHECK_THROWS_AS(log.append(event(2), "w"), Error);
    CHECK(mem->size() == 2);

    const auto line = json::parse(mem->lines[1]);
    CHECK(line["seq"] == 1);
    CHECK(line["at"]["wall"] == "2026-01-01T00:00:00.000Z");
}

TEST_CASE("file sink refuses to overwrite a log")
{
    const auto dir = std::filesystem::temp_directory_path() / "sp_test_filesink";
    std::filesystem::remove_all(dir);
    const auto path = dir / "nested" / "s1.jsonl";
    {
        auto log = EventLog::open(path, {{"type", "header"}, {"version", 1}});
        log->append(event(1), wall_clock_now());
    }
    std::ifstream in(path);
    std::string first, second;
    std::getline(in, first);
    std::getline(in, second);
    CHECK(json::parse(first)["type"] == "header");
    CHECK(json::parse(second)["seq"] == 1);
    CHECK_THROWS_AS(EventLog::open(path, {{"type", "header"}}), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("wall clock stamps are ISO UTC with milliseconds")
{
    const auto w = wall_clock_now();
    REQUIRE(w.size() == 24);
    CHECK(w[4] == '-');
    CHECK(w[10] == 'T');
    CHECK(w[19] == '.');
    CHECK(w.back() == 'Z');
}

// ---------------------------------------------------------------- live sessions

namespace {

class FakeConnection : public Connection {
public:
    explicit FakeConnection(std::shared_ptr<sptest::MemoryLog> log) : log_(std::move(log)) {}

    void send(std::string_view type, json payload) override
    {
        std::lock_guard lock(mutex_);
        if (payload.contains("event_seq") && payload["event_seq"].is_number()) {
            // Header line plus one line per event already on "disk".
            const auto persisted = log_->size() - 1;
            if (payload["event_seq"].get<std::size_t>() > persisted) ++write_ahead_violations;
        }
        frames.emplace_back(std::string(type), std::move(payload));
    }
    void close() override { closed = true; }

    std::vector<std::pair<std::string, json>> snapshot()
    {
        std::lock_guard lock(mutex_);
        return frames;
    }
    std::optional<json> last(const std::string& type)
    {
        std::lock_guard lock(mutex_);
        for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
            if (it->first == type) return it->second;
        }
        return std::nullopt;
    }

    std::atomic<bool> closed{false};
    int write_ahead_violations = 0;

private:
    std::shared_ptr<sptest::MemoryLog> log_;
    std::mutex mutex_;
    std::vector<std::pair<std::string, json>> frames;
};

struct Rig {
    boost::asio::io_context ioc;
    boost::asio::executor_work_guard<boost::asio::io_context::executor_type> work{ioc.get_executor()};
    std::thread thread{[this] { ioc.run(); }};
    std::shared_ptr<sptest::MemoryLog> mem = std::make_shared<sptest::MemoryLog>();
    std::shared_ptr<imaging::AssetStore> store = std::make_shared<imaging::AssetStore>();
    std::shared_ptr<imaging::ImageGenerator> generator =
        std::make_shared<imaging::ImageGenerator>(std::make_shared<imaging::MockBackend>(), store);
    std::unique_ptr<Registry> registry;

    Rig()
    {
        RegistryOptions opts;
        opts.seed = 5;
        opts.sink_factory = [mem = mem](const std::filesystem::path&) {
            return std::make_unique<sptest::MemorySink>(mem);
        };
        registry = std::make_unique<Registry>(ioc.get_executor(), opts, PromptPool::builtin(), generator,
                                              std::make_shared<tokenizer::TokenizerRegistry>());
    }
    ~Rig()
    {
        registry->shutdown_all();
        work.reset();
        thread.join();
    }
};

template <typename Pred>
bool eventually(Pred pred)
{
    for (int i = 0; i < 500; ++i) {
        if (pred()) return true;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return pred();
}

ClientMessage msg(ClientType type, std::uint64_t seq, std::string text = {})
{
    ClientMessage m;
    m.type = type;
    m.seq = seq;
    m.text = std::move(text);
    return m;
}

}  // namespace

TEST_CASE("every frame follows the events it describes onto the log")
{
    Rig rig;
    auto created = rig.registry->create(json::object());
    auto live = rig.registry->find_by_id(created.session);
    REQUIRE(live);
    CHECK(rig.registry->find_by_code(created.room_code) == live);

    auto a = std::make_shared<FakeConnection>(rig.mem);
    auto b = std::make_shared<FakeConnection>(rig.mem);
    auto c = std::make_shared<FakeConnection>(rig.mem);
    live->attach(a, {"Ann", "", created.creator_token});
    live->attach(b, {"Bo", "", ""});
    live->attach(c, {"Cy", "", ""});
    REQUIRE(eventually([&] { return c->last("welcome").has_value(); }));
    CHECK(a->last("welcome")->at("view")["players"][0]["creator"] == true);

    live->handle(a, msg(ClientType::start_game, 1));
    REQUIRE(eventually([&] { return a->last("ack").has_value(); }));
    REQUIRE(eventually([&] {
        auto s = a->last("state");
        return s && (*s)["view"]["phase"] == "prompting" && (*s)["view"]["pending_generations"] == 0;
    }));
    live->handle(a, msg(ClientType::submit_prompt, 2, "a cow"));
    live->handle(b, msg(ClientType::submit_prompt, 1, "cow"));
    live->handle(c, msg(ClientType::submit_prompt, 1, "pretty cow"));
    REQUIRE(eventually([&] {
        auto s = c->last("state");
        return s && (*s)["view"]["phase"] == "voting";
    }));
    for (auto& conn : {a, b, c}) {
        CHECK(conn->write_ahead_violations == 0);
        for (const auto& [type, payload] : conn->snapshot()) {
            if (type == "state") CHECK(payload["event_seq"].get<std::size_t>() <= rig.mem->size() - 1);
        }
    }
    const auto ack = a->last("ack");
    CHECK((*ack)["ref"] == 2);
}

TEST_CASE("rejected actions answer with an error frame carrying the ref")
{
    Rig rig;
    auto created = rig.registry->create(json::object());
    auto live = rig.registry->find_by_id(created.session);
    auto a = std::make_shared<FakeConnection>(rig.mem);
    auto b = std::make_shared<FakeConnection>(rig.mem);
    live->attach(a, {"Ann", "", created.creator_token});
    live->attach(b, {"Bo", "", ""});
    REQUIRE(eventually([&] { return b->last("welcome").has_value(); }));

    live->handle(b, msg(ClientType::start_game, 7));
    REQUIRE(eventually([&] { return b->last("error").has_value(); }));
    CHECK((*b->last("error"))["ref"] == 7);
    CHECK((*b->last("error"))["code"] == "not-creator");

    auto dup = std::make_shared<FakeConnection>(rig.mem);
    live->attach(dup, {"ANN", "", ""});
    REQUIRE(eventually([&] { return dup->closed.load(); }));
    CHECK((*dup->last("error"))["code"] == "duplicate-nickname");

    auto fake_creator = std::make_shared<FakeConnection>(rig.mem);
    live->attach(fake_creator, {"Eve", "", "not-the-token"});
    REQUIRE(eventually([&] { return fake_creator->closed.load(); }));
    CHECK((*fake_creator->last("error"))["code"] == "not-creator");
}

TEST_CASE("a failed log write ends the session for everyone")
{
    Rig rig;
    auto created = rig.registry->create(json::object());
    auto live = rig.registry->find_by_id(created.session);
    auto a = std::make_shared<FakeConnection>(rig.mem);
    auto b = std::make_shared<FakeConnection>(rig.mem);
    live->attach(a, {"Ann", "", created.creator_token});
    live->attach(b, {"Bo", "", ""});
    REQUIRE(eventually([&] { return b->last("welcome").has_value(); }));
    const auto lines_before = rig.mem->size();
    const auto states_before = a->snapshot().size();

    rig.mem->fail = true;
    live->handle(a, msg(ClientType::start_game, 1));
    REQUIRE(eventually([&] { return a->closed && b->closed; }));
    for (auto& conn : {a, b}) {
        auto ended = conn->last("session-ended");
        REQUIRE(ended);
        CHECK((*ended)["reason"] == "log-failure");
        CHECK_FALSE(conn->last("ack").has_value());
    }
    // Nothing unpersisted was broadcast.
    const auto frames = a->snapshot();
    for (std::size_t i = states_before; i < frames.size(); ++i) CHECK(frames[i].first != "state");
    CHECK(rig.mem->size() == lines_before);
    CHECK(live->ended());
}

TEST_CASE("reconnecting by token restores the seat and replaces the old connection")
{
    Rig rig;
    auto created = rig.registry->create(json::object());
    auto live = rig.registry->find_by_id(created.session);
    auto a = std::make_shared<FakeConnection>(rig.mem);
    auto b = std::make_shared<FakeConnection>(rig.mem);
    live->attach(a, {"Ann", "", created.creator_token});
    live->attach(b, {"Bo", "", ""});
    REQUIRE(eventually([&] { return b->last("welcome").has_value(); }));
    const auto token = (*b->last("welcome"))["token"].get<std::string>();

    auto b2 = std::make_shared<FakeConnection>(rig.mem);
    live->attach(b2, {"", token, ""});
    REQUIRE(eventually([&] { return b2->last("welcome").has_value(); }));
    CHECK((*b2->last("welcome"))["player"] == 2);
    CHECK(b->closed);
    CHECK(live->connection_count() == 2);

    auto stranger = std::make_shared<FakeConnection>(rig.mem);
    live->attach(stranger, {"", "bogus", ""});
    REQUIRE(eventually([&] { return stranger->closed.load(); }));
    CHECK((*stranger->last("error"))["code"] == "unknown-player");
}

TEST_CASE("registry rejects bad configs and unhealthy providers")
{
    Rig rig;
    try {
        rig.registry->create({{"rounds", 3}});
        FAIL("unknown key accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_config);
    }
    try {
        rig.registry->create({{"provider", {{"id", "remote"}}}});
        FAIL("foreign provider accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_config);
    }
    try {
        rig.registry->create({{"tokenizer", {{"id", "bpe-compat"}, {"version", "x"}}}});
        FAIL("missing vocabulary accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::unknown_tokenizer);
    }

    auto a = rig.registry->create({{"seed", 11}});
    auto b = rig.registry->create({{"seed", 11}});
    CHECK(a.session != b.session);
    CHECK(a.room_code != b.room_code);
    CHECK(is_room_code(a.room_code));
    CHECK(a.creator_token.size() == 32);
    CHECK(rig.registry->size() == 2);
}
