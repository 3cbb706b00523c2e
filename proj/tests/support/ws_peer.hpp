#pragma once

#include "shortprompt/sim/client.hpp"

#include <doctest.h>

#include <optional>
#include <string>
#include <vector>

namespace sptest {

// A scripted WebSocket client for server tests.
class WsPeer {
public:
    WsPeer(std::uint16_t port, const std::string& target) : ws_(inbox_, 0)
    {
        ws_.connect("127.0.0.1", port, target);
    }

    std::uint64_t send(const std::string& type, nlohmann::json payload = nlohmann::json::object())
    {
        const auto seq = next_seq_++;
        ws_.send({{"type", type}, {"seq", seq}, {"payload", std::move(payload)}});
        return seq;
    }
    void send_raw(std::string text) { ws_.send_raw(std::move(text)); }
    void close() { ws_.close(); }

    /// Next frame of `type`; earlier frames of other types are kept in `seen`.
    std::optional<nlohmann::json> expect(const std::string& type,
                                         std::chrono::milliseconds timeout = std::chrono::seconds(5))
    {
        const auto deadline = shortprompt::sim::Clock::now() + timeout;
        while (true) {
            const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                deadline - shortprompt::sim::Clock::now());
            if (left.count() <= 0) return std::nullopt;
            auto f = inbox_.pop(left);
            if (!f) return std::nullopt;
            seen.push_back(f->body);
            if (f->body.value("type", "") == type) return f->body;
        }
    }

    /// Waits for a reply frame (ack, count or error) whose ref is `seq`.
    std::optional<nlohmann::json> reply(std::uint64_t seq)
    {
        const auto deadline = shortprompt::sim::Clock::now() + std::chrono::seconds(5);
        while (shortprompt::sim::Clock::now() < deadline) {
            auto f = inbox_.pop(std::chrono::milliseconds(100));
            if (!f) continue;
            seen.push_back(f->body);
            const auto& p = f->body.value("payload", nlohmann::json::object());
            if (p.contains("ref") && p["ref"] == seq) return f->body;
        }
        return std::nullopt;
    }

    /// Latest state view once `pred` holds for it.
    std::optional<nlohmann::json> state_where(const std::function<bool(const nlohmann::json&)>& pred)
    {
        const auto deadline = shortprompt::sim::Clock::now() + std::chrono::seconds(5);
        while (shortprompt::sim::Clock::now() < deadline) {
            auto f = inbox_.pop(std::chrono::milliseconds(100));
            if (!f) continue;
            seen.push_back(f->body);
            if (f->body.value("type", "") == "state" && pred(f->body["payload"]["view"])) {
                return f->body["payload"]["view"];
            }
        }
        return std::nullopt;
    }

    std::vector<nlohmann::json> seen;

private:
    shortprompt::sim::Inbox inbox_;
    shortprompt::sim::WsClient ws_;
    std::uint64_t next_seq_ = 1;
};

}  // namespace sptest
