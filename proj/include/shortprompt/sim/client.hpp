#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace shortprompt::sim {

using Clock = std::chrono::steady_clock;

struct Frame {
    int client = 0;
    nlohmann::json body;  // {"type": "_closed"} once the connection is gone
    Clock::time_point arrived;
};

// Frames from every client of one run, in arrival order.
class Inbox {
public:
    void push(Frame frame);
    std::optional<Frame> pop(std::chrono::milliseconds timeout);

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<Frame> frames_;
};

// One WebSocket connection with its own I/O thread. Incoming text frames
// are parsed and pushed to the shared inbox tagged with `client`.
class WsClient {
public:
    WsClient(Inbox& inbox, int client);
    ~WsClient();
    WsClient(const WsClient&) = delete;
    WsClient& operator=(const WsClient&) = delete;

    /// Blocking connect and upgrade. `target` is the path plus query.
    void connect(const std::string& host, std::uint16_t port, const std::string& target);
    /// Queues a text frame; returns the send time.
    Clock::time_point send(const nlohmann::json& frame);
    void send_raw(std::string text);
    void close();

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

HttpResponse http_get(const std::string& host, std::uint16_t port, const std::string& target);
HttpResponse http_post_json(const std::string& host, std::uint16_t port, const std::string& target,
                            const nlohmann::json& body);

/// Percent-encodes a query parameter value.
std::string url_encode(std::string_view value);

}  // namespace shortprompt::sim
