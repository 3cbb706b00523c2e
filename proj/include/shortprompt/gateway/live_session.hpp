#pragma once

#include "shortprompt/engine/session.hpp"
#include "shortprompt/gateway/event_log.hpp"
#include "shortprompt/gateway/protocol.hpp"
#include "shortprompt/imaging/generator.hpp"

#include <boost/asio/any_io_executor.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace shortprompt::gateway {

// One client's outbound side. send() may be called from any thread; the
// implementation stamps the per-connection seq and keeps frames in order.
class Connection {
public:
    virtual ~Connection() = default;
    virtual void send(std::string_view type, nlohmann::json payload) = 0;
    virtual void close() = 0;
};

struct JoinRequest {
    std::string nickname;
    std::string token;          // reconnect with an issued player token
    std::string creator_token;  // claim the creator seat
};

// Runs one engine::Session on a strand: every client message, timer expiry
// and generation completion is applied there in arrival order. Events are
// written to the log before any frame describing them is sent.
class LiveSession : public std::enable_shared_from_this<LiveSession> {
public:
    LiveSession(boost::asio::any_io_executor executor, std::unique_ptr<engine::Session> session,
                std::unique_ptr<EventLog> log, std::shared_ptr<imaging::ImageGenerator> generator,
                std::shared_ptr<const tokenizer::Tokenizer> tokenizer, std::string creator_token,
                std::chrono::steady_clock::time_point started);

    /// Persists the session-created event. Call once before sharing.
    void open();

    const std::string& id() const noexcept { return id_; }
    const std::string& room_code() const noexcept { return room_code_; }
    const std::string& creator_token() const noexcept { return creator_token_; }
    const tokenizer::Tokenizer& tokenizer() const noexcept { return *tokenizer_; }
    bool ended() const noexcept { return ended_.load(); }
    std::size_t connection_count() const;

    void attach(std::shared_ptr<Connection> conn, JoinRequest request);
    void handle(std::shared_ptr<Connection> conn, ClientMessage message);
    /// Stores the draft for auto-submission; no event, no broadcast.
    void draft(std::shared_ptr<Connection> conn, std::string text);
    void detach(std::shared_ptr<Connection> conn);
    /// Ends the session (if still running) and closes every connection.
    void shutdown(std::string reason = "closed");

    /// Runs `fn(session)` on the strand and waits. For tests and tooling;
    /// must not be called from the strand itself.
    void inspect(const std::function<void(const engine::Session&)>& fn);

private:
    std::int64_t now_ms() const;
    /// Persists pending events, then acts on timers and generations, then
    /// broadcasts. Returns false if the log failed and the session ended.
    bool flush();
    void fail_log(const Error& error);
    void broadcast_state();
    void send_state(PlayerId viewer, Connection& conn);
    std::optional<PlayerId> player_of(const std::shared_ptr<Connection>& conn) const;
    void arm(const engine::ArmTimer& timer);
    void issue(imaging::GenerationRequest request);
    std::string new_token();

    boost::asio::strand<boost::asio::any_io_executor> strand_;
    std::unique_ptr<engine::Session> session_;
    std::unique_ptr<EventLog> log_;
    std::shared_ptr<imaging::ImageGenerator> generator_;
    std::shared_ptr<const tokenizer::Tokenizer> tokenizer_;
    imaging::CancelSource cancel_;
    std::string id_;
    std::string room_code_;
    std::string creator_token_;
    std::chrono::steady_clock::time_point started_;
    std::unique_ptr<boost::asio::steady_timer> timer_;

    std::map<PlayerId, std::shared_ptr<Connection>> conns_;
    std::map<std::string, PlayerId> tokens_;
    std::uint64_t broadcast_version_ = 0;
    mutable std::mutex conns_mutex_;  // guards conns_ for connection_count()
    std::atomic<bool> ended_{false};
};

}  // namespace shortprompt::gateway
