#include "shortprompt/gateway/live_session.hpp"

#include "shortprompt/core/codec.hpp"

#include <boost/asio/post.hpp>

#include <future>
#include <random>

namespace shortprompt::gateway {

namespace asio = boost::asio;
using nlohmann::json;

LiveSession::LiveSession(asio::any_io_executor executor, std::unique_ptr<engine::Session> session,
                         std::unique_ptr<EventLog> log, std::shared_ptr<imaging::ImageGenerator> generator,
                         std::shared_ptr<const tokenizer::Tokenizer> tokenizer, std::string creator_token,
                         std::chrono::steady_clock::time_point started)
    : strand_(asio::make_strand(executor)),
      session_(std::move(session)),
      log_(std::move(log)),
      generator_(std::move(generator)),
      tokenizer_(std::move(tokenizer)),
      id_(session_->id()),
      room_code_(session_->room_code()),
      creator_token_(std::move(creator_token)),
      started_(started)
{
}

void LiveSession::open()
{
    flush();
}

std::int64_t LiveSession::now_ms() const
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started_)
        .count();
}

std::size_t LiveSession::connection_count() const
{
    std::lock_guard lock(conns_mutex_);
    return conns_.size();
}

std::string LiveSession::new_token()
{
    static thread_local std::random_device rd;
    return codec::hex64((std::uint64_t{rd()} << 32) | rd()) + codec::hex64((std::uint64_t{rd()} << 32) | rd());
}

std::optional<PlayerId> LiveSession::player_of(const std::shared_ptr<Connection>& conn) const
{
    for (const auto& [id, c] : conns_) {
        if (c == conn) return id;
    }
    return std::nullopt;
}

void LiveSession::attach(std::shared_ptr<Connection> conn, JoinRequest request)
{
    asio::post(strand_, [self = shared_from_this(), conn = std::move(conn), request = std::move(request)] {
        auto& s = *self->session_;
        PlayerId id;
        std::string token = request.token;
        try {
            if (self->ended_) {
                throw Error(Errc::wrong_phase, "session has ended");
            }
            if (!token.empty()) {
                auto it = self->tokens_.find(token);
                if (it == self->tokens_.end()) {
                    throw Error(Errc::unknown_player, "unknown player token");
                }
                id = it->second;
                s.set_connected(id, true, self->now_ms());
            } else {
                bool creator = false;
                if (!request.creator_token.empty()) {
                    if (request.creator_token != self->creator_token_) {
                        throw Error(Errc::not_creator, "creator token does not match");
                    }
                    creator = true;
                }
                id = s.join(request.nickname, creator, self->now_ms());
                token = self->new_token();
                self->tokens_[token] = id;
            }
        } catch (const Error& e) {
            conn->send("error", error_payload(std::nullopt, e.code(), e.detail()));
            conn->close();
            return;
        }
        // Everyone else hears about the join first; the newcomer's welcome
        // carries the same state, so it is registered only afterwards.
        self->flush();
        std::shared_ptr<Connection> replaced;
        {
            std::lock_guard lock(self->conns_mutex_);
            auto& slot = self->conns_[id];
            if (slot && slot != conn) replaced = slot;
            slot = conn;
        }
        if (replaced) replaced->close();
        conn->send("welcome", {{"player", id.value},
                               {"token", token},
                               {"view", engine::to_json(s.snapshot(id, self->now_ms()))}});
    });
}

void LiveSession::handle(std::shared_ptr<Connection> conn, ClientMessage m)
{
    asio::post(strand_, [self = shared_from_this(), conn = std::move(conn), m = std::move(m)] {
        auto& s = *self->session_;
        const auto who = self->player_of(conn);
        if (!who) {
            conn->send("error", error_payload(m.seq, Errc::unknown_player, "connection has no seat"));
            return;
        }
        const auto now = self->now_ms();
        try {
            switch (m.type) {
            case ClientType::submit_prompt: s.submit_prompt(*who, m.text, now); break;
            case ClientType::cast_vote: s.cast_vote(*who, m.target, now); break;
            case ClientType::quick_draw: s.request_quick_draw(*who, m.text, now); break;
            case ClientType::ready: s.set_ready(*who, m.ready, now); break;
            case ClientType::force_advance: s.force_advance(*who, now); break;
            case ClientType::start_game: s.start_game(*who, now); break;
            case ClientType::snapshot_request: self->send_state(*who, *conn); break;
            case ClientType::draft_count_request: s.update_draft(*who, m.text); break;
            }
        } catch (const Error& e) {
            conn->send("error", error_payload(m.seq, e.code(), e.detail()));
            return;
        }
        if (!self->flush()) {
            return;
        }
        conn->send("ack", {{"ref", m.seq}, {"event_seq", s.last_seq()}, {"version", s.version()}});
    });
}

void LiveSession::draft(std::shared_ptr<Connection> conn, std::string text)
{
    asio::post(strand_, [self = shared_from_this(), conn = std::move(conn), text = std::move(text)] {
        if (auto who = self->player_of(conn)) {
            try {
                self->session_->update_draft(*who, text);
            } catch (const Error&) {
                // Drafts outside Prompting are simply not kept.
            }
        }
    });
}

void LiveSession::detach(std::shared_ptr<Connection> conn)
{
    asio::post(strand_, [self = shared_from_this(), conn = std::move(conn)] {
        const auto who = self->player_of(conn);
        if (!who) return;
        {
            std::lock_guard lock(self->conns_mutex_);
            self->conns_.erase(*who);
        }
        self->session_->set_connected(*who, false, self->now_ms());
        self->flush();
    });
}

void LiveSession::shutdown(std::string reason)
{
    asio::post(strand_, [self = shared_from_this(), reason = std::move(reason)] {
        if (!self->ended_) {
            self->session_->close(reason, self->now_ms());
            self->flush();
        }
        self->ended_ = true;
        self->cancel_.cancel();
        self->timer_.reset();
        std::map<PlayerId, std::shared_ptr<Connection>> conns;
        {
            std::lock_guard lock(self->conns_mutex_);
            conns.swap(self->conns_);
        }
        for (auto& [_, c] : conns) c->close();
    });
}

void LiveSession::inspect(const std::function<void(const engine::Session&)>& fn)
{
    std::promise<void> done;
    asio::post(strand_, [&] {
        try {
            fn(*session_);
            done.set_value();
        } catch (...) {
            done.set_exception(std::current_exception());
        }
    });
    done.get_future().get();
}

bool LiveSession::flush()
{
    auto effects = session_->drain_effects();
    std::vector<std::pair<std::string, json>> notices;
    for (const auto& effect : effects) {
        const auto* ev = std::get_if<engine::GameEvent>(&effect);
        if (!ev) continue;
        try {
            log_->append(*ev, wall_clock_now());
        } catch (const Error& e) {
            fail_log(e);
            return false;
        }
        if (ev->kind == engine::EventKind::quick_draw_resolved) {
            json p = ev->payload;
            p["event_seq"] = ev->seq;
            notices.emplace_back("quick-draw-result", std::move(p));
        } else if (ev->kind == engine::EventKind::session_ended) {
            ended_ = true;
            json p = ev->payload;
            p["event_seq"] = ev->seq;
            notices.emplace_back("session-ended", std::move(p));
        }
    }
    for (auto& effect : effects) {
        if (auto* t = std::get_if<engine::ArmTimer>(&effect)) {
            arm(*t);
        } else if (auto* g = std::get_if<engine::IssueGeneration>(&effect)) {
            issue(std::move(g->request));
        }
    }
    broadcast_state();
    for (const auto& [type, payload] : notices) {
        for (auto& [_, c] : conns_) c->send(type, payload);
    }
    if (ended_) {
        timer_.reset();
    }
    return true;
}

void LiveSession::fail_log(const Error& error)
{
    // Nothing after the failed line can be persisted, so nothing more is
    // broadcast except the notice that the session is over.
    session_->close("log-failure", now_ms());
    session_->drain_effects();
    ended_ = true;
    cancel_.cancel();
    timer_.reset();
    std::map<PlayerId, std::shared_ptr<Connection>> conns;
    {
        std::lock_guard lock(conns_mutex_);
        conns.swap(conns_);
    }
    for (auto& [_, c] : conns) {
        c->send("session-ended", {{"reason", "log-failure"}, {"detail", error.detail()}});
        c->close();
    }
}

void LiveSession::broadcast_state()
{
    if (session_->version() == broadcast_version_) return;
    broadcast_version_ = session_->version();
    for (auto& [id, c] : conns_) send_state(id, *c);
}

void LiveSession::send_state(PlayerId viewer, Connection& conn)
{
    conn.send("state", {{"event_seq", session_->last_seq()},
                        {"version", session_->version()},
                        {"view", engine::to_json(session_->snapshot(viewer, now_ms()))}});
}

void LiveSession::arm(const engine::ArmTimer& t)
{
    timer_ = std::make_unique<asio::steady_timer>(strand_);
    timer_->expires_at(started_ + std::chrono::milliseconds(t.deadline_ms));
    timer_->async_wait([weak = weak_from_this(), instance = t.phase_instance](const boost::system::error_code& ec) {
        auto self = weak.lock();
        if (ec || !self || self->ended_) return;
        self->session_->on_timer_expiry(instance, self->now_ms());
        self->flush();
    });
}

void LiveSession::issue(imaging::GenerationRequest request)
{
    auto deliver = [weak = weak_from_this()](imaging::ImageRecord record) {
        auto self = weak.lock();
        if (!self) return;
        asio::post(self->strand_, [self, record = std::move(record)] {
            if (self->ended_) return;
            if (self->session_->on_generation_resolved(record, self->now_ms())) self->flush();
        });
    };
    try {
        generator_->generate_async(request, deliver, cancel_.token());
    } catch (const std::exception& e) {
        imaging::ImageRecord failed;
        failed.request_id = request.request_id;
        failed.reason = imaging::FailureReason::provider_error;
        failed.detail = e.what();
        failed.provider_id = generator_->backend().provider_id();
        deliver(std::move(failed));
    }
}

}  // namespace shortprompt::gateway
