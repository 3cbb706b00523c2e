#include "shortprompt/gateway/server.hpp"

#include "shortprompt/core/errors.hpp"
#include "shortprompt/gateway/protocol.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <condition_variable>
#include <deque>
#include <future>
#include <map>
#include <thread>

namespace shortprompt::gateway {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using nlohmann::json;

namespace {

std::string url_decode(std::string_view in)
{
    std::string out;
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] == '+') {
            out += ' ';
        } else if (in[i] == '%') {
            auto hex = [](char c) -> int {
                if (c >= '0' && c <= '9') return c - '0';
                if (c >= 'a' && c <= 'f') return c - 'a' + 10;
                if (c >= 'A' && c <= 'F') return c - 'A' + 10;
                return -1;
            };
            const int hi = i + 1 < in.size() ? hex(in[i + 1]) : -1;
            const int lo = i + 2 < in.size() ? hex(in[i + 2]) : -1;
            if (hi < 0 || lo < 0) {
                out += in[i];
                continue;
            }
            out += static_cast<char>(hi * 16 + lo);
            i += 2;
        } else {
            out += in[i];
        }
    }
    return out;
}

std::map<std::string, std::string> parse_query(std::string_view target)
{
    std::map<std::string, std::string> out;
    const auto q = target.find('?');
    if (q == std::string_view::npos) return out;
    auto rest = target.substr(q + 1);
    while (!rest.empty()) {
        const auto amp = rest.find('&');
        const auto pair = rest.substr(0, amp);
        const auto eq = pair.find('=');
        if (eq != std::string_view::npos) {
            out[url_decode(pair.substr(0, eq))] = url_decode(pair.substr(eq + 1));
        } else if (!pair.empty()) {
            out[url_decode(pair)] = "";
        }
        if (amp == std::string_view::npos) break;
        rest = rest.substr(amp + 1);
    }
    return out;
}

std::string_view sv(beast::string_view s)
{
    return {s.data(), s.size()};
}

std::string_view path_of(std::string_view target)
{
    return target.substr(0, target.find('?'));
}

int http_status_for(Errc code)
{
    switch (code) {
    case Errc::provider_unavailable: return 503;
    case Errc::log_failure: return 500;
    default: return 400;
    }
}

}  // namespace

struct Gateway::Impl {
    GatewayOptions options;
    asio::io_context ioc;
    std::optional<asio::executor_work_guard<asio::io_context::executor_type>> work;
    std::shared_ptr<imaging::AssetStore> store;
    std::shared_ptr<imaging::ImageGenerator> generator;
    std::shared_ptr<tokenizer::TokenizerRegistry> tokenizers;
    std::unique_ptr<Registry> registry;
    tcp::acceptor acceptor{ioc};
    std::vector<std::thread> threads;
    std::mutex stop_mutex;
    std::condition_variable stopped_cv;
    bool stopped = false;

    explicit Impl(GatewayOptions opts) : options(std::move(opts))
    {
        store = options.asset_dir.empty() ? std::make_shared<imaging::AssetStore>()
                                          : std::make_shared<imaging::AssetStore>(options.asset_dir);
        auto backend = options.backend ? options.backend : std::make_shared<imaging::MockBackend>();
        generator = std::make_shared<imaging::ImageGenerator>(backend, store, options.generator);
        tokenizers = std::make_shared<tokenizer::TokenizerRegistry>();
        if (options.bpe_vocabulary) tokenizers->set_bpe_vocabulary(*options.bpe_vocabulary);
        registry = std::make_unique<Registry>(ioc.get_executor(), options.registry, options.pool, generator,
                                              tokenizers);
    }

    void accept();
};

namespace {

class WsSession;

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket socket, Gateway::Impl& gw) : stream_(std::move(socket)), gw_(gw) {}

    void run()
    {
        asio::dispatch(stream_.get_executor(), [self = shared_from_this()] { self->read(); });
    }

private:
    void read()
    {
        parser_.emplace();
        parser_->body_limit(64 * 1024);
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, *parser_,
                         [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
    }

    void on_read(beast::error_code ec);

    template <class Body>
    void write(http::response<Body> res)
    {
        auto sp = std::make_shared<http::response<Body>>(std::move(res));
        http::async_write(stream_, *sp, [self = shared_from_this(), sp](beast::error_code ec, std::size_t) {
            if (ec || !sp->keep_alive()) {
                beast::error_code ignored;
                self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                return;
            }
            self->read();
        });
    }

    http::response<http::string_body> json_response(http::status status, const json& body,
                                                    const http::request<http::string_body>& req)
    {
        http::response<http::string_body> res{status, req.version()};
        res.set(http::field::content_type, "application/json");
        res.set(http::field::access_control_allow_origin, "*");
        res.keep_alive(req.keep_alive());
        res.body() = body.dump();
        res.prepare_payload();
        return res;
    }

    void handle(http::request<http::string_body>&& req);

    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    std::optional<http::request_parser<http::string_body>> parser_;
    Gateway::Impl& gw_;
};

class WsSession : public Connection, public std::enable_shared_from_this<WsSession> {
public:
    WsSession(tcp::socket socket, Gateway::Impl& gw)
        : ws_(std::move(socket)),
          gw_(gw),
          limiter_(gw.options.server.count_limit, gw.options.server.count_window, gw.options.server.clock)
    {
    }

    void run(http::request<http::string_body> req)
    {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.read_message_max(4 * kMaxFrameBytes);
        const auto target = std::string(req.target());
        ws_.async_accept(req, [self = shared_from_this(), target](beast::error_code ec) {
            if (!ec) self->on_accept(target);
        });
    }

    void send(std::string_view type, json payload) override
    {
        asio::post(ws_.get_executor(), [self = shared_from_this(), type = std::string(type),
                                        payload = std::move(payload)]() mutable {
            if (self->closed_) return;
            self->queue_.push_back(server_frame(type, self->session_id_, ++self->seq_, std::move(payload)).dump());
            if (self->queue_.size() == 1) self->write_next();
        });
    }

    void close() override
    {
        asio::post(ws_.get_executor(), [self = shared_from_this()] {
            if (self->closing_ || self->closed_) return;
            self->closing_ = true;
            if (self->queue_.empty()) self->do_close();
        });
    }

private:
    void on_accept(const std::string& target)
    {
        auto q = parse_query(target);
        live_ = gw_.registry->find_by_code(q["code"]);
        if (!live_) {
            send("error", error_payload(std::nullopt, Errc::unknown_room, q["code"]));
            close();
            return;
        }
        session_id_ = live_->id();
        live_->attach(shared_from_this(), JoinRequest{q["nickname"], q["token"], q["creator"]});
        read();
    }

    void read()
    {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->closed_ = true;
                if (self->live_) self->live_->detach(self);
                return;
            }
            const auto frame = beast::buffers_to_string(self->buffer_.data());
            self->buffer_.consume(self->buffer_.size());
            self->on_frame(frame);
            self->read();
        });
    }

    void on_frame(const std::string& frame)
    {
        auto parsed = parse_client_message(frame);
        if (!parsed.message) {
            send("error", error_payload(parsed.ref, parsed.code, parsed.detail));
            return;
        }
        auto& m = *parsed.message;
        if (m.type != ClientType::draft_count_request) {
            live_->handle(shared_from_this(), std::move(m));
            return;
        }
        if (!limiter_.admit()) {
            send("error", error_payload(m.seq, Errc::throttled));
            return;
        }
        try {
            const auto count = live_->tokenizer().count(m.text);
            send("count", {{"ref", m.seq}, {"text_hash", text_hash(m.text)}, {"token_count", count}});
        } catch (const Error& e) {
            send("error", error_payload(m.seq, e.code(), e.detail()));
            return;
        }
        live_->draft(shared_from_this(), std::move(m.text));
    }

    void write_next()
    {
        ws_.text(true);
        ws_.async_write(asio::buffer(queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->closed_ = true;
                self->queue_.clear();
                return;
            }
            self->queue_.pop_front();
            if (!self->queue_.empty()) {
                self->write_next();
            } else if (self->closing_) {
                self->do_close();
            }
        });
    }

    void do_close()
    {
        ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {
            self->closed_ = true;
        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    Gateway::Impl& gw_;
    RateLimiter limiter_;
    beast::flat_buffer buffer_;
    std::shared_ptr<LiveSession> live_;
    std::string session_id_;
    std::deque<std::string> queue_;
    std::uint64_t seq_ = 0;
    bool closing_ = false;
    bool closed_ = false;
};

void HttpSession::on_read(beast::error_code ec)
{
    if (ec == http::error::end_of_stream) {
        beast::error_code ignored;
        stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        return;
    }
    if (ec) return;
    auto req = parser_->release();
    if (websocket::is_upgrade(req)) {
        if (path_of(sv(req.target())) != "/ws") {
            write(json_response(http::status::not_found, {{"error", "not-found"}}, req));
            return;
        }
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), gw_)->run(std::move(req));
        return;
    }
    handle(std::move(req));
}

void HttpSession::handle(http::request<http::string_body>&& req)
{
    const auto path = path_of(sv(req.target()));
    if (req.method() == http::verb::options) {
        http::response<http::string_body> res{http::status::no_content, req.version()};
        res.set(http::field::access_control_allow_origin, "*");
        res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
        res.set(http::field::access_control_allow_headers, "Content-Type");
        res.keep_alive(req.keep_alive());
        res.prepare_payload();
        write(std::move(res));
        return;
    }
    if (req.method() == http::verb::get && path == "/healthz") {
        write(json_response(http::status::ok,
                            {{"status", "ok"},
                             {"sessions", gw_.registry->size()},
                             {"provider", gw_.generator->backend().provider_id()}},
                            req));
        return;
    }
    if (req.method() == http::verb::post && path == "/sessions") {
        json body = json::object();
        if (!req.body().empty()) {
            body = json::parse(req.body(), nullptr, false);
            if (body.is_discarded()) {
                write(json_response(http::status::bad_request,
                                    {{"error", to_string(Errc::invalid_config)}, {"detail", "body is not JSON"}}, req));
                return;
            }
        }
        gw_.registry->reap();
        try {
            const auto created = gw_.registry->create(body);
            write(json_response(http::status::created,
                                {{"session", created.session},
                                 {"room_code", created.room_code},
                                 {"creator_token", created.creator_token}},
                                req));
        } catch (const Error& e) {
            write(json_response(static_cast<http::status>(http_status_for(e.code())),
                                {{"error", to_string(e.code())}, {"detail", e.detail()}}, req));
        }
        return;
    }
    constexpr std::string_view prefix = "/assets/";
    if (req.method() == http::verb::get && path.starts_with(prefix) && path.ends_with(".png")) {
        const auto key = std::string(path.substr(prefix.size(), path.size() - prefix.size() - 4));
        if (auto bytes = imaging::AssetStore::valid_key(key) ? gw_.store->get(key) : std::nullopt) {
            http::response<http::string_body> res{http::status::ok, req.version()};
            res.set(http::field::content_type, "image/png");
            res.set(http::field::cache_control, "public, max-age=31536000, immutable");
            res.set(http::field::access_control_allow_origin, "*");
            res.keep_alive(req.keep_alive());
            res.body().assign(bytes->begin(), bytes->end());
            res.prepare_payload();
            write(std::move(res));
            return;
        }
    }
    write(json_response(http::status::not_found, {{"error", "not-found"}}, req));
}

}  // namespace

void Gateway::Impl::accept()
{
    acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
        if (ec) {
            if (ec == asio::error::operation_aborted) return;
        } else {
            // Frames are small and often back to back (state, then ack).
            beast::error_code ignored;
            socket.set_option(tcp::no_delay(true), ignored);
            std::make_shared<HttpSession>(std::move(socket), *this)->run();
        }
        accept();
    });
}

Gateway::Gateway(GatewayOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Gateway::~Gateway()
{
    stop();
}

void Gateway::start()
{
    auto& im = *impl_;
    const tcp::endpoint ep{asio::ip::make_address(im.options.server.address), im.options.server.port};
    im.acceptor.open(ep.protocol());
    im.acceptor.set_option(asio::socket_base::reuse_address(true));
    im.acceptor.bind(ep);
    im.acceptor.listen(asio::socket_base::max_listen_connections);
    im.work.emplace(im.ioc.get_executor());
    im.accept();
    for (std::size_t i = 0; i < std::max<std::size_t>(1, im.options.server.threads); ++i) {
        im.threads.emplace_back([&im] { im.ioc.run(); });
    }
}

void Gateway::stop()
{
    if (!impl_) return;
    auto& im = *impl_;
    if (!im.threads.empty()) {
        im.registry->shutdown_all();
        // Let the posted shutdowns persist their final events.
        std::promise<void> drained;
        asio::post(im.ioc, [&] { drained.set_value(); });
        drained.get_future().wait_for(std::chrono::seconds(2));
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        asio::post(im.ioc, [&im] {
            beast::error_code ignored;
            im.acceptor.close(ignored);
        });
        im.work.reset();
        im.ioc.stop();
        for (auto& t : im.threads) t.join();
        im.threads.clear();
    }
    {
        std::lock_guard lock(im.stop_mutex);
        im.stopped = true;
    }
    im.stopped_cv.notify_all();
}

void Gateway::wait()
{
    std::unique_lock lock(impl_->stop_mutex);
    impl_->stopped_cv.wait(lock, [&] { return impl_->stopped; });
}

std::uint16_t Gateway::port() const
{
    return impl_->acceptor.local_endpoint().port();
}

Registry& Gateway::registry()
{
    return *impl_->registry;
}

imaging::AssetStore& Gateway::assets()
{
    return *impl_->store;
}

}  // namespace shortprompt::gateway
