#include "shortprompt/sim/client.hpp"

#include "shortprompt/core/errors.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <httplib.h>

#include <future>
#include <thread>

namespace shortprompt::sim {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace ws = beast::websocket;
using nlohmann::json;

void Inbox::push(Frame frame)
{
    {
        std::lock_guard lock(mutex_);
        frames_.push_back(std::move(frame));
    }
    cv_.notify_all();
}

std::optional<Frame> Inbox::pop(std::chrono::milliseconds timeout)
{
    std::unique_lock lock(mutex_);
    if (!cv_.wait_for(lock, timeout, [&] { return !frames_.empty(); })) return std::nullopt;
    Frame f = std::move(frames_.front());
    frames_.pop_front();
    return f;
}

struct WsClient::Impl : std::enable_shared_from_this<Impl> {
    Impl(Inbox& inbox, int client) : inbox(inbox), client(client), stream(ioc) {}

    Inbox& inbox;
    int client;
    asio::io_context ioc;
    ws::stream<beast::tcp_stream> stream;
    beast::flat_buffer buffer;
    std::deque<std::string> outbox;
    bool closing = false;
    bool done = false;
    std::thread thread;
    std::promise<void> ran;
    std::future<void> stopped = ran.get_future();

    void read()
    {
        stream.async_read(buffer, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->finish();
                return;
            }
            const auto now = Clock::now();
            json body = json::parse(beast::buffers_to_string(self->buffer.data()), nullptr, false);
            self->buffer.consume(self->buffer.size());
            if (body.is_discarded()) body = {{"type", "_garbled"}};
            self->inbox.push({self->client, std::move(body), now});
            self->read();
        });
    }

    void write()
    {
        stream.async_write(asio::buffer(outbox.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return;
            self->outbox.pop_front();
            if (!self->outbox.empty()) {
                self->write();
            } else if (self->closing) {
                self->do_close();
            }
        });
    }

    void do_close()
    {
        stream.async_close(ws::close_code::normal, [self = shared_from_this()](beast::error_code) {});
    }

    void finish()
    {
        if (done) return;
        done = true;
        inbox.push({client, {{"type", "_closed"}}, Clock::now()});
    }
};

WsClient::WsClient(Inbox& inbox, int client) : impl_(std::make_shared<Impl>(inbox, client)) {}

WsClient::~WsClient()
{
    close();
    if (impl_->thread.joinable()) {
        if (impl_->stopped.wait_for(std::chrono::seconds(1)) != std::future_status::ready) {
            impl_->ioc.stop();
        }
        impl_->thread.join();
    }
}

void WsClient::connect(const std::string& host, std::uint16_t port, const std::string& target)
{
    asio::ip::tcp::resolver resolver(impl_->ioc);
    auto results = resolver.resolve(host, std::to_string(port));
    beast::get_lowest_layer(impl_->stream).connect(results);
    beast::get_lowest_layer(impl_->stream).socket().set_option(asio::ip::tcp::no_delay(true));
    try {
        impl_->stream.handshake(host + ":" + std::to_string(port), target);
    } catch (const beast::system_error& e) {
        throw Error(Errc::malformed_message, std::string("websocket handshake failed: ") + e.what());
    }
    impl_->stream.text(true);
    impl_->read();
    impl_->thread = std::thread([impl = impl_] {
        impl->ioc.run();
        impl->ran.set_value();
    });
}

Clock::time_point WsClient::send(const json& frame)
{
    const auto now = Clock::now();
    send_raw(frame.dump());
    return now;
}

void WsClient::send_raw(std::string text)
{
    asio::post(impl_->ioc, [impl = impl_, text = std::move(text)]() mutable {
        if (impl->closing || impl->done) return;
        impl->outbox.push_back(std::move(text));
        if (impl->outbox.size() == 1) impl->write();
    });
}

void WsClient::close()
{
    asio::post(impl_->ioc, [impl = impl_] {
        if (impl->closing || impl->done) return;
        impl->closing = true;
        if (impl->outbox.empty()) impl->do_close();
    });
}

namespace {

HttpResponse wrap(const httplib::Result& r, const std::string& what)
{
    if (!r) {
        throw Error(Errc::provider_unavailable, what + ": " + httplib::to_string(r.error()));
    }
    return {r->status, r->body};
}

}  // namespace

HttpResponse http_get(const std::string& host, std::uint16_t port, const std::string& target)
{
    httplib::Client cli(host, port);
    return wrap(cli.Get(target), "GET " + target);
}

HttpResponse http_post_json(const std::string& host, std::uint16_t port, const std::string& target,
                            const json& body)
{
    httplib::Client cli(host, port);
    return wrap(cli.Post(target, body.dump(), "application/json"), "POST " + target);
}

std::string url_encode(std::string_view value)
{
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : value) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += kHex[c >> 4];
            out += kHex[c & 15];
        }
    }
    return out;
}

}  // namespace shortprompt::sim
