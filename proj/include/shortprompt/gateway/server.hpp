#pragma once

#include "shortprompt/core/prompt_pool.hpp"
#include "shortprompt/gateway/rate_limiter.hpp"
#include "shortprompt/gateway/registry.hpp"
#include "shortprompt/imaging/asset_store.hpp"
#include "shortprompt/imaging/backend.hpp"
#include "shortprompt/imaging/generator.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace shortprompt::gateway {

struct ServerOptions {
    std::string address = "127.0.0.1";
    std::uint16_t port = 8080;  // 0 picks a free port
    std::size_t threads = 2;
    std::size_t count_limit = 10;  // draft-count-requests per window per connection
    std::chrono::milliseconds count_window{1000};
    SteadyClock clock = [] { return std::chrono::steady_clock::now(); };
};

struct GatewayOptions {
    ServerOptions server;
    RegistryOptions registry;
    PromptPool pool = PromptPool::builtin();
    std::shared_ptr<imaging::ImageBackend> backend;  // defaults to the mock provider
    std::filesystem::path asset_dir;                 // empty keeps assets in memory
    imaging::GeneratorOptions generator;
    std::optional<std::filesystem::path> bpe_vocabulary;
};

// HTTP + WebSocket front end:
//   POST /sessions            create a session from a SessionConfig body
//   GET  /healthz             liveness
//   GET  /assets/<key>.png    stored images
//   GET  /ws?code=..&nickname=..[&creator=..] | ?code=..&token=..
class Gateway {
public:
    explicit Gateway(GatewayOptions options);
    ~Gateway();
    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    /// Binds and starts serving on background threads. Throws on bind errors.
    void start();
    /// Ends every live session, then stops the threads.
    void stop();
    /// Blocks until stop() is called from elsewhere (or a signal handler).
    void wait();

    std::uint16_t port() const;
    Registry& registry();
    imaging::AssetStore& assets();

    struct Impl;  // opaque; named here so connection handlers can refer to it

private:
    std::unique_ptr<Impl> impl_;
};

}  // namespace shortprompt::gateway
