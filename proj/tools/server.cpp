// shortprompt-server: HTTP + WebSocket game server.
#include "shortprompt/core/errors.hpp"
#include "shortprompt/gateway/server.hpp"
#include "shortprompt/imaging/backend.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <atomic>
#include <csignal>
#include <thread>

using namespace shortprompt;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Short-prompt image game server"};
    app.set_config("--config", "", "TOML or INI file with the same keys as the long flags; flags win");

    std::string listen = "127.0.0.1:8080";
    std::string assets;
    std::string pool_path;
    std::string provider = "mock";
    std::string api_key_env = "OPENAI_API_KEY";
    std::string remote_url = "https://api.openai.com";
    std::string remote_model = "gpt-image-1";
    std::string log_dir = "logs";
    std::string bpe;
    int prompt_timer = 70;
    int vote_timer = 20;
    int max_players = 8;
    std::uint64_t seed = 0;
    std::size_t threads = 2;
    std::uint32_t mock_fail_permille = 0;
    int mock_latency_ms = 0;

    app.add_option("--listen", listen, "host:port; port 0 picks a free one");
    app.add_option("--assets", assets, "Asset directory (empty keeps images in memory)");
    app.add_option("--pool", pool_path, "Prompt pool JSON (default: built-in pool)")->check(CLI::ExistingFile);
    app.add_option("--provider", provider, "Image provider")->check(CLI::IsMember({"mock", "remote"}));
    app.add_option("--api-key-env", api_key_env, "Environment variable holding the remote API key");
    app.add_option("--remote-url", remote_url);
    app.add_option("--remote-model", remote_model);
    app.add_option("--mock-fail-permille", mock_fail_permille)->check(CLI::Range(0, 1000));
    app.add_option("--mock-latency-ms", mock_latency_ms)->check(CLI::NonNegativeNumber);
    app.add_option("--prompt-timer", prompt_timer, "Default prompting timer in seconds")->check(CLI::PositiveNumber);
    app.add_option("--vote-timer", vote_timer, "Default voting timer in seconds")->check(CLI::PositiveNumber);
    app.add_option("--max-players", max_players)->check(CLI::Range(2, 64));
    app.add_option("--logs", log_dir, "Event log directory");
    app.add_option("--seed", seed, "Seeds session ids, room codes and default session seeds");
    app.add_option("--threads", threads)->check(CLI::Range(1, 64));
    app.add_option("--bpe-vocab", bpe, "tiktoken-format rank file enabling the bpe-compat tokenizer")
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        gateway::GatewayOptions opts;
        const auto colon = listen.rfind(':');
        if (colon == std::string::npos) throw Error(Errc::invalid_config, "--listen wants host:port");
        opts.server.address = listen.substr(0, colon);
        opts.server.port = static_cast<std::uint16_t>(std::stoul(listen.substr(colon + 1)));
        opts.server.threads = threads;
        opts.registry.log_dir = log_dir;
        opts.registry.seed = seed;
        opts.registry.defaults.prompt_timer_s = prompt_timer;
        opts.registry.defaults.vote_timer_s = vote_timer;
        opts.registry.defaults.max_players = max_players;
        opts.registry.defaults.provider_id = provider;
        if (!pool_path.empty()) opts.pool = PromptPool::load(pool_path);
        opts.asset_dir = assets;
        if (!bpe.empty()) opts.bpe_vocabulary = bpe;
        if (provider == "remote") {
            imaging::RemoteOptions remote;
            remote.base_url = remote_url;
            remote.model = remote_model;
            remote.api_key_env = api_key_env;
            opts.backend = std::make_shared<imaging::RemoteBackend>(remote);
        } else {
            imaging::MockOptions mock;
            mock.fail_permille = mock_fail_permille;
            mock.latency = std::chrono::milliseconds(mock_latency_ms);
            opts.backend = std::make_shared<imaging::MockBackend>(mock);
        }

        gateway::Gateway gw(std::move(opts));
        gw.start();
        spdlog::info("listening on {}:{} (provider {}, logs in {})", listen.substr(0, colon), gw.port(), provider,
                     log_dir);

        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));

        spdlog::info("shutting down");
        gw.stop();
        return 0;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
}
