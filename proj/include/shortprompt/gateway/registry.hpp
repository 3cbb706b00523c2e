#pragma once

#include "shortprompt/core/prompt_pool.hpp"
#include "shortprompt/engine/config.hpp"
#include "shortprompt/gateway/live_session.hpp"
#include "shortprompt/gateway/room_codes.hpp"
#include "shortprompt/imaging/generator.hpp"
#include "shortprompt/tokenizer/tokenizer.hpp"

#include <boost/asio/any_io_executor.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace shortprompt::gateway {

struct RegistryOptions {
    std::filesystem::path log_dir = "logs";
    // Drives session ids, room codes and default session seeds.
    std::uint64_t seed = 0;
    engine::SessionConfig defaults;
    // Test hook: replaces the file log sink.
    std::function<std::unique_ptr<LineSink>(const std::filesystem::path&)> sink_factory;
};

struct CreatedSession {
    std::string session;
    std::string room_code;
    std::string creator_token;
    std::filesystem::path log_path;
};

class Registry {
public:
    Registry(boost::asio::any_io_executor executor, RegistryOptions options, PromptPool pool,
             std::shared_ptr<imaging::ImageGenerator> generator,
             std::shared_ptr<tokenizer::TokenizerRegistry> tokenizers);

    /// Throws Errc::invalid_config, unknown_tokenizer, pool_missing_category,
    /// provider_unavailable or log_failure.
    CreatedSession create(const nlohmann::json& body);

    std::shared_ptr<LiveSession> find_by_code(std::string_view code) const;
    std::shared_ptr<LiveSession> find_by_id(std::string_view id) const;
    std::size_t size() const;

    /// Drops ended sessions that no longer have connections.
    void reap();
    void shutdown_all();

    const RegistryOptions& options() const noexcept { return options_; }

private:
    boost::asio::any_io_executor executor_;
    RegistryOptions options_;
    PromptPool pool_;
    std::shared_ptr<imaging::ImageGenerator> generator_;
    std::shared_ptr<tokenizer::TokenizerRegistry> tokenizers_;

    mutable std::mutex mutex_;
    Rng rng_;
    RoomCodeGenerator codes_;
    std::uint64_t counter_ = 0;
    std::map<std::string, std::shared_ptr<LiveSession>, std::less<>> by_code_;
    std::map<std::string, std::shared_ptr<LiveSession>, std::less<>> by_id_;
};

}  // namespace shortprompt::gateway
