#include "shortprompt/gateway/registry.hpp"

#include "shortprompt/core/codec.hpp"
#include "shortprompt/core/errors.hpp"

#include <random>

namespace shortprompt::gateway {

Registry::Registry(boost::asio::any_io_executor executor, RegistryOptions options, PromptPool pool,
                   std::shared_ptr<imaging::ImageGenerator> generator,
                   std::shared_ptr<tokenizer::TokenizerRegistry> tokenizers)
    : executor_(std::move(executor)),
      options_(std::move(options)),
      pool_(std::move(pool)),
      generator_(std::move(generator)),
      tokenizers_(std::move(tokenizers)),
      rng_(mix_seed(options_.seed, 1)),
      codes_(mix_seed(options_.seed, 2))
{
    engine::validate(options_.defaults);
}

CreatedSession Registry::create(const nlohmann::json& body)
{
    auto config = engine::parse_session_config(body, options_.defaults);
    if (config.provider_id != options_.defaults.provider_id) {
        throw Error(Errc::invalid_config, "provider " + config.provider_id + " is not configured");
    }
    auto tok = tokenizers_->resolve(config.tokenizer);
    if (!generator_->backend().healthy()) {
        throw Error(Errc::provider_unavailable, generator_->backend().provider_id());
    }

    std::unique_lock lock(mutex_);
    const bool seeded = body.is_object() && body.contains("seed");
    if (!seeded) {
        config.seed = rng_.next();
    }
    const auto id = "s" + codec::hex64(mix_seed(options_.seed, ++counter_)).substr(0, 12);
    const auto code = codes_.next([&](std::string_view c) { return by_code_.contains(c); });

    auto session = engine::Session::create(id, code, config, pool_, tok, 0);
    const auto started = std::chrono::steady_clock::now();
    const auto path = options_.log_dir / (id + ".jsonl");
    auto sink = options_.sink_factory ? options_.sink_factory(path) : std::make_unique<FileSink>(path);
    auto log = std::make_unique<EventLog>(std::move(sink), session->log_header());

    std::random_device rd;
    const auto creator_token = codec::hex64((std::uint64_t{rd()} << 32) | rd()) +
                               codec::hex64((std::uint64_t{rd()} << 32) | rd());
    auto live = std::make_shared<LiveSession>(executor_, std::move(session), std::move(log), generator_,
                                              std::move(tok), creator_token, started);
    live->open();
    by_code_[code] = live;
    by_id_[id] = live;
    return {id, code, creator_token, path};
}

std::shared_ptr<LiveSession> Registry::find_by_code(std::string_view code) const
{
    std::lock_guard lock(mutex_);
    auto it = by_code_.find(code);
    return it == by_code_.end() ? nullptr : it->second;
}

std::shared_ptr<LiveSession> Registry::find_by_id(std::string_view id) const
{
    std::lock_guard lock(mutex_);
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : it->second;
}

std::size_t Registry::size() const
{
    std::lock_guard lock(mutex_);
    return by_id_.size();
}

void Registry::reap()
{
    std::lock_guard lock(mutex_);
    for (auto it = by_id_.begin(); it != by_id_.end();) {
        if (it->second->ended() && it->second->connection_count() == 0) {
            by_code_.erase(it->second->room_code());
            it = by_id_.erase(it);
        } else {
            ++it;
        }
    }
}

void Registry::shutdown_all()
{
    std::lock_guard lock(mutex_);
    for (auto& [_, live] : by_id_) live->shutdown();
}

}  // namespace shortprompt::gateway
