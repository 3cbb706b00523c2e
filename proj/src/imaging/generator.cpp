#include "shortprompt/imaging/generator.hpp"

#include "shortprompt/core/errors.hpp"
#include "shortprompt/core/utf8.hpp"
#include "shortprompt/imaging/png.hpp"

#include <boost/asio/post.hpp>

namespace shortprompt::imaging {

namespace {

bool is_cancelled(const CancelToken& cancel) { return cancel && cancel->load(); }

void require_prompt(const GenerationRequest& request)
{
    if (!utf8::is_valid(request.prompt) || utf8::trim(request.prompt).empty()) {
        throw Error(Errc::empty_prompt, request.request_id);
    }
}

}  // namespace

ImageGenerator::ImageGenerator(std::shared_ptr<ImageBackend> backend,
                               std::shared_ptr<AssetStore> store, GeneratorOptions options)
    : backend_(std::move(backend)),
      store_(std::move(store)),
      options_(options),
      pool_(options.threads)
{
}

ImageGenerator::~ImageGenerator() { pool_.join(); }

ImageRecord ImageGenerator::run(const GenerationRequest& request, const CancelToken& cancel)
{
    const auto start = std::chrono::steady_clock::now();
    ImageRecord record;
    record.request_id = request.request_id;
    record.provider_id = backend_->provider_id();

    auto finish = [&] {
        record.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
        return record;
    };

    const bool is_original = request.context.kind == GenerationKind::original;
    const auto identity = is_original ? backend_->cache_identity(request) : std::string{};
    if (is_original) {
        if (auto key = store_->find_original(identity, request.prompt);
            key && store_->contains(*key)) {
            record.status = ImageStatus::success;
            record.asset_key = *key;
            return finish();
        }
    }

    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        record.attempt = attempt;
        if (is_cancelled(cancel)) {
            record.reason = FailureReason::cancelled;
            record.detail.clear();
            return finish();
        }
        BackendResult result;
        try {
            result = backend_->render(request, options_.timeout);
        } catch (const std::exception& e) {
            result = {{}, FailureReason::provider_error, e.what()};
        }
        if (result.ok() && has_png_signature(result.png)) {
            record.status = ImageStatus::success;
            record.reason = FailureReason::none;
            record.detail.clear();
            record.asset_key = store_->put(result.png);
            if (is_original) {
                store_->remember_original(identity, request.prompt, record.asset_key);
            }
            return finish();
        }
        record.reason =
            result.reason == FailureReason::none ? FailureReason::provider_error : result.reason;
        record.detail = result.detail.empty() ? "empty payload" : result.detail;
    }
    return finish();
}

void ImageGenerator::generate_async(GenerationRequest request, Callback done, CancelToken cancel)
{
    require_prompt(request);
    boost::asio::post(pool_, [this, request = std::move(request), done = std::move(done),
                              cancel = std::move(cancel)] {
        auto record = run(request, cancel);
        if (is_cancelled(cancel) && record.ok()) {
            record.status = ImageStatus::failed;
            record.asset_key.clear();
            record.reason = FailureReason::cancelled;
        }
        done(std::move(record));
    });
}

std::future<ImageRecord> ImageGenerator::generate(GenerationRequest request, CancelToken cancel)
{
    auto promise = std::make_shared<std::promise<ImageRecord>>();
    auto future = promise->get_future();
    generate_async(
        std::move(request), [promise](ImageRecord r) { promise->set_value(std::move(r)); },
        std::move(cancel));
    return future;
}

std::future<std::vector<ImageRecord>> ImageGenerator::generate_batch(
    std::vector<GenerationRequest> requests, std::size_t player_count, CancelToken cancel)
{
    const auto cap = player_count * static_cast<std::size_t>(options_.images_per_player);
    if (requests.size() > cap) {
        throw Error(Errc::cap_exceeded, std::to_string(requests.size()) + " > " +
                                            std::to_string(cap));
    }
    for (const auto& r : requests) {
        require_prompt(r);
    }

    struct Batch {
        std::mutex mutex;
        std::vector<ImageRecord> records;
        std::size_t remaining;
        std::promise<std::vector<ImageRecord>> promise;
    };
    auto batch = std::make_shared<Batch>();
    batch->records.resize(requests.size());
    batch->remaining = requests.size();
    auto future = batch->promise.get_future();
    if (requests.empty()) {
        batch->promise.set_value({});
        return future;
    }
    for (std::size_t i = 0; i < requests.size(); ++i) {
        generate_async(
            std::move(requests[i]),
            [batch, i](ImageRecord r) {
                std::unique_lock lock(batch->mutex);
                batch->records[i] = std::move(r);
                if (--batch->remaining == 0) {
                    auto out = std::move(batch->records);
                    lock.unlock();
                    batch->promise.set_value(std::move(out));
                }
            },
            cancel);
    }
    return future;
}

}  // namespace shortprompt::imaging
