#pragma once

#include "shortprompt/imaging/asset_store.hpp"
#include "shortprompt/imaging/backend.hpp"
#include "shortprompt/imaging/generation.hpp"

#include <boost/asio/thread_pool.hpp>

#include <chrono>
#include <functional>
#include <future>
#include <memory>
#include <vector>

namespace shortprompt::imaging {

struct GeneratorOptions {
    std::size_t threads = 4;
    std::chrono::milliseconds timeout = std::chrono::seconds(90);
    int max_attempts = 2;
    int images_per_player = 3;  // round cap multiplier for generate_batch
};

// Runs backend renders on a worker pool, applies the retry policy, stores
// successful images in the asset store and reports one ImageRecord per request.
class ImageGenerator {
public:
    using Callback = std::function<void(ImageRecord)>;

    ImageGenerator(std::shared_ptr<ImageBackend> backend, std::shared_ptr<AssetStore> store,
                   GeneratorOptions options = {});
    ~ImageGenerator();

    ImageGenerator(const ImageGenerator&) = delete;
    ImageGenerator& operator=(const ImageGenerator&) = delete;

    /// Throws Errc::empty_prompt before any provider call. The callback runs
    /// on a worker thread.
    void generate_async(GenerationRequest request, Callback done, CancelToken cancel = {});

    std::future<ImageRecord> generate(GenerationRequest request, CancelToken cancel = {});

    /// Issues every request concurrently. Throws Errc::cap_exceeded when the
    /// list is longer than player_count * images_per_player.
    std::future<std::vector<ImageRecord>> generate_batch(std::vector<GenerationRequest> requests,
                                                         std::size_t player_count,
                                                         CancelToken cancel = {});

    ImageBackend& backend() noexcept { return *backend_; }
    AssetStore& store() noexcept { return *store_; }
    const GeneratorOptions& options() const noexcept { return options_; }

    /// Synchronous body of one request; exposed for tests.
    ImageRecord run(const GenerationRequest& request, const CancelToken& cancel);

private:
    std::shared_ptr<ImageBackend> backend_;
    std::shared_ptr<AssetStore> store_;
    GeneratorOptions options_;
    boost::asio::thread_pool pool_;
};

}  // namespace shortprompt::imaging
