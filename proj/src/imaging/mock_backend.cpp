#include "shortprompt/core/random.hpp"
#include "shortprompt/imaging/backend.hpp"

#include <thread>

namespace shortprompt::imaging {

std::string MockBackend::cache_identity(const GenerationRequest& request) const
{
    return provider_id() + "/seed=" + std::to_string(request.context.provider_seed) + "/" +
           std::to_string(options_.render.width) + "x" + std::to_string(options_.render.height);
}

BackendResult MockBackend::render(const GenerationRequest& request,
                                  std::chrono::milliseconds timeout)
{
    if (options_.latency.count() > 0) {
        if (options_.latency > timeout) {
            std::this_thread::sleep_for(timeout);
            return {{}, FailureReason::timeout, "mock latency exceeds timeout"};
        }
        std::this_thread::sleep_for(options_.latency);
    }
    if (options_.fail_permille > 0) {
        const auto roll = fnv1a64(request.request_id, request.context.provider_seed) % 1000;
        if (roll < options_.fail_permille) {
            return {{}, FailureReason::provider_error, "injected failure"};
        }
    }
    return {mock_render(request.prompt, request.context.provider_seed, options_.render),
            FailureReason::none, {}};
}

}  // namespace shortprompt::imaging
