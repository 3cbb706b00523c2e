#pragma once

#include "shortprompt/core/ids.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shortprompt::imaging {

enum class GenerationKind { original, main, quick_draw };

std::string_view to_string(GenerationKind kind) noexcept;
std::optional<GenerationKind> parse_generation_kind(std::string_view name) noexcept;

struct GenerationContext {
    std::string session;
    int round = 0;
    std::optional<PlayerId> player;  // absent for originals
    GenerationKind kind = GenerationKind::main;
    std::uint64_t provider_seed = 0;  // honoured by the mock provider only
};

struct GenerationRequest {
    std::string prompt;  // forwarded verbatim
    std::string request_id;
    GenerationContext context;
};

enum class ImageStatus { success, failed };

enum class FailureReason { none, timeout, provider_error, cancelled };

std::string_view to_string(ImageStatus status) noexcept;
std::string_view to_string(FailureReason reason) noexcept;
std::optional<FailureReason> parse_failure_reason(std::string_view name) noexcept;

struct ImageRecord {
    std::string request_id;
    ImageStatus status = ImageStatus::failed;
    std::string asset_key;  // empty iff failed
    std::int64_t latency_ms = 0;
    std::string provider_id;
    int attempt = 1;
    FailureReason reason = FailureReason::none;
    std::string detail;

    bool ok() const noexcept { return status == ImageStatus::success; }
};

// Shared flag checked before each provider call and before delivery.
class CancelSource {
public:
    CancelSource() : flag_(std::make_shared<std::atomic<bool>>(false)) {}

    void cancel() noexcept { flag_->store(true); }
    bool cancelled() const noexcept { return flag_->load(); }
    std::shared_ptr<const std::atomic<bool>> token() const noexcept { return flag_; }

private:
    std::shared_ptr<std::atomic<bool>> flag_;
};

using CancelToken = std::shared_ptr<const std::atomic<bool>>;

}  // namespace shortprompt::imaging
