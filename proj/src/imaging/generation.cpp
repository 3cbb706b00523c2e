#include "shortprompt/imaging/generation.hpp"

namespace shortprompt::imaging {

std::string_view to_string(GenerationKind kind) noexcept
{
    switch (kind) {
    case GenerationKind::original: return "original";
    case GenerationKind::main: return "main";
    case GenerationKind::quick_draw: return "quick-draw";
    }
    return "main";
}

std::optional<GenerationKind> parse_generation_kind(std::string_view name) noexcept
{
    for (auto k : {GenerationKind::original, GenerationKind::main, GenerationKind::quick_draw}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

std::string_view to_string(ImageStatus status) noexcept
{
    return status == ImageStatus::success ? "success" : "failed";
}

std::string_view to_string(FailureReason reason) noexcept
{
    switch (reason) {
    case FailureReason::none: return "none";
    case FailureReason::timeout: return "timeout";
    case FailureReason::provider_error: return "provider-error";
    case FailureReason::cancelled: return "cancelled";
    }
    return "none";
}

std::optional<FailureReason> parse_failure_reason(std::string_view name) noexcept
{
    for (auto r : {FailureReason::none, FailureReason::timeout, FailureReason::provider_error,
                   FailureReason::cancelled}) {
        if (to_string(r) == name) return r;
    }
    return std::nullopt;
}

}  // namespace shortprompt::imaging
