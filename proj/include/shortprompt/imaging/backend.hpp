#pragma once

#include "shortprompt/imaging/generation.hpp"
#include "shortprompt/imaging/mock_render.hpp"

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace shortprompt::imaging {

struct BackendResult {
    std::vector<std::uint8_t> png;  // empty on failure
    FailureReason reason = FailureReason::none;
    std::string detail;

    bool ok() const noexcept { return reason == FailureReason::none && !png.empty(); }
};

// One blocking render attempt. Implementations must be safe to call from
// several threads at once.
class ImageBackend {
public:
    virtual ~ImageBackend() = default;

    virtual std::string provider_id() const = 0;

    /// Key under which originals are cached; must change whenever the same
    /// prompt would render differently.
    virtual std::string cache_identity(const GenerationRequest& request) const = 0;

    virtual BackendResult render(const GenerationRequest& request,
                                 std::chrono::milliseconds timeout) = 0;

    virtual bool healthy() { return true; }
};

struct MockOptions {
    MockRenderOptions render;
    // Deterministic failure injection in permille, keyed on request id and attempt.
    std::uint32_t fail_permille = 0;
    std::chrono::milliseconds latency{0};
};

class MockBackend final : public ImageBackend {
public:
    explicit MockBackend(MockOptions options = {}) : options_(options) {}

    std::string provider_id() const override { return "mock-v1"; }
    std::string cache_identity(const GenerationRequest& request) const override;
    BackendResult render(const GenerationRequest& request,
                         std::chrono::milliseconds timeout) override;

private:
    MockOptions options_;
};

struct RemoteOptions {
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/images/generations";
    std::string health_path = "/v1/models";
    std::string model = "gpt-image-1";
    std::string size = "1024x1024";
    std::string api_key_env = "OPENAI_API_KEY";
};

// JSON-over-HTTP(S) image endpoint in the OpenAI images API shape:
// POST {"model", "prompt", "size", "n": 1} -> {"data": [{"b64_json": ...}]}.
class RemoteBackend final : public ImageBackend {
public:
    explicit RemoteBackend(RemoteOptions options);

    std::string provider_id() const override { return "remote:" + options_.model; }
    std::string cache_identity(const GenerationRequest& request) const override;
    BackendResult render(const GenerationRequest& request,
                         std::chrono::milliseconds timeout) override;
    bool healthy() override;

    /// Request body sent for `prompt`; the prompt string is embedded unchanged.
    std::string request_body(const std::string& prompt) const;

private:
    RemoteOptions options_;
    std::string api_key_;
};

}  // namespace shortprompt::imaging
