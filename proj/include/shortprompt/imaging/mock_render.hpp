#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace shortprompt::imaging {

struct MockRenderOptions {
    std::uint32_t width = 256;
    std::uint32_t height = 256;
};

/// Deterministic placeholder PNG. Palette and pattern derive from a hash of
/// the exact prompt bytes and the seed; the prompt and seed are stored in
/// "prompt" and "seed" text chunks.
std::vector<std::uint8_t> mock_render(std::string_view prompt, std::uint64_t seed,
                                      const MockRenderOptions& options = {});

std::uint64_t mock_hash(std::string_view prompt, std::uint64_t seed) noexcept;

}  // namespace shortprompt::imaging
