#include "shortprompt/imaging/mock_render.hpp"

#include "shortprompt/core/random.hpp"
#include "shortprompt/imaging/png.hpp"

#include <array>
#include <string>

namespace shortprompt::imaging {

namespace {

struct Rgb {
    std::uint8_t r, g, b;
};

Rgb color_from(Rng& rng)
{
    const auto v = rng.next();
    return {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
            static_cast<std::uint8_t>(v >> 16)};
}

enum class Pattern { stripes, checker, rings, diagonal };

}  // namespace

std::uint64_t mock_hash(std::string_view prompt, std::uint64_t seed) noexcept
{
    return mix_seed(fnv1a64(prompt), seed);
}

std::vector<std::uint8_t> mock_render(std::string_view prompt, std::uint64_t seed,
                                      const MockRenderOptions& options)
{
    Rng rng(mock_hash(prompt, seed));
    std::array<Rgb, 4> palette{};
    for (auto& c : palette) c = color_from(rng);
    const auto pattern = static_cast<Pattern>(rng.below(4));
    const auto period = static_cast<std::uint32_t>(4 + rng.below(28));
    const auto cx = static_cast<std::int64_t>(rng.below(options.width));
    const auto cy = static_cast<std::int64_t>(rng.below(options.height));

    PngImage image;
    image.width = options.width;
    image.height = options.height;
    image.rgb.resize(static_cast<std::size_t>(options.width) * options.height * 3);
    auto* px = image.rgb.data();
    for (std::uint32_t y = 0; y < options.height; ++y) {
        for (std::uint32_t x = 0; x < options.width; ++x) {
            std::uint32_t band = 0;
            switch (pattern) {
            case Pattern::stripes: band = y / period; break;
            case Pattern::checker: band = x / period + y / period; break;
            case Pattern::diagonal: band = (x + y) / period; break;
            case Pattern::rings: {
                const auto dx = static_cast<std::int64_t>(x) - cx;
                const auto dy = static_cast<std::int64_t>(y) - cy;
                band = static_cast<std::uint32_t>((dx * dx + dy * dy) / (period * period * 4));
                break;
            }
            }
            const auto& c = palette[band % palette.size()];
            *px++ = c.r;
            *px++ = c.g;
            *px++ = c.b;
        }
    }
    image.text["prompt"] = std::string(prompt);
    image.text["seed"] = std::to_string(seed);
    image.text["generator"] = "shortprompt-mock/1";
    return encode_png(image);
}

}  // namespace shortprompt::imaging
