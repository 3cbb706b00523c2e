#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace shortprompt::imaging {

struct PngImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> rgb;  // width * height * 3
    std::map<std::string, std::string> text;
};

/// Encodes 8-bit RGB with UTF-8 text chunks. Output is byte-stable for
/// identical input (no timestamp chunk, fixed compression settings).
std::vector<std::uint8_t> encode_png(const PngImage& image);

/// Fully decodes a PNG to 8-bit RGB. Throws std::runtime_error on any
/// malformed or truncated input.
PngImage decode_png(std::span<const std::uint8_t> bytes);

bool has_png_signature(std::span<const std::uint8_t> bytes) noexcept;

}  // namespace shortprompt::imaging
