#include "shortprompt/imaging/png.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <stdexcept>

namespace shortprompt::imaging {

namespace {

struct WriteBuffer {
    std::vector<std::uint8_t>* out;
};

void write_to_vector(png_structp png, png_bytep data, png_size_t len)
{
    auto* buf = static_cast<WriteBuffer*>(png_get_io_ptr(png));
    buf->out->insert(buf->out->end(), data, data + len);
}

void flush_noop(png_structp) {}

struct ReadBuffer {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

void read_from_span(png_structp png, png_bytep out, png_size_t len)
{
    auto* buf = static_cast<ReadBuffer*>(png_get_io_ptr(png));
    if (buf->pos + len > buf->size) {
        png_error(png, "truncated");
    }
    std::memcpy(out, buf->data + buf->pos, len);
    buf->pos += len;
}

void silent_warning(png_structp, png_const_charp) {}

[[noreturn]] void silent_error(png_structp png, png_const_charp) { png_longjmp(png, 1); }

// setjmp scopes below hold only trivially destructible locals; all owning
// containers live in the callers.
bool write_impl(const PngImage& image, std::vector<png_text>& texts, std::vector<png_bytep>& rows,
                std::vector<std::uint8_t>& out)
{
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, silent_error,
                                              silent_warning);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    WriteBuffer buf{&out};
    png_set_write_fn(png, &buf, write_to_vector, flush_noop);
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    if (!texts.empty()) {
        png_set_text(png, info, texts.data(), static_cast<int>(texts.size()));
    }
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}


bool read_impl(ReadBuffer& src, std::vector<std::uint8_t>& rgb, PngImage& result)
{
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, silent_error,
                                             silent_warning);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }
    png_set_read_fn(png, &src, read_from_span);
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(width) * 3) {
        png_error(png, "unexpected row size");
    }
    result.width = width;
    result.height = height;
    rgb.resize(static_cast<std::size_t>(width) * height * 3);
    for (png_uint_32 y = 0; y < height; ++y) {
        png_read_row(png, rgb.data() + static_cast<std::size_t>(y) * width * 3, nullptr);
    }
    png_read_end(png, info);

    png_textp text = nullptr;
    int count = 0;
    png_get_text(png, info, &text, &count);
    for (int i = 0; i < count; ++i) {
        const std::size_t len =
            text[i].compression >= PNG_ITXT_COMPRESSION_NONE ? text[i].itxt_length
                                                              : text[i].text_length;
        result.text[text[i].key] = std::string(text[i].text, len);
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

}  // namespace

bool has_png_signature(std::span<const std::uint8_t> bytes) noexcept
{
    static constexpr std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    return bytes.size() >= 8 && std::memcmp(bytes.data(), kSig, 8) == 0;
}

std::vector<std::uint8_t> encode_png(const PngImage& image)
{
    if (image.width == 0 || image.height == 0 ||
        image.rgb.size() != static_cast<std::size_t>(image.width) * image.height * 3) {
        throw std::invalid_argument("encode_png: bad dimensions");
    }
    std::vector<std::string> keys;
    std::vector<std::string> values;
    for (const auto& [k, v] : image.text) {
        keys.push_back(k);
        values.push_back(v);
    }
    std::vector<png_text> texts(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        texts[i] = png_text{};
        texts[i].compression = PNG_ITXT_COMPRESSION_NONE;
        texts[i].key = keys[i].data();
        texts[i].text = values[i].data();
        texts[i].itxt_length = values[i].size();
        texts[i].lang = nullptr;
        texts[i].lang_key = nullptr;
    }
    std::vector<png_bytep> rows(image.height);
    auto* base = const_cast<std::uint8_t*>(image.rgb.data());
    for (std::uint32_t y = 0; y < image.height; ++y) {
        rows[y] = base + static_cast<std::size_t>(y) * image.width * 3;
    }
    std::vector<std::uint8_t> out;
    if (!write_impl(image, texts, rows, out)) {
        throw std::runtime_error("encode_png failed");
    }
    return out;
}

PngImage decode_png(std::span<const std::uint8_t> bytes)
{
    if (!has_png_signature(bytes)) {
        throw std::runtime_error("decode_png: missing signature");
    }
    ReadBuffer src{bytes.data(), bytes.size(), 0};
    PngImage result;
    std::vector<std::uint8_t> rgb;
    if (!read_impl(src, rgb, result)) {
        throw std::runtime_error("decode_png: malformed image");
    }
    result.rgb = std::move(rgb);
    return result;
}

}  // namespace shortprompt::imaging
