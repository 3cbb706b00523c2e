#include "shortprompt/core/codec.hpp"

#include "shortprompt/core/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

namespace shortprompt::codec {

std::string sha256_hex(std::span<const std::uint8_t> bytes)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[md[i] >> 4]);
        out.push_back(kHex[md[i] & 0x0F]);
    }
    return out;
}

std::string sha256_hex(std::string_view bytes)
{
    return sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::vector<std::uint8_t> base64_decode(std::string_view text)
{
    std::string compact;
    compact.reserve(text.size());
    for (char c : text) {
        if (c != '\n' && c != '\r') compact.push_back(c);
    }
    if (compact.size() % 4 != 0) {
        throw Error(Errc::parse_error, "base64 length");
    }
    std::vector<std::uint8_t> out(compact.size() / 4 * 3 + 1);
    const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(compact.data()),
                                  static_cast<int>(compact.size()));
    if (n < 0) {
        throw Error(Errc::parse_error, "base64 alphabet");
    }
    std::size_t len = static_cast<std::size_t>(n);
    // EVP_DecodeBlock counts padding characters as zero bytes.
    for (auto it = compact.rbegin(); it != compact.rend() && *it == '='; ++it) {
        --len;
    }
    out.resize(len);
    return out;
}

std::string base64_encode(std::span<const std::uint8_t> bytes)
{
    std::string out((bytes.size() + 2) / 3 * 4 + 1, '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                  static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::string hex64(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace shortprompt::codec
