#pragma once

#include "shortprompt/core/random.hpp"

#include <functional>
#include <string>
#include <string_view>

namespace shortprompt::gateway {

// Uppercase letters and digits without 0/O and 1/I.
inline constexpr std::string_view kRoomAlphabet = "ABCDEFGHJKLMNPQRSTUVWXYZ23456789";
inline constexpr int kRoomCodeLength = 5;

bool is_room_code(std::string_view code) noexcept;

// Seeded so that a fixed registry seed reproduces the same codes.
class RoomCodeGenerator {
public:
    explicit RoomCodeGenerator(std::uint64_t seed, int length = kRoomCodeLength)
        : rng_(seed), length_(length) {}

    /// Draws until `taken` rejects the candidate.
    std::string next(const std::function<bool(std::string_view)>& taken);

private:
    Rng rng_;
    int length_;
};

}  // namespace shortprompt::gateway
