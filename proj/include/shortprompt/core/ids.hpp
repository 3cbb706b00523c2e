#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace shortprompt {

// Seat number within one session, assigned in join order starting at 1.
struct PlayerId {
    std::uint32_t value = 0;

    auto operator<=>(const PlayerId&) const = default;
};

inline std::string to_string(PlayerId id) { return "p" + std::to_string(id.value); }

}  // namespace shortprompt

template <>
struct std::hash<shortprompt::PlayerId> {
    std::size_t operator()(shortprompt::PlayerId id) const noexcept
    {
        return std::hash<std::uint32_t>{}(id.value);
    }
};
