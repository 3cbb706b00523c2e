#include "shortprompt/gateway/room_codes.hpp"

namespace shortprompt::gateway {

bool is_room_code(std::string_view code) noexcept
{
    if (code.size() < 4 || code.size() > 6) return false;
    for (char c : code) {
        if (kRoomAlphabet.find(c) == std::string_view::npos) return false;
    }
    return true;
}

std::string RoomCodeGenerator::next(const std::function<bool(std::string_view)>& taken)
{
    for (;;) {
        std::string code;
        for (int i = 0; i < length_; ++i) {
            code += kRoomAlphabet[rng_.below(kRoomAlphabet.size())];
        }
        if (!taken || !taken(code)) return code;
    }
}

}  // namespace shortprompt::gateway
