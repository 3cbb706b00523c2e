#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>

namespace shortprompt::gateway {

using SteadyClock = std::function<std::chrono::steady_clock::time_point()>;

// Sliding-window cap: at most `limit` admissions in any `window`.
class RateLimiter {
public:
    explicit RateLimiter(std::size_t limit = 10, std::chrono::milliseconds window = std::chrono::seconds(1),
                         SteadyClock clock = [] { return std::chrono::steady_clock::now(); });

    bool admit();

private:
    std::size_t limit_;
    std::chrono::milliseconds window_;
    SteadyClock clock_;
    std::deque<std::chrono::steady_clock::time_point> recent_;
};

}  // namespace shortprompt::gateway
