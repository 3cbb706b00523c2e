#include "shortprompt/gateway/rate_limiter.hpp"

namespace shortprompt::gateway {

RateLimiter::RateLimiter(std::size_t limit, std::chrono::milliseconds window, SteadyClock clock)
    : limit_(limit), window_(window), clock_(std::move(clock))
{
}

bool RateLimiter::admit()
{
    const auto now = clock_();
    while (!recent_.empty() && now - recent_.front() >= window_) {
        recent_.pop_front();
    }
    if (recent_.size() >= limit_) return false;
    recent_.push_back(now);
    return true;
}

}  // namespace shortprompt::gateway
