// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/rate_limiter.hpp"

#include "bioie/error.hpp"

#include <algorithm>

namespace bioie {

namespace {

std::chrono::nanoseconds guard_for(std::chrono::nanoseconds window) {
    return std::max<std::chrono::nanoseconds>(window / 50, std::chrono::milliseconds(1));
}

}  // namespace

RateLimiter::RateLimiter(std::size_t max_requests, std::chrono::nanoseconds window)
    : max_requests_(max_requests), window_(window), effective_window_(window + guard_for(window)) {
    if (max_requests == 0) throw PreconditionError("rate limit must allow at least one request");
    if (window <= std::chrono::nanoseconds::zero()) throw PreconditionError("rate window must be positive");
}

RateLimiter::Clock::time_point RateLimiter::acquire() {
    std::unique_lock lk(mu_);
    for (;;) {
        auto now = Clock::now();
        while (!grants_.empty() && grants_.front() + effective_window_ <= now) grants_.pop_front();
        if (grants_.size() < max_requests_) {
            grants_.push_back(now);
            return now;
        }
        cv_.wait_until(lk, grants_.front() + effective_window_);
    }
}

}  // namespace bioie
