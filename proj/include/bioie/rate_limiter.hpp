// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>

namespace bioie {

/// Sliding-window limiter: no interval of length `window` contains more than
/// `max_requests` grants, however many threads call acquire().
///
/// Grants are timed on the steady clock. A small guard interval is added to
/// the window so that callers timestamping their own dispatch a moment after
/// the grant still observe the bound.
class RateLimiter {
public:
    using Clock = std::chrono::steady_clock;

    RateLimiter(std::size_t max_requests, std::chrono::nanoseconds window);

    /// Blocks until a slot is free, records the grant, returns its time.
    Clock::time_point acquire();

    std::size_t max_requests() const { return max_requests_; }
    std::chrono::nanoseconds window() const { return window_; }

private:
    const std::size_t max_requests_;
    const std::chrono::nanoseconds window_;
    const std::chrono::nanoseconds effective_window_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<Clock::time_point> grants_;
};

}  // namespace bioie
