// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/rate_limiter.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <mutex>
#include <thread>

using bioie::RateLimiter;
using namespace std::chrono_literals;

TEST_CASE("no window holds more than the limit across threads", "[rate_limiter]") {
    RateLimiter limiter(5, 30ms);
    std::mutex mu;
    std::vector<RateLimiter::Clock::time_point> grants;
    {
        std::vector<std::jthread> threads;
        for (int t = 0; t < 6; ++t) {
            threads.emplace_back([&] {
                for (int i = 0; i < 20; ++i) {
                    auto g = limiter.acquire();
                    std::lock_guard lock(mu);
                    grants.push_back(g);
                }
            });
        }
    }
    REQUIRE(grants.size() == 120);
    std::sort(grants.begin(), grants.end());
    for (std::size_t i = 0; i + 5 < grants.size(); ++i) CHECK(grants[i + 5] - grants[i] >= 30ms);
}

TEST_CASE("the first max_requests grants do not wait", "[rate_limiter]") {
    RateLimiter limiter(4, 10s);
    auto start = RateLimiter::Clock::now();
    for (int i = 0; i < 4; ++i) limiter.acquire();
    CHECK(RateLimiter::Clock::now() - start < 1s);
}
