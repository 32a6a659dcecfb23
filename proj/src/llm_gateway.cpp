// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/llm_gateway.hpp"

#include "bioie/error.hpp"
#include "bioie/schema_model.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <thread>

namespace bioie {

void check_prompt(const PromptPair& prompt) {
    if (prompt.user.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw PreconditionError("prompt user text is empty");
    }
    std::size_t pos = 0;
    for (const char* section : {"## Role", "## Task instruction", "## Output format"}) {
        auto at = prompt.system.find(section, pos);
        if (at == std::string::npos) {
            throw PreconditionError(std::string("system prompt lacks section '") + section + "' in order");
        }
        pos = at + 1;
    }
}

std::optional<nlohmann::ordered_json> parse_response_document(std::string_view raw) {
    auto text = strip_code_fence(raw);
    if (text.empty()) return std::nullopt;
    auto j = nlohmann::ordered_json::parse(text, nullptr, false);
    if (j.is_discarded() || !(j.is_object() || j.is_array())) return std::nullopt;
    return j;
}

void RateLimitPolicy::check() const {
    if (max_requests_per_window == 0 || window.count() <= 0 || max_retries <= 0 || backoff_base.count() <= 0) {
        throw PreconditionError("rate-limit policy fields must all be strictly positive");
    }
}

LlmGateway::LlmGateway(std::shared_ptr<ChatProvider> provider, RateLimitPolicy policy)
    : provider_(std::move(provider)),
      policy_((policy.check(), policy)),
      limiter_(policy_.max_requests_per_window, policy_.window),
      sleeper_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
    if (!provider_) throw PreconditionError("no chat provider configured");
}

LlmResponse LlmGateway::complete(const PromptPair& prompt) {
    check_prompt(prompt);

    const auto start = std::chrono::steady_clock::now();
    int last_status = 0;
    for (int attempt = 1; attempt <= policy_.max_retries + 1; ++attempt) {
        if (attempt > 1) {
            auto shift = std::min(attempt - 2, 5);
            sleeper_(policy_.backoff_base * (1 << shift));
        }
        limiter_.acquire();
        auto reply = provider_->send(prompt);
        last_status = reply.status;
        if (reply.status == 200) {
            LlmResponse r;
            r.raw_text = std::move(reply.body);
            r.parsed = parse_response_document(r.raw_text);
            r.provider_id = provider_->id();
            r.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
            r.attempt_count = attempt;
            return r;
        }
        bool retryable = reply.status == 0 || reply.status == 429 || reply.status >= 500;
        if (!retryable) {
            throw TransportError(provider_->id() + ": HTTP " + std::to_string(reply.status), reply.status);
        }
        spdlog::debug("{}: status {} on attempt {}", provider_->id(), reply.status, attempt);
    }
    throw TransportError(provider_->id() + ": retry budget exhausted (last status " + std::to_string(last_status) + ")",
                         last_status);
}

}  // namespace bioie
