// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "bioie/rate_limiter.hpp"

namespace bioie {

enum class Determinism { Deterministic, Sampled };

/// System text carries the labeled "## Role", "## Task instruction" and
/// "## Output format" sections, in that order.
struct PromptPair {
    std::string system;
    std::string user;
    Determinism determinism = Determinism::Deterministic;

    bool operator==(const PromptPair&) const = default;
};

/// Throws PreconditionError if the user text is empty or a system section is
/// missing or out of order.
void check_prompt(const PromptPair& prompt);

struct LlmResponse {
    std::string raw_text;
    /// Present iff the fence-stripped text is exactly one JSON document.
    std::optional<nlohmann::ordered_json> parsed;
    std::string provider_id;
    std::chrono::milliseconds latency{0};
    int attempt_count = 1;
};

/// Fence-strip and parse; nullopt unless the whole text is one document.
std::optional<nlohmann::ordered_json> parse_response_document(std::string_view raw);

struct RateLimitPolicy {
    std::size_t max_requests_per_window = 60;
    std::chrono::milliseconds window{60000};
    int max_retries = 3;
    std::chrono::milliseconds backoff_base{1000};

    /// Throws PreconditionError unless every field is strictly positive.
    void check() const;
};

/// One attempt's outcome. status 200 carries the completion text in `body`;
/// 0 means the connection failed.
struct ProviderReply {
    int status = 200;
    std::string body;
};

/// A chat-completion backend. send() makes exactly one attempt and must be
/// safe to call concurrently.
class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string id() const = 0;
    virtual ProviderReply send(const PromptPair& prompt) = 0;
};

/// Rate limiting and retries in front of a provider. complete() may be called
/// from any number of threads; the limiter is shared by all of them.
class LlmGateway {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    LlmGateway(std::shared_ptr<ChatProvider> provider, RateLimitPolicy policy);

    /// Validates the prompt before any dispatch. Retries 429, 5xx and
    /// connection failures with exponential backoff, each attempt taking a
    /// rate-limit slot. Throws TransportError once max_retries retries are
    /// spent, or immediately on other non-200 statuses.
    LlmResponse complete(const PromptPair& prompt);

    const RateLimitPolicy& policy() const { return policy_; }
    const ChatProvider& provider() const { return *provider_; }

    /// Replaces the backoff sleep (tests).
    void set_sleeper(Sleeper sleeper) { sleeper_ = std::move(sleeper); }

private:
    std::shared_ptr<ChatProvider> provider_;
    RateLimitPolicy policy_;
    RateLimiter limiter_;
    Sleeper sleeper_;
};

}  // namespace bioie
