// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/llm_gateway.hpp"

#include <chrono>
#include <string>

namespace bioie {

struct HttpProviderConfig {
    std::string base_url;  ///< scheme://host[:port]
    std::string path = "/v1/chat/completions";
    std::string model = "gpt-4o";
    std::string api_key;
    std::chrono::milliseconds timeout{120000};
};

/// Provider-agnostic chat-completion request: a messages array with system
/// and user roles. Deterministic prompts are sent with temperature 0.
nlohmann::ordered_json chat_request_body(const PromptPair& prompt, const std::string& model);

/// Content of choices[0].message.content; nullopt when the envelope differs.
std::optional<std::string> chat_response_content(const std::string& body);

class HttpChatProvider final : public ChatProvider {
public:
    explicit HttpChatProvider(HttpProviderConfig config);
    std::string id() const override;
    ProviderReply send(const PromptPair& prompt) override;

private:
    HttpProviderConfig config_;
};

}  // namespace bioie
