// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/http_provider.hpp"

#include "bioie/error.hpp"

#include <httplib.h>

namespace bioie {

nlohmann::ordered_json chat_request_body(const PromptPair& prompt, const std::string& model) {
    nlohmann::ordered_json j;
    j["model"] = model;
    j["messages"] = nlohmann::ordered_json::array({
        {{"role", "system"}, {"content", prompt.system}},
        {{"role", "user"}, {"content", prompt.user}},
    });
    if (prompt.determinism == Determinism::Deterministic) j["temperature"] = 0;
    return j;
}

std::optional<std::string> chat_response_content(const std::string& body) {
    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    auto choices = j.find("choices");
    if (choices == j.end() || !choices->is_array() || choices->empty()) return std::nullopt;
    const auto& first = choices->front();
    if (!first.contains("message") || !first["message"].contains("content")) return std::nullopt;
    const auto& content = first["message"]["content"];
    if (!content.is_string()) return std::nullopt;
    return content.get<std::string>();
}

HttpChatProvider::HttpChatProvider(HttpProviderConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) throw PreconditionError("chat endpoint URL is empty");
}

std::string HttpChatProvider::id() const { return "http:" + config_.model; }

ProviderReply HttpChatProvider::send(const PromptPair& prompt) {
    httplib::Client client(config_.base_url);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());

    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    auto res = client.Post(config_.path, headers, chat_request_body(prompt, config_.model).dump(), "application/json");
    if (!res) return {0, httplib::to_string(res.error())};
    if (res->status != 200) return {res->status, res->body};
    // An unexpected envelope is passed through so the caller sees it unparsed.
    return {200, chat_response_content(res->body).value_or(res->body)};
}

}  // namespace bioie
