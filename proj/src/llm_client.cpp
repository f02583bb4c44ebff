// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"
#include "reflectfuzz/llm_policy.hpp"

namespace reflectfuzz {

using nlohmann::json;

namespace {

// origin ("http://host:port") and path prefix of an endpoint URL
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    std::string rest = endpoint;
    std::string scheme = "http://";
    auto scheme_pos = rest.find("://");
    if (scheme_pos != std::string::npos) {
        scheme = rest.substr(0, scheme_pos + 3);
        rest = rest.substr(scheme_pos + 3);
    }
    std::string prefix;
    auto slash = rest.find('/');
    if (slash != std::string::npos) {
        prefix = rest.substr(slash);
        rest = rest.substr(0, slash);
    }
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {scheme + rest, prefix};
}

}  // namespace

std::optional<std::string> HttpLlmClient::chat(const std::vector<ChatMessage>& messages, const LlmConfig& config) {
    if (config.endpoint.empty()) return std::nullopt;
    auto [origin, prefix] = split_endpoint(config.endpoint);

    httplib::Client cli(origin);
    time_t secs = static_cast<time_t>(config.timeout_secs);
    time_t usecs = static_cast<time_t>((config.timeout_secs - std::floor(config.timeout_secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);

    json body;
    body["model"] = config.model;
    body["stream"] = false;
    body["options"] = {{"temperature", config.temperature}};
    body["messages"] = json::array();
    for (const ChatMessage& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});

    auto res = cli.Post(prefix + "/api/chat", body.dump(), "application/json");
    if (!res || res->status != 200) return std::nullopt;

    json doc = json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    if (!doc.contains("message") || !doc["message"].is_object()) return std::nullopt;
    const json& msg = doc["message"];
    if (!msg.contains("content") || !msg["content"].is_string()) return std::nullopt;
    return msg["content"].get<std::string>();
}

std::uint64_t TranscriptLlmClient::digest(const std::vector<ChatMessage>& messages) {
    // FNV-1a, 64 bit
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const ChatMessage& m : messages) {
        mix(m.role);
        h ^= 0x1f;
        h *= 1099511628211ull;
        mix(m.content);
        h ^= 0x1e;
        h *= 1099511628211ull;
    }
    return h;
}

void TranscriptLlmClient::add(const std::vector<ChatMessage>& messages, std::string reply) {
    replies_[digest(messages)] = std::move(reply);
}

void TranscriptLlmClient::add_digest(std::uint64_t d, std::string reply) { replies_[d] = std::move(reply); }

TranscriptLlmClient TranscriptLlmClient::from_file(const std::string& path) {
    TranscriptLlmClient client;
    std::ifstream in(path);
    if (!in) return client;
    std::stringstream buf;
    buf << in.rdbuf();
    json doc = json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return client;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!it.value().is_string()) continue;
        try {
            client.add_digest(std::stoull(it.key()), it.value().get<std::string>());
        } catch (const std::exception&) {
            // skip malformed keys
        }
    }
    return client;
}

std::optional<std::string> TranscriptLlmClient::chat(const std::vector<ChatMessage>& messages,
                                                     const LlmConfig&) {
    auto it = replies_.find(digest(messages));
    if (it == replies_.end()) return std::nullopt;
    return it->second;
}

}  // namespace reflectfuzz
