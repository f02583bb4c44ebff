// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "reflectfuzz/agents.hpp"

namespace reflectfuzz {

struct LlmConfig {
    std::string endpoint;  // e.g. http://127.0.0.1:11434
    std::string model = "llama3";
    double temperature = 0.2;
    double timeout_secs = 60.0;
    int parse_retries = 2;
};

struct ChatMessage {
    std::string role;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

class LlmClient {
public:
    virtual ~LlmClient() = default;

    // The reply text, or nullopt on any transport problem (unreachable
    // endpoint, timeout, non-200 status, malformed envelope).
    virtual std::optional<std::string> chat(const std::vector<ChatMessage>& messages, const LlmConfig& config) = 0;
};

// Speaks the local-inference chat protocol: POST {endpoint}/api/chat with
// {"model", "messages", "stream": false}, reading {"message": {"content"}}.
class HttpLlmClient : public LlmClient {
public:
    std::optional<std::string> chat(const std::vector<ChatMessage>& messages, const LlmConfig& config) override;
};

// Canned replies keyed by a digest of the whole message list; unknown
// prompts count as transport failures. Backs offline tests and replay.
class TranscriptLlmClient : public LlmClient {
public:
    static std::uint64_t digest(const std::vector<ChatMessage>& messages);

    void add(const std::vector<ChatMessage>& messages, std::string reply);
    void add_digest(std::uint64_t digest, std::string reply);
    // JSON object file: {"<decimal digest>": "<reply text>", ...}
    static TranscriptLlmClient from_file(const std::string& path);

    std::optional<std::string> chat(const std::vector<ChatMessage>& messages, const LlmConfig& config) override;

private:
    std::map<std::uint64_t, std::string> replies_;
};

struct BackendEvent {
    enum class Kind { Request, Reply, TransportFailure, ParseFailure, Fallback, Accepted };

    Kind kind = Kind::Request;
    AgentId agent = AgentId::TxSeqDrafter;
    int round = 0;
    std::string note;
};

const char* to_string(BackendEvent::Kind k);

// First decodable sequence record embedded in free-form reply text: a
// fenced ```json block, else any balanced object mentioning "txs".
std::optional<TransactionSequence> extract_sequence_record(const std::string& text);

// Element-wise difference rendered as agent edits: per-index field
// overwrites, inserts for extra transactions, deletes (descending) for
// missing ones. Applying the result to `from` reproduces `to`.
AgentAction diff_sequences(const TransactionSequence& from, const TransactionSequence& to, AgentId agent);

// Version tag baked into every prompt, bumped when prompt wording changes.
std::string prompt_contract_version();

// Every agent request asks for one complete revised sequence record; the
// reply is diffed against the input, so edits outside the asking agent's
// permissions surface as strippable field changes rather than trusted
// state. Transport failure flips the policy into its deterministic
// heuristic twin for the rest of the run; parse failures retry first.
class LlmPolicy : public PolicyBackend {
public:
    LlmPolicy(LlmConfig config, std::shared_ptr<LlmClient> client, std::uint64_t rng_seed = 0);

    const char* name() const override { return "llm"; }

    TransactionSequence draft(const ProgramContext& ctx, const ContractModel& model) override;
    AgentAction reflect_global(const ProgramContext& ctx, const ContractModel& model,
                               const TransactionSequence& seq, const Feedback& fb, int round) override;
    AgentAction check_element(AgentId agent, const ProgramContext& ctx, const ContractModel& model,
                              const TransactionSequence& seq, const Feedback& fb, int round) override;

    const std::vector<BackendEvent>& events() const { return events_; }
    // True once a transport failure demoted this run to the heuristic.
    bool degraded() const { return unavailable_; }

    // The exact messages the policy would send; exposed so transcripts can
    // be prepared without duplicating prompt construction.
    std::vector<ChatMessage> draft_messages(const ProgramContext& ctx) const;
    std::vector<ChatMessage> revision_messages(AgentId agent, const ProgramContext& ctx,
                                               const TransactionSequence& seq, const Feedback& fb,
                                               int round) const;

private:
    std::optional<std::string> ask(AgentId agent, int round, std::vector<ChatMessage>& messages);
    std::optional<TransactionSequence> ask_for_sequence(AgentId agent, int round,
                                                        std::vector<ChatMessage> messages);

    LlmConfig config_;
    std::shared_ptr<LlmClient> client_;
    std::unique_ptr<PolicyBackend> fallback_;
    std::vector<BackendEvent> events_;
    bool unavailable_ = false;
};

std::unique_ptr<LlmPolicy> make_llm_backend(LlmConfig config, std::shared_ptr<LlmClient> client,
                                            std::uint64_t rng_seed = 0);

}  // namespace reflectfuzz
