// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#include <sstream>

#include "reflectfuzz/llm_policy.hpp"

namespace reflectfuzz {

const char* to_string(BackendEvent::Kind k) {
    switch (k) {
    case BackendEvent::Kind::Request: return "request";
    case BackendEvent::Kind::Reply: return "reply";
    case BackendEvent::Kind::TransportFailure: return "transport_failure";
    case BackendEvent::Kind::ParseFailure: return "parse_failure";
    case BackendEvent::Kind::Fallback: return "fallback";
    case BackendEvent::Kind::Accepted: return "accepted";
    }
    return "?";
}

std::string prompt_contract_version() { return "v1"; }

namespace {

std::string render_interface(const std::vector<FunctionDescriptor>& iface) {
    std::ostringstream os;
    for (const FunctionDescriptor& d : iface) {
        os << "- " << d.name << "(";
        for (size_t i = 0; i < d.params.size(); ++i) {
            if (i) os << ", ";
            os << to_string(d.params[i].type) << " " << d.params[i].name;
        }
        os << ")" << (d.payable ? " payable" : "") << "\n";
    }
    return os.str();
}

std::string render_pool(const SeedPool& pool) {
    std::ostringstream os;
    os << "deployer: " << to_hex(pool.deployer) << "\nusers:";
    for (const Address& a : pool.users) os << " " << to_hex(a);
    os << "\nattackers:";
    for (const Address& a : pool.attackers) os << " " << to_hex(a);
    os << "\namounts:";
    for (std::uint64_t v : pool.amounts) os << " " << v;
    os << "\n";
    return os.str();
}

std::string permitted_fields(AgentId agent) {
    const AgentProfile& p = profile(agent);
    std::ostringstream os;
    bool first = true;
    for (TxField f : {TxField::Function, TxField::Args, TxField::Sender, TxField::Amount, TxField::Structure}) {
        if (!p.allowed.count(f)) continue;
        if (!first) os << ", ";
        os << to_string(f);
        first = false;
    }
    return os.str();
}

std::string system_prompt(AgentId agent) {
    std::ostringstream os;
    os << "You are " << to_string(agent) << ", one agent in a transaction-sequence fuzzing team (prompt "
       << prompt_contract_version() << "). Your charter: " << profile(agent).charter << ".\n"
       << "You may change only these parts of the sequence: " << permitted_fields(agent)
       << ". Changes outside that are discarded.\n"
       << "Reply with exactly one JSON object, the complete revised sequence record:\n"
       << "{\"txs\": [{\"function\": str, \"args\": [{\"type\": str, \"value\": str}], "
          "\"sender\": \"0x..\", \"amount\": \"decimal\"}]}\n"
       << "Senders must come from the account pool, amounts from the amount list. No commentary.";
    return os.str();
}

}  // namespace

std::optional<TransactionSequence> extract_sequence_record(const std::string& text) {
    auto try_decode = [](const std::string& candidate) -> std::optional<TransactionSequence> {
        if (candidate.find("\"txs\"") == std::string::npos) return std::nullopt;
        try {
            return decode_sequence(candidate);
        } catch (const DecodeError&) {
            return std::nullopt;
        }
    };

    // fenced blocks get first claim
    std::size_t pos = 0;
    while ((pos = text.find("```", pos)) != std::string::npos) {
        std::size_t start = text.find('\n', pos);
        if (start == std::string::npos) break;
        std::size_t end = text.find("```", start);
        if (end == std::string::npos) break;
        if (auto seq = try_decode(text.substr(start + 1, end - start - 1))) return seq;
        pos = end + 3;
    }

    // otherwise scan balanced objects
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{') continue;
        int depth = 0;
        bool in_string = false;
        for (std::size_t j = i; j < text.size(); ++j) {
            char c = text[j];
            if (in_string) {
                if (c == '\\') ++j;
                else if (c == '"') in_string = false;
                continue;
            }
            if (c == '"') in_string = true;
            else if (c == '{') ++depth;
            else if (c == '}') {
                if (--depth == 0) {
                    if (auto seq = try_decode(text.substr(i, j - i + 1))) return seq;
                    break;
                }
            }
        }
    }
    return std::nullopt;
}

AgentAction diff_sequences(const TransactionSequence& from, const TransactionSequence& to, AgentId agent) {
    AgentAction act;
    act.agent = agent;
    std::size_t common = std::min(from.txs.size(), to.txs.size());
    for (std::size_t i = 0; i < common; ++i) {
        const Transaction& a = from.txs[i];
        const Transaction& b = to.txs[i];
        int k = static_cast<int>(i);
        if (a.function != b.function) act.field_edits.push_back({k, TxField::Function, b.function, {}, {}, 0});
        if (!(a.args == b.args)) act.field_edits.push_back({k, TxField::Args, "", b.args, {}, 0});
        if (!(a.sender == b.sender)) act.field_edits.push_back({k, TxField::Sender, "", {}, b.sender, 0});
        if (a.amount != b.amount) act.field_edits.push_back({k, TxField::Amount, "", {}, {}, b.amount});
    }
    for (std::size_t i = common; i < to.txs.size(); ++i) {
        StructuralEdit e;
        e.op = StructuralEdit::Op::Insert;
        e.index = static_cast<int>(i);
        e.tx = to.txs[i];
        act.structural_edits.push_back(std::move(e));
    }
    for (std::size_t i = from.txs.size(); i > common; --i) {
        StructuralEdit e;
        e.op = StructuralEdit::Op::Delete;
        e.index = static_cast<int>(i - 1);
        act.structural_edits.push_back(std::move(e));
    }
    return act;
}

LlmPolicy::LlmPolicy(LlmConfig config, std::shared_ptr<LlmClient> client, std::uint64_t rng_seed)
    : config_(std::move(config)), client_(std::move(client)), fallback_(make_heuristic_backend(rng_seed)) {}

std::vector<ChatMessage> LlmPolicy::draft_messages(const ProgramContext& ctx) const {
    std::ostringstream user;
    user << "Target contract:\n" << ctx.source_text << "\n\nCallable interface:\n"
         << render_interface(ctx.interface) << "\nAccount pool:\n" << render_pool(ctx.seed_pool)
         << "\nDraft a transaction sequence likely to reach an exploitable state. Reply with the record only.";
    return {{"system", system_prompt(AgentId::TxSeqDrafter)}, {"user", user.str()}};
}

std::vector<ChatMessage> LlmPolicy::revision_messages(AgentId agent, const ProgramContext& ctx,
                                                      const TransactionSequence& seq, const Feedback& fb,
                                                      int round) const {
    std::ostringstream user;
    user << "Target contract:\n" << ctx.source_text << "\n\nCallable interface:\n"
         << render_interface(ctx.interface) << "\nAccount pool:\n" << render_pool(ctx.seed_pool)
         << "\nCurrent sequence record:\n" << encode_sequence(seq) << "\nRun summary (round " << round
         << "):\n" << fb.summary_text
         << "\n\nRevise the sequence within your charter. Reply with the complete record only.";
    return {{"system", system_prompt(agent)}, {"user", user.str()}};
}

std::optional<std::string> LlmPolicy::ask(AgentId agent, int round, std::vector<ChatMessage>& messages) {
    if (unavailable_) return std::nullopt;
    events_.push_back({BackendEvent::Kind::Request, agent, round, ""});
    auto reply = client_->chat(messages, config_);
    if (!reply) {
        events_.push_back({BackendEvent::Kind::TransportFailure, agent, round, "no usable reply"});
        events_.push_back({BackendEvent::Kind::Fallback, agent, round, "backend unavailable"});
        unavailable_ = true;
        return std::nullopt;
    }
    events_.push_back({BackendEvent::Kind::Reply, agent, round, ""});
    return reply;
}

std::optional<TransactionSequence> LlmPolicy::ask_for_sequence(AgentId agent, int round,
                                                               std::vector<ChatMessage> messages) {
    for (int attempt = 0; attempt <= config_.parse_retries; ++attempt) {
        auto reply = ask(agent, round, messages);
        if (!reply) return std::nullopt;
        if (auto seq = extract_sequence_record(*reply)) {
            events_.push_back({BackendEvent::Kind::Accepted, agent, round, ""});
            return seq;
        }
        events_.push_back(
            {BackendEvent::Kind::ParseFailure, agent, round, "attempt " + std::to_string(attempt + 1)});
        messages.push_back({"assistant", *reply});
        messages.push_back({"user",
                            "That reply could not be decoded. Reply with exactly one JSON object holding the "
                            "complete revised sequence record and nothing else."});
    }
    events_.push_back({BackendEvent::Kind::Fallback, agent, round, "parse retries exhausted"});
    return std::nullopt;
}

TransactionSequence LlmPolicy::draft(const ProgramContext& ctx, const ContractModel& model) {
    if (auto seq = ask_for_sequence(AgentId::TxSeqDrafter, 0, draft_messages(ctx))) {
        seq->origin = SequenceOrigin::Drafted;
        return *seq;
    }
    return fallback_->draft(ctx, model);
}

AgentAction LlmPolicy::reflect_global(const ProgramContext& ctx, const ContractModel& model,
                                      const TransactionSequence& seq, const Feedback& fb, int round) {
    if (auto revised = ask_for_sequence(AgentId::TxSeqRefiner, round,
                                        revision_messages(AgentId::TxSeqRefiner, ctx, seq, fb, round))) {
        AgentAction act = diff_sequences(seq, *revised, AgentId::TxSeqRefiner);
        act.rationale = "model revision";
        return act;
    }
    return fallback_->reflect_global(ctx, model, seq, fb, round);
}

AgentAction LlmPolicy::check_element(AgentId agent, const ProgramContext& ctx, const ContractModel& model,
                                     const TransactionSequence& seq, const Feedback& fb, int round) {
    if (auto revised = ask_for_sequence(agent, round, revision_messages(agent, ctx, seq, fb, round))) {
        AgentAction act = diff_sequences(seq, *revised, agent);
        act.rationale = "model revision";
        return act;
    }
    return fallback_->check_element(agent, ctx, model, seq, fb, round);
}

std::unique_ptr<LlmPolicy> make_llm_backend(LlmConfig config, std::shared_ptr<LlmClient> client,
                                            std::uint64_t rng_seed) {
    return std::make_unique<LlmPolicy>(std::move(config), std::move(client), rng_seed);
}

}  // namespace reflectfuzz
