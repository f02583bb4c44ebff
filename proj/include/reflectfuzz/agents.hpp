// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "reflectfuzz/contract_model.hpp"
#include "reflectfuzz/feedback.hpp"
#include "reflectfuzz/txmodel.hpp"

namespace reflectfuzz {

enum class AgentId { TxSeqDrafter, TxSeqRefiner, FunChecker, ArgChecker, SNDChecker, AMTChecker };

const char* to_string(AgentId a);

enum class TxField { Function, Args, Sender, Amount, Structure };

const char* to_string(TxField f);

// What an agent is for and which transaction fields it may touch. The
// checker agents are deliberately narrow; edits outside the charter are
// stripped, not trusted.
struct AgentProfile {
    AgentId id = AgentId::TxSeqDrafter;
    std::set<TxField> allowed;
    std::string charter;
};

const std::vector<AgentProfile>& agent_profiles();
const AgentProfile& profile(AgentId id);

// Overwrite of a single field of one transaction. Only the member matching
// `field` is meaningful.
struct FieldEdit {
    int tx_index = 0;
    TxField field = TxField::Function;
    std::string function_name;
    std::vector<Value> args;
    Address sender{};
    std::uint64_t amount = 0;

    bool operator==(const FieldEdit&) const = default;
};

struct StructuralEdit {
    enum class Op { Insert, Delete, Reorder };

    Op op = Op::Insert;
    int index = 0;
    int to_index = 0;  // Reorder destination
    Transaction tx;    // Insert payload

    bool operator==(const StructuralEdit&) const = default;
};

const char* to_string(StructuralEdit::Op op);

struct AgentAction {
    AgentId agent = AgentId::TxSeqDrafter;
    std::vector<FieldEdit> field_edits;
    std::vector<StructuralEdit> structural_edits;
    std::string rationale;

    bool empty() const { return field_edits.empty() && structural_edits.empty(); }
    bool operator==(const AgentAction&) const = default;
};

struct PermissionViolation {
    AgentId agent = AgentId::TxSeqDrafter;
    TxField field = TxField::Function;
    int tx_index = 0;

    bool operator==(const PermissionViolation&) const = default;
};

struct EnforcementResult {
    AgentAction action;  // the permitted remainder
    std::vector<PermissionViolation> violations;
};

// Drops every edit outside the agent's charter and records what was
// dropped. Structural edits require the Structure permission and report
// their source index.
EnforcementResult enforce_permissions(const AgentAction& action);

// A strategy for producing agent actions. Implementations must be
// deterministic in (inputs, round, construction seed).
class PolicyBackend {
public:
    virtual ~PolicyBackend() = default;

    virtual const char* name() const = 0;

    // TxSeqDrafter: a fresh whole sequence.
    virtual TransactionSequence draft(const ProgramContext& ctx, const ContractModel& model) = 0;

    // TxSeqRefiner: one whole-sequence revision given the latest run.
    virtual AgentAction reflect_global(const ProgramContext& ctx, const ContractModel& model,
                                       const TransactionSequence& seq, const Feedback& fb, int round) = 0;

    // The four narrow checkers.
    virtual AgentAction check_element(AgentId agent, const ProgramContext& ctx, const ContractModel& model,
                                      const TransactionSequence& seq, const Feedback& fb, int round) = 0;
};

std::unique_ptr<PolicyBackend> make_heuristic_backend(std::uint64_t rng_seed = 0);

}  // namespace reflectfuzz
