// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#include "reflectfuzz/agents.hpp"

namespace reflectfuzz {

const char* to_string(AgentId a) {
    switch (a) {
    case AgentId::TxSeqDrafter: return "TxSeqDrafter";
    case AgentId::TxSeqRefiner: return "TxSeqRefiner";
    case AgentId::FunChecker: return "FunChecker";
    case AgentId::ArgChecker: return "ArgChecker";
    case AgentId::SNDChecker: return "SNDChecker";
    case AgentId::AMTChecker: return "AMTChecker";
    }
    return "?";
}

const char* to_string(TxField f) {
    switch (f) {
    case TxField::Function: return "function";
    case TxField::Args: return "args";
    case TxField::Sender: return "sender";
    case TxField::Amount: return "amount";
    case TxField::Structure: return "structure";
    }
    return "?";
}

const char* to_string(StructuralEdit::Op op) {
    switch (op) {
    case StructuralEdit::Op::Insert: return "insert";
    case StructuralEdit::Op::Delete: return "delete";
    case StructuralEdit::Op::Reorder: return "reorder";
    }
    return "?";
}

const std::vector<AgentProfile>& agent_profiles() {
    static const std::vector<AgentProfile> profiles = {
        {AgentId::TxSeqDrafter,
         {TxField::Function, TxField::Args, TxField::Sender, TxField::Amount, TxField::Structure},
         "drafts a complete candidate attack sequence from the contract interface"},
        {AgentId::TxSeqRefiner,
         {TxField::Function, TxField::Args, TxField::Sender, TxField::Amount, TxField::Structure},
         "revises the whole sequence in light of the last run summary"},
        {AgentId::FunChecker, {TxField::Function}, "repairs function selection, one transaction at a time"},
        {AgentId::ArgChecker, {TxField::Args}, "repairs argument lists against the function signatures"},
        {AgentId::SNDChecker, {TxField::Sender}, "repairs transaction senders"},
        {AgentId::AMTChecker, {TxField::Amount}, "repairs transferred amounts"},
    };
    return profiles;
}

const AgentProfile& profile(AgentId id) {
    for (const auto& p : agent_profiles())
        if (p.id == id) return p;
    return agent_profiles().front();  // unreachable: every id is listed
}

EnforcementResult enforce_permissions(const AgentAction& action) {
    const AgentProfile& p = profile(action.agent);
    EnforcementResult result;
    result.action.agent = action.agent;
    result.action.rationale = action.rationale;
    for (const FieldEdit& e : action.field_edits) {
        if (p.allowed.count(e.field)) result.action.field_edits.push_back(e);
        else result.violations.push_back({action.agent, e.field, e.tx_index});
    }
    for (const StructuralEdit& e : action.structural_edits) {
        if (p.allowed.count(TxField::Structure)) result.action.structural_edits.push_back(e);
        else result.violations.push_back({action.agent, TxField::Structure, e.index});
    }
    return result;
}

}  // namespace reflectfuzz
