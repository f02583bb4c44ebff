// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "reflectfuzz/agents.hpp"
#include "reflectfuzz/feedback.hpp"
#include "reflectfuzz/vm.hpp"

namespace reflectfuzz {

// The fixed phase order of one reflection round. Round 0 runs only the
// first two phases; a round that stops on a finding skips reflection.
enum class CrpPhase { Drafting, Testing, GlobalReflection, LocalReflection };

const char* to_string(CrpPhase p);
const std::vector<CrpPhase>& phase_schedule();

// Local reflection runs the narrow checkers in this order; function repair
// strictly precedes the field checkers so they act on the repaired name.
const std::vector<AgentId>& local_agent_order();

struct CrpConfig {
    int max_reflection_rounds = 10;
    int max_sequence_len = 10;
    double per_contract_budget_secs = 600.0;
    std::uint64_t rng_seed = 0;
    VmOptions vm;
};

struct ApplyResult {
    TransactionSequence seq;

    struct BadIndex {
        AgentId agent = AgentId::TxSeqDrafter;
        int index = 0;

        bool operator==(const BadIndex&) const = default;
    };
    std::vector<BadIndex> dropped;
};

// Folds actions left to right: per action, field edits in order, then
// structural edits in order, then truncation to max_len keeping the tail.
// Edits with out-of-range indices are dropped and logged, never fatal.
// The origin marker follows the last agent whose action changed anything.
ApplyResult apply(const TransactionSequence& seq, const std::vector<AgentAction>& actions, int max_len);

// One round as recorded. Replaying `actions` over `state_before` with
// apply() reproduces `state_after` exactly.
struct ReflectionRecord {
    int round = 0;
    TransactionSequence state_before;
    TransactionSequence state_after;
    std::vector<AgentAction> actions;  // empty on round 0 and on a stop round
    Feedback feedback;                 // what the round saw
    bool stopped = false;              // testing fired an oracle this round
    bool no_repair = false;            // a full reflection pass changed nothing
    int dropped_edits = 0;
    std::vector<PermissionViolation> violations;
};

enum class CrpStatus { VulnerabilityFound, ExhaustedRounds, BudgetExceeded, NoRepair };

const char* to_string(CrpStatus s);

struct CrpOutcome {
    CrpStatus status = CrpStatus::ExhaustedRounds;
    std::optional<VulnClass> vuln_class;     // reporting-order first
    std::vector<VulnClass> found_classes;    // everything that fired on the witness run
    TransactionSequence witness;             // meaningful when status == VulnerabilityFound
    int found_round = -1;
    std::vector<ReflectionRecord> history;   // round 0 entry plus one per reflection round
    int rounds_used = 0;                     // reflection rounds actually taken
    double wall_time_secs = 0.0;
};

// The whole process for one contract: draft, then test-and-repair rounds
// until an oracle fires, rounds or budget run out, or a round repairs
// nothing. A revision produced by the final round still gets tested.
CrpOutcome run_crp(const ContractModel& model, const SeedPool& pool, PolicyBackend& backend,
                   const CrpConfig& config);

}  // namespace reflectfuzz
