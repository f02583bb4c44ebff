// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#include "reflectfuzz/crp.hpp"

#include <algorithm>
#include <chrono>

#include "reflectfuzz/oracles.hpp"

namespace reflectfuzz {

const char* to_string(CrpPhase p) {
    switch (p) {
    case CrpPhase::Drafting: return "drafting";
    case CrpPhase::Testing: return "testing";
    case CrpPhase::GlobalReflection: return "global-reflection";
    case CrpPhase::LocalReflection: return "local-reflection";
    }
    return "?";
}

const std::vector<CrpPhase>& phase_schedule() {
    static const std::vector<CrpPhase> order = {CrpPhase::Drafting, CrpPhase::Testing,
                                                CrpPhase::GlobalReflection, CrpPhase::LocalReflection};
    return order;
}

const std::vector<AgentId>& local_agent_order() {
    static const std::vector<AgentId> order = {AgentId::FunChecker, AgentId::ArgChecker, AgentId::SNDChecker,
                                               AgentId::AMTChecker};
    return order;
}

const char* to_string(CrpStatus s) {
    switch (s) {
    case CrpStatus::VulnerabilityFound: return "vulnerability_found";
    case CrpStatus::ExhaustedRounds: return "exhausted_rounds";
    case CrpStatus::BudgetExceeded: return "budget_exceeded";
    case CrpStatus::NoRepair: return "no_repair";
    }
    return "?";
}

ApplyResult apply(const TransactionSequence& seq, const std::vector<AgentAction>& actions, int max_len) {
    ApplyResult res;
    res.seq = seq;
    for (const AgentAction& act : actions) {
        bool acted = false;
        for (const FieldEdit& e : act.field_edits) {
            if (e.tx_index < 0 || static_cast<std::size_t>(e.tx_index) >= res.seq.txs.size()) {
                res.dropped.push_back({act.agent, e.tx_index});
                continue;
            }
            Transaction& tx = res.seq.txs[e.tx_index];
            switch (e.field) {
            case TxField::Function: tx.function = e.function_name; break;
            case TxField::Args: tx.args = e.args; break;
            case TxField::Sender: tx.sender = e.sender; break;
            case TxField::Amount: tx.amount = e.amount; break;
            case TxField::Structure:
                res.dropped.push_back({act.agent, e.tx_index});
                continue;
            }
            acted = true;
        }
        for (const StructuralEdit& e : act.structural_edits) {
            auto n = res.seq.txs.size();
            switch (e.op) {
            case StructuralEdit::Op::Insert:
                if (e.index < 0 || static_cast<std::size_t>(e.index) > n) {
                    res.dropped.push_back({act.agent, e.index});
                    continue;
                }
                res.seq.txs.insert(res.seq.txs.begin() + e.index, e.tx);
                acted = true;
                break;
            case StructuralEdit::Op::Delete:
                if (e.index < 0 || static_cast<std::size_t>(e.index) >= n) {
                    res.dropped.push_back({act.agent, e.index});
                    continue;
                }
                res.seq.txs.erase(res.seq.txs.begin() + e.index);
                acted = true;
                break;
            case StructuralEdit::Op::Reorder: {
                if (e.index < 0 || static_cast<std::size_t>(e.index) >= n || e.to_index < 0 ||
                    static_cast<std::size_t>(e.to_index) >= n) {
                    res.dropped.push_back({act.agent, e.index});
                    continue;
                }
                Transaction moved = res.seq.txs[e.index];
                res.seq.txs.erase(res.seq.txs.begin() + e.index);
                std::size_t dest = std::min<std::size_t>(e.to_index, res.seq.txs.size());
                res.seq.txs.insert(res.seq.txs.begin() + dest, std::move(moved));
                acted = true;
                break;
            }
            }
        }
        if (max_len >= 0 && res.seq.txs.size() > static_cast<std::size_t>(max_len))
            res.seq.txs.erase(res.seq.txs.begin(),
                              res.seq.txs.begin() + (res.seq.txs.size() - static_cast<std::size_t>(max_len)));
        if (acted)
            res.seq.origin = act.agent == AgentId::TxSeqDrafter || act.agent == AgentId::TxSeqRefiner
                                 ? SequenceOrigin::GloballyReflected
                                 : SequenceOrigin::LocallyReflected;
    }
    return res;
}

namespace {

struct TestOutcome {
    Feedback feedback;
    std::vector<VulnClass> found;
};

}  // namespace

CrpOutcome run_crp(const ContractModel& model, const SeedPool& pool, PolicyBackend& backend,
                   const CrpConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    CrpOutcome out;
    ProgramContext ctx = make_context(model, pool);
    std::vector<ExecutionTrace> trace_history;

    auto test = [&](const TransactionSequence& s) {
        ExecutionTrace trace = execute_sequence(model, pool, s, config.vm);
        OracleReport report = run_all(model, trace, pool, trace_history);
        TestOutcome t;
        t.feedback = analyze(trace.raw_signals, report, s);
        t.found = report.found_classes();
        trace_history.push_back(std::move(trace));
        return t;
    };

    auto finish = [&](CrpStatus status) {
        out.status = status;
        out.rounds_used = static_cast<int>(out.history.size()) - 1;
        out.wall_time_secs = elapsed();
        return out;
    };

    auto found = [&](const TestOutcome& t, const TransactionSequence& witness, int round) {
        out.vuln_class = t.feedback.vulnerability;
        out.found_classes = t.found;
        out.witness = witness;
        out.found_round = round;
        return finish(CrpStatus::VulnerabilityFound);
    };

    // round 0: draft and test
    TransactionSequence cur = backend.draft(ctx, model);
    cur.origin = SequenceOrigin::Drafted;
    if (config.max_sequence_len >= 0 && cur.txs.size() > static_cast<std::size_t>(config.max_sequence_len))
        cur.txs.erase(cur.txs.begin(),
                      cur.txs.begin() + (cur.txs.size() - static_cast<std::size_t>(config.max_sequence_len)));

    TestOutcome t = test(cur);
    {
        ReflectionRecord rec;
        rec.round = 0;
        rec.state_before = cur;
        rec.state_after = cur;
        rec.feedback = t.feedback;
        rec.stopped = t.feedback.vulnerability.has_value();
        out.history.push_back(std::move(rec));
    }
    if (t.feedback.vulnerability) return found(t, cur, 0);

    bool cur_tested = true;
    for (int round = 1; round <= config.max_reflection_rounds; ++round) {
        if (elapsed() >= config.per_contract_budget_secs) return finish(CrpStatus::BudgetExceeded);

        if (!cur_tested) {
            t = test(cur);
            cur_tested = true;
            if (t.feedback.vulnerability) {
                ReflectionRecord rec;
                rec.round = round;
                rec.state_before = cur;
                rec.state_after = cur;
                rec.feedback = t.feedback;
                rec.stopped = true;
                out.history.push_back(std::move(rec));
                return found(t, cur, round);
            }
        }

        ReflectionRecord rec;
        rec.round = round;
        rec.state_before = cur;
        rec.feedback = t.feedback;
        TransactionSequence work = cur;

        auto run_agent = [&](AgentId id) {
            AgentAction raw = id == AgentId::TxSeqRefiner
                                  ? backend.reflect_global(ctx, model, work, t.feedback, round)
                                  : backend.check_element(id, ctx, model, work, t.feedback, round);
            EnforcementResult er = enforce_permissions(raw);
            ApplyResult ar = apply(work, {er.action}, config.max_sequence_len);
            work = std::move(ar.seq);
            rec.dropped_edits += static_cast<int>(ar.dropped.size());
            rec.violations.insert(rec.violations.end(), er.violations.begin(), er.violations.end());
            rec.actions.push_back(std::move(er.action));
        };
        run_agent(AgentId::TxSeqRefiner);
        for (AgentId id : local_agent_order()) run_agent(id);

        rec.state_after = work;
        rec.no_repair = work.same_txs(cur);
        bool no_repair = rec.no_repair;
        out.history.push_back(std::move(rec));
        if (no_repair) return finish(CrpStatus::NoRepair);

        cur = std::move(work);
        cur_tested = false;
    }

    // the final round's revision still deserves its test
    if (!cur_tested) {
        t = test(cur);
        if (t.feedback.vulnerability) return found(t, cur, config.max_reflection_rounds);
    }
    return finish(CrpStatus::ExhaustedRounds);
}

}  // namespace reflectfuzz
