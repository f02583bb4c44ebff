// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#include "reflectfuzz/oracles.hpp"

#include <algorithm>

namespace reflectfuzz {

const char* to_string(VulnClass c) {
    switch (c) {
    case VulnClass::EtherLeak: return "EL";
    case VulnClass::SuicidalContract: return "SC";
    case VulnClass::BlockstateDependency: return "BD";
    case VulnClass::UncheckedEther: return "UE";
    case VulnClass::UnrestrictedDelegate: return "UD";
    case VulnClass::EtherFreeze: return "EF";
    case VulnClass::Reentrancy: return "RE";
    case VulnClass::TxOriginUse: return "TO";
    }
    return "?";
}

const char* describe(VulnClass c) {
    switch (c) {
    case VulnClass::EtherLeak: return "ether leak";
    case VulnClass::SuicidalContract: return "suicidal contract";
    case VulnClass::BlockstateDependency: return "blockstate dependency";
    case VulnClass::UncheckedEther: return "unchecked ether";
    case VulnClass::UnrestrictedDelegate: return "unrestricted delegatecall";
    case VulnClass::EtherFreeze: return "ether freeze";
    case VulnClass::Reentrancy: return "reentrancy";
    case VulnClass::TxOriginUse: return "tx.origin use";
    }
    return "?";
}

std::optional<VulnClass> vuln_class_from_string(std::string_view s) {
    for (VulnClass c : all_classes())
        if (s == to_string(c)) return c;
    return std::nullopt;
}

const char* to_string(Severity s) { return s == Severity::High ? "High" : "Medium"; }

Severity severity(VulnClass c) {
    switch (c) {
    case VulnClass::EtherLeak:
    case VulnClass::SuicidalContract:
    case VulnClass::Reentrancy:
    case VulnClass::UnrestrictedDelegate:
        return Severity::High;
    default:
        return Severity::Medium;
    }
}

const std::vector<VulnClass>& all_classes() {
    static const std::vector<VulnClass> order = {
        VulnClass::EtherLeak,       VulnClass::SuicidalContract, VulnClass::BlockstateDependency,
        VulnClass::UncheckedEther,  VulnClass::UnrestrictedDelegate, VulnClass::EtherFreeze,
        VulnClass::Reentrancy,      VulnClass::TxOriginUse,
    };
    return order;
}

const std::vector<VulnClass>& verdict_order() {
    static const std::vector<VulnClass> order = {
        VulnClass::EtherLeak,      VulnClass::SuicidalContract, VulnClass::Reentrancy,
        VulnClass::UnrestrictedDelegate, VulnClass::UncheckedEther, VulnClass::BlockstateDependency,
        VulnClass::TxOriginUse,    VulnClass::EtherFreeze,
    };
    return order;
}

bool OracleReport::any_found() const {
    for (const auto& entry : verdicts)
        if (entry.second.found) return true;
    return false;
}

std::vector<VulnClass> OracleReport::found_classes() const {
    std::vector<VulnClass> out;
    for (VulnClass c : verdict_order()) {
        auto it = verdicts.find(c);
        if (it != verdicts.end() && it->second.found) out.push_back(c);
    }
    return out;
}

namespace {

using Events = std::vector<TraceEvent>;

// Index of the TxBegin that owns each event position.
std::vector<std::size_t> owning_tx_begin(const Events& ev) {
    std::vector<std::size_t> owner(ev.size(), 0);
    std::size_t current = 0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].kind == TraceEventKind::TxBegin) current = i;
        owner[i] = current;
    }
    return owner;
}

Verdict detect_ether_leak(const Events& ev, const SeedPool& pool) {
    std::map<Address, std::uint64_t> paid_in;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const TraceEvent& e = ev[i];
        if (e.kind == TraceEventKind::EtherOut && e.amount > 0 && pool.is_attacker(e.addr)) {
            auto it = paid_in.find(e.addr);
            std::uint64_t in = it == paid_in.end() ? 0 : it->second;
            if (in < e.amount) return {true, {i}};
        }
        if (e.kind == TraceEventKind::EtherIn) paid_in[e.addr] += e.amount;
    }
    return {};
}

Verdict detect_suicidal(const Events& ev, const SeedPool& pool) {
    auto owner = owning_tx_begin(ev);
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].kind != TraceEventKind::SelfDestructed) continue;
        const TraceEvent& begin = ev[owner[i]];
        if (begin.addr != pool.deployer) return {true, {owner[i], i}};
    }
    return {};
}

Verdict detect_blockstate(const Events& ev) {
    auto owner = owning_tx_begin(ev);
    std::optional<std::size_t> branch_read;
    std::size_t read_owner = 0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const TraceEvent& e = ev[i];
        if (e.kind == TraceEventKind::TxBegin) branch_read.reset();
        if (e.kind == TraceEventKind::BlockFieldRead && e.flag && !branch_read) {
            branch_read = i;
            read_owner = owner[i];
        }
        if (e.kind == TraceEventKind::EtherOut && branch_read && owner[i] == read_owner)
            return {true, {*branch_read, i}};
    }
    return {};
}

Verdict detect_unchecked_ether(const Events& ev) {
    for (std::size_t i = 0; i < ev.size(); ++i)
        if (ev[i].kind == TraceEventKind::LowLevelCallFailed && !ev[i].flag) return {true, {i}};
    return {};
}

Verdict detect_unrestricted_delegate(const Events& ev, const SeedPool& pool) {
    auto owner = owning_tx_begin(ev);
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (ev[i].kind != TraceEventKind::DelegateCalled || !ev[i].flag) continue;
        const TraceEvent& begin = ev[owner[i]];
        if (begin.addr != pool.deployer) return {true, {owner[i], i}};
    }
    return {};
}

Verdict detect_reentrancy(const Events& ev) {
    std::map<Address, std::uint64_t> in_total;
    std::map<Address, std::uint64_t> out_total;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const TraceEvent& e = ev[i];
        if (e.kind == TraceEventKind::EtherIn) in_total[e.addr] += e.amount;
        if (e.kind == TraceEventKind::EtherOut) {
            out_total[e.addr] += e.amount;
            if (e.depth >= 1 && out_total[e.addr] > in_total[e.addr]) return {true, {i}};
        }
    }
    return {};
}

Verdict detect_txorigin(const Events& ev) {
    auto owner = owning_tx_begin(ev);
    std::optional<std::size_t> guard_read;
    std::size_t read_owner = 0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const TraceEvent& e = ev[i];
        if (e.kind == TraceEventKind::TxBegin) guard_read.reset();
        if (e.kind == TraceEventKind::TxOriginRead && e.flag && !guard_read) {
            guard_read = i;
            read_owner = owner[i];
        }
        bool effect = e.kind == TraceEventKind::StorageWrite || e.kind == TraceEventKind::EtherOut;
        if (effect && guard_read && owner[i] == read_owner) return {true, {*guard_read, i}};
    }
    return {};
}

bool body_can_release(const std::vector<Statement>& body) {
    for (const Statement& st : body) {
        switch (st.kind) {
        case StatementKind::Send:
        case StatementKind::SelfDestruct:
        case StatementKind::DelegateCall:
            return true;
        case StatementKind::LowLevelCall: {
            const Expr& amt = st.amount_expr;
            bool zero_literal = amt.kind == ExprKind::Literal && amt.literal.type() == ValueType::Uint &&
                                amt.literal.as_uint() == 0;
            if (!zero_literal) return true;
            break;
        }
        case StatementKind::If:
            if (body_can_release(st.then_body) || body_can_release(st.else_body)) return true;
            break;
        default:
            break;
        }
    }
    return false;
}

Verdict detect_ether_freeze(const ContractModel& model, const ExecutionTrace& trace,
                            const std::vector<ExecutionTrace>& history) {
    bool accepts = false;
    bool releases = false;
    for (const ContractFunction& f : model.functions) {
        if (!f.descriptor.callable()) continue;
        if (f.descriptor.payable) accepts = true;
        if (body_can_release(f.body)) releases = true;
    }
    if (!accepts || releases) return {};

    for (std::size_t i = 0; i < trace.events.size(); ++i)
        if (trace.events[i].kind == TraceEventKind::EtherIn && trace.events[i].amount > 0)
            return {true, {i}};
    for (const ExecutionTrace& old : history)
        for (const TraceEvent& e : old.events)
            if (e.kind == TraceEventKind::EtherIn && e.amount > 0) return {true, {}};
    return {};
}

}  // namespace

OracleReport run_all(const ContractModel& model, const ExecutionTrace& trace, const SeedPool& pool,
                     const std::vector<ExecutionTrace>& history) {
    OracleReport report;
    const Events& ev = trace.events;
    report.verdicts[VulnClass::EtherLeak] = detect_ether_leak(ev, pool);
    report.verdicts[VulnClass::SuicidalContract] = detect_suicidal(ev, pool);
    report.verdicts[VulnClass::BlockstateDependency] = detect_blockstate(ev);
    report.verdicts[VulnClass::UncheckedEther] = detect_unchecked_ether(ev);
    report.verdicts[VulnClass::UnrestrictedDelegate] = detect_unrestricted_delegate(ev, pool);
    report.verdicts[VulnClass::EtherFreeze] = detect_ether_freeze(model, trace, history);
    report.verdicts[VulnClass::Reentrancy] = detect_reentrancy(ev);
    report.verdicts[VulnClass::TxOriginUse] = detect_txorigin(ev);
    return report;
}

}  // namespace reflectfuzz
