// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#include "reflectfuzz/vm.hpp"

#include <cstdint>
#include <sstream>
#include <utility>

namespace reflectfuzz {

const char* to_string(RawSignalKind k) {
    switch (k) {
    case RawSignalKind::UnknownFunction: return "unknown_function";
    case RawSignalKind::ArityOrTypeMismatch: return "arity_or_type_mismatch";
    case RawSignalKind::InsufficientBalance: return "insufficient_balance";
    case RawSignalKind::BadNonce: return "bad_nonce";
    case RawSignalKind::ValueToNonpayable: return "value_to_nonpayable";
    case RawSignalKind::ValueConstraintViolation: return "value_constraint_violation";
    case RawSignalKind::RequireFailed: return "require_failed";
    case RawSignalKind::Reverted: return "reverted";
    }
    return "?";
}

const char* to_string(TraceEventKind k) {
    switch (k) {
    case TraceEventKind::TxBegin: return "TxBegin";
    case TraceEventKind::Reverted: return "Reverted";
    case TraceEventKind::EtherIn: return "EtherIn";
    case TraceEventKind::EtherOut: return "EtherOut";
    case TraceEventKind::StorageWrite: return "StorageWrite";
    case TraceEventKind::SelfDestructed: return "SelfDestructed";
    case TraceEventKind::LowLevelCallFailed: return "LowLevelCallFailed";
    case TraceEventKind::ReenteredCall: return "ReenteredCall";
    case TraceEventKind::BlockFieldRead: return "BlockFieldRead";
    case TraceEventKind::TxOriginRead: return "TxOriginRead";
    case TraceEventKind::DelegateCalled: return "DelegateCalled";
    }
    return "?";
}

std::string describe(const TraceEvent& e) {
    std::ostringstream os;
    os << "[" << e.tx_index << "/" << e.depth << "] " << to_string(e.kind);
    switch (e.kind) {
    case TraceEventKind::TxBegin: os << " " << e.name << " from " << to_hex(e.addr) << " value " << e.amount; break;
    case TraceEventKind::Reverted: os << " " << e.name; break;
    case TraceEventKind::EtherIn: os << " " << e.amount << " from " << to_hex(e.addr); break;
    case TraceEventKind::EtherOut: os << " " << e.amount << " to " << to_hex(e.addr) << " via " << e.via; break;
    case TraceEventKind::StorageWrite:
        os << " " << e.name << " " << value_to_text(e.old_value) << " -> " << value_to_text(e.new_value);
        break;
    case TraceEventKind::SelfDestructed: os << " beneficiary " << to_hex(e.addr); break;
    case TraceEventKind::LowLevelCallFailed:
        os << " " << e.amount << " to " << to_hex(e.addr) << (e.flag ? " (captured)" : " (uncaptured)");
        break;
    case TraceEventKind::ReenteredCall: os << " into " << to_hex(e.addr); break;
    case TraceEventKind::BlockFieldRead: os << " " << to_string(e.field) << (e.flag ? " in branch" : ""); break;
    case TraceEventKind::TxOriginRead: os << (e.flag ? " in guard" : ""); break;
    case TraceEventKind::DelegateCalled:
        os << " " << to_hex(e.addr) << (e.flag ? " (input-controlled)" : " (fixed)");
        break;
    }
    return os.str();
}

ChainState deploy(const ContractModel& model, const SeedPool& pool, const VmOptions& options) {
    ChainState s;
    for (const auto& slot : model.storage) s.storage[slot.name] = slot.init;
    if (model.deployer_slot) s.storage[*model.deployer_slot] = address_value(pool.deployer);
    s.contract_balance = model.initial_balance;
    s.external_balances[pool.deployer] = options.genesis.account_funding;
    for (const auto& a : pool.users) s.external_balances[a] = options.genesis.account_funding;
    for (const auto& a : pool.attackers) s.external_balances[a] = options.genesis.account_funding;
    s.block_number = options.genesis.genesis_block;
    s.block_timestamp = options.genesis.genesis_timestamp;
    return s;
}

namespace {

// Aborts the whole top-level transaction (or, inside an attacker callback,
// just that nested frame).
struct RevertException {
    RawSignal signal;
};

// selfdestruct stops the frame that executed it without failing it.
struct FrameHalt {};

struct Frame {
    const ContractModel& model;
    const SeedPool& pool;
    ChainState& state;
    std::vector<TraceEvent>& events;
    const VmOptions& options;
    int tx_index;
    int depth;
    Address sender;
    Address origin;
    std::uint64_t msg_value;
    const std::vector<Param>* params;
    const std::vector<Value>* args;
};

bool reads_input_taint(const Expr& e, const ChainState& s) {
    if (e.kind == ExprKind::Param) return true;
    if (e.kind == ExprKind::Slot && s.input_tainted_slots.count(e.name)) return true;
    for (const auto& c : e.children)
        if (reads_input_taint(c, s)) return true;
    return false;
}

bool reads_value_taint(const Expr& e, const ChainState& s) {
    if (e.kind == ExprKind::MsgValue) return true;
    if (e.kind == ExprKind::Slot && s.value_tainted_slots.count(e.name)) return true;
    for (const auto& c : e.children)
        if (reads_value_taint(c, s)) return true;
    return false;
}

std::optional<BlockFieldKind> reads_block_taint(const Expr& e, const ChainState& s) {
    if (e.kind == ExprKind::Slot) {
        auto it = s.block_tainted_slots.find(e.name);
        if (it != s.block_tainted_slots.end()) return it->second;
    }
    for (const auto& c : e.children)
        if (auto f = reads_block_taint(c, s)) return f;
    return std::nullopt;
}

std::int64_t wrap_int(BinaryOp op, std::int64_t a, std::int64_t b) {
    // two's complement wrap for + - *, truncating division with the usual
    // INT64_MIN / -1 corner pinned, divide-by-zero yields 0
    auto ua = static_cast<std::uint64_t>(a);
    auto ub = static_cast<std::uint64_t>(b);
    switch (op) {
    case BinaryOp::Add: return static_cast<std::int64_t>(ua + ub);
    case BinaryOp::Sub: return static_cast<std::int64_t>(ua - ub);
    case BinaryOp::Mul: return static_cast<std::int64_t>(ua * ub);
    case BinaryOp::Div:
        if (b == 0) return 0;
        if (a == INT64_MIN && b == -1) return INT64_MIN;
        return a / b;
    case BinaryOp::Mod:
        if (b == 0) return 0;
        if (a == INT64_MIN && b == -1) return 0;
        return a % b;
    default: return 0;
    }
}

std::uint64_t wrap_uint(BinaryOp op, std::uint64_t a, std::uint64_t b) {
    switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::Div: return b == 0 ? 0 : a / b;
    case BinaryOp::Mod: return b == 0 ? 0 : a % b;
    default: return 0;
    }
}

// in_condition: evaluation happens inside a require/if condition, which is
// where block-data reads and tx.origin reads become oracle-relevant.
Value eval(Frame& f, const Expr& e, bool in_condition) {
    switch (e.kind) {
    case ExprKind::Literal:
        return e.literal;
    case ExprKind::Slot: {
        if (in_condition) {
            auto it = f.state.block_tainted_slots.find(e.name);
            if (it != f.state.block_tainted_slots.end()) {
                TraceEvent ev;
                ev.kind = TraceEventKind::BlockFieldRead;
                ev.tx_index = f.tx_index;
                ev.depth = f.depth;
                ev.name = e.name;
                ev.flag = true;
                ev.field = it->second;
                f.events.push_back(std::move(ev));
            }
        }
        return f.state.storage.at(e.name);
    }
    case ExprKind::Param: {
        for (size_t i = 0; i < f.params->size(); ++i)
            if ((*f.params)[i].name == e.name) return (*f.args)[i];
        return default_value(e.type);  // unreachable after binding
    }
    case ExprKind::Ident:
        return default_value(e.type);  // unreachable after binding
    case ExprKind::MsgSender:
        return address_value(f.sender);
    case ExprKind::MsgValue:
        return uint_value(f.msg_value);
    case ExprKind::TxOrigin: {
        TraceEvent ev;
        ev.kind = TraceEventKind::TxOriginRead;
        ev.tx_index = f.tx_index;
        ev.depth = f.depth;
        ev.flag = in_condition;
        f.events.push_back(std::move(ev));
        return address_value(f.origin);
    }
    case ExprKind::Unary: {
        Value v = eval(f, e.children[0], in_condition);
        if (e.uop == UnaryOp::Not) return bool_value(!v.as_bool());
        return int_value(wrap_int(BinaryOp::Sub, 0, v.as_int()));
    }
    case ExprKind::Binary: {
        if (e.bop == BinaryOp::And) {
            Value l = eval(f, e.children[0], in_condition);
            if (!l.as_bool()) return bool_value(false);
            return bool_value(eval(f, e.children[1], in_condition).as_bool());
        }
        if (e.bop == BinaryOp::Or) {
            Value l = eval(f, e.children[0], in_condition);
            if (l.as_bool()) return bool_value(true);
            return bool_value(eval(f, e.children[1], in_condition).as_bool());
        }
        Value l = eval(f, e.children[0], in_condition);
        Value r = eval(f, e.children[1], in_condition);
        switch (e.bop) {
        case BinaryOp::Eq: return bool_value(l == r);
        case BinaryOp::Ne: return bool_value(!(l == r));
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: {
            bool res;
            if (l.type() == ValueType::Uint) {
                std::uint64_t a = l.as_uint(), b = r.as_uint();
                res = e.bop == BinaryOp::Lt ? a < b : e.bop == BinaryOp::Le ? a <= b : e.bop == BinaryOp::Gt ? a > b : a >= b;
            } else {
                std::int64_t a = l.as_int(), b = r.as_int();
                res = e.bop == BinaryOp::Lt ? a < b : e.bop == BinaryOp::Le ? a <= b : e.bop == BinaryOp::Gt ? a > b : a >= b;
            }
            return bool_value(res);
        }
        default:
            if (l.type() == ValueType::Uint) return uint_value(wrap_uint(e.bop, l.as_uint(), r.as_uint()));
            return int_value(wrap_int(e.bop, l.as_int(), r.as_int()));
        }
    }
    }
    return Value{};
}

void write_slot(Frame& f, const std::string& slot, Value v) {
    Value old = f.state.storage.at(slot);
    TraceEvent ev;
    ev.kind = TraceEventKind::StorageWrite;
    ev.tx_index = f.tx_index;
    ev.depth = f.depth;
    ev.name = slot;
    ev.old_value = std::move(old);
    ev.new_value = v;
    f.events.push_back(std::move(ev));
    f.state.storage[slot] = std::move(v);
}

void exec_body(Frame& f, const std::vector<Statement>& body);

void transfer_out(Frame& f, const Address& to, std::uint64_t amount, const char* via) {
    f.state.contract_balance -= amount;
    f.state.external_balances[to] += amount;
    TraceEvent ev;
    ev.kind = TraceEventKind::EtherOut;
    ev.tx_index = f.tx_index;
    ev.depth = f.depth;
    ev.addr = to;
    ev.amount = amount;
    ev.via = via;
    f.events.push_back(std::move(ev));
}

// A value-bearing low-level call into an attacker account triggers the
// model's registered callback, one nesting level deeper. The callback batch
// is atomic: if any call in it reverts, its writes are undone, its events
// dropped, and the outer frame carries on.
void maybe_reenter(Frame& f, const Address& target) {
    if (!f.pool.is_attacker(target)) return;
    if (f.model.attacker_callback.empty()) return;
    if (f.depth >= f.options.reenter_bound) return;
    int nested_depth = f.depth + 1;

    TraceEvent begin;
    begin.kind = TraceEventKind::ReenteredCall;
    begin.tx_index = f.tx_index;
    begin.depth = nested_depth;
    begin.addr = target;
    f.events.push_back(std::move(begin));

    ChainState snapshot = f.state;
    std::vector<TraceEvent> nested;
    try {
        for (const CallbackCall& cb : f.model.attacker_callback) {
            if (f.state.contract_dead) break;
            const ContractFunction* fn = f.model.find_function(cb.function);
            Frame nf{f.model, f.pool,  f.state,  nested, f.options, f.tx_index, nested_depth,
                     target,  f.origin, 0,        &fn->descriptor.params, &cb.args};
            try {
                exec_body(nf, fn->body);
            } catch (const FrameHalt&) {
            }
        }
        f.events.insert(f.events.end(), nested.begin(), nested.end());
    } catch (const RevertException&) {
        f.state = std::move(snapshot);
        TraceEvent ev;
        ev.kind = TraceEventKind::Reverted;
        ev.tx_index = f.tx_index;
        ev.depth = nested_depth;
        ev.name = "reentrant call reverted";
        f.events.push_back(std::move(ev));
    }
}

void exec_statement(Frame& f, const Statement& st) {
    switch (st.kind) {
    case StatementKind::Require: {
        Value c = eval(f, st.expr, true);
        if (!c.as_bool()) {
            RawSignal sig;
            sig.kind = reads_value_taint(st.expr, f.state) ? RawSignalKind::ValueConstraintViolation
                                                           : RawSignalKind::RequireFailed;
            sig.tx_index = f.tx_index;
            sig.detail = st.guard_source;
            throw RevertException{std::move(sig)};
        }
        return;
    }
    case StatementKind::Assign: {
        bool in_taint = reads_input_taint(st.expr, f.state);
        bool val_taint = reads_value_taint(st.expr, f.state);
        auto blk_taint = reads_block_taint(st.expr, f.state);
        Value v = eval(f, st.expr, false);
        write_slot(f, st.slot, std::move(v));
        if (in_taint) f.state.input_tainted_slots.insert(st.slot);
        else f.state.input_tainted_slots.erase(st.slot);
        if (val_taint) f.state.value_tainted_slots.insert(st.slot);
        else f.state.value_tainted_slots.erase(st.slot);
        if (blk_taint) f.state.block_tainted_slots[st.slot] = *blk_taint;
        else f.state.block_tainted_slots.erase(st.slot);
        return;
    }
    case StatementKind::Send: {
        Address to = eval(f, st.addr_expr, false).as_address();
        std::uint64_t amount = eval(f, st.amount_expr, false).as_uint();
        if (f.state.contract_balance < amount) {
            RawSignal sig;
            sig.kind = RawSignalKind::Reverted;
            sig.tx_index = f.tx_index;
            sig.detail = "send failed: contract balance below amount";
            throw RevertException{std::move(sig)};
        }
        transfer_out(f, to, amount, "send");
        return;
    }
    case StatementKind::LowLevelCall: {
        Address to = eval(f, st.addr_expr, false).as_address();
        std::uint64_t amount = eval(f, st.amount_expr, false).as_uint();
        if (f.state.contract_balance < amount) {
            TraceEvent ev;
            ev.kind = TraceEventKind::LowLevelCallFailed;
            ev.tx_index = f.tx_index;
            ev.depth = f.depth;
            ev.addr = to;
            ev.amount = amount;
            ev.flag = st.has_capture;
            f.events.push_back(std::move(ev));
            if (st.has_capture) write_slot(f, st.slot, bool_value(false));
            return;
        }
        transfer_out(f, to, amount, "call");
        if (st.has_capture) write_slot(f, st.slot, bool_value(true));
        if (amount > 0) maybe_reenter(f, to);
        return;
    }
    case StatementKind::DelegateCall: {
        bool tainted = reads_input_taint(st.addr_expr, f.state);
        Address to = eval(f, st.addr_expr, false).as_address();
        TraceEvent ev;
        ev.kind = TraceEventKind::DelegateCalled;
        ev.tx_index = f.tx_index;
        ev.depth = f.depth;
        ev.addr = to;
        ev.flag = tainted;
        f.events.push_back(std::move(ev));
        return;
    }
    case StatementKind::SelfDestruct: {
        Address to = eval(f, st.addr_expr, false).as_address();
        std::uint64_t amount = f.state.contract_balance;
        if (amount > 0) transfer_out(f, to, amount, "selfdestruct");
        TraceEvent ev;
        ev.kind = TraceEventKind::SelfDestructed;
        ev.tx_index = f.tx_index;
        ev.depth = f.depth;
        ev.addr = to;
        f.events.push_back(std::move(ev));
        f.state.contract_dead = true;
        throw FrameHalt{};
    }
    case StatementKind::If: {
        Value c = eval(f, st.expr, true);
        exec_body(f, c.as_bool() ? st.then_body : st.else_body);
        return;
    }
    case StatementKind::ReadBlockField: {
        std::uint64_t v = st.field == BlockFieldKind::Timestamp ? f.state.block_timestamp : f.state.block_number;
        write_slot(f, st.slot, uint_value(v));
        TraceEvent ev;
        ev.kind = TraceEventKind::BlockFieldRead;
        ev.tx_index = f.tx_index;
        ev.depth = f.depth;
        ev.name = st.slot;
        ev.flag = false;
        ev.field = st.field;
        f.events.push_back(std::move(ev));
        f.state.input_tainted_slots.erase(st.slot);
        f.state.value_tainted_slots.erase(st.slot);
        f.state.block_tainted_slots[st.slot] = st.field;
        return;
    }
    case StatementKind::Revert: {
        RawSignal sig;
        sig.kind = RawSignalKind::Reverted;
        sig.tx_index = f.tx_index;
        sig.detail = "explicit revert";
        throw RevertException{std::move(sig)};
    }
    }
}

void exec_body(Frame& f, const std::vector<Statement>& body) {
    for (const auto& st : body) exec_statement(f, st);
}

}  // namespace

TxResult execute_transaction(ChainState& state, const Transaction& tx, const ContractModel& model,
                             const SeedPool& pool, int tx_index, const VmOptions& options) {
    TxResult result;
    ChainState snapshot = state;
    state.block_number += 1;
    state.block_timestamp += options.genesis.block_interval_secs;

    TraceEvent begin;
    begin.kind = TraceEventKind::TxBegin;
    begin.tx_index = tx_index;
    begin.name = tx.function;
    begin.addr = tx.sender;
    begin.amount = tx.amount;
    result.events.push_back(begin);

    auto reject = [&](std::vector<RawSignal> signals) {
        state = std::move(snapshot);
        TraceEvent ev;
        ev.kind = TraceEventKind::Reverted;
        ev.tx_index = tx_index;
        ev.name = signals.front().detail;
        result.events.push_back(std::move(ev));
        result.signals = std::move(signals);
        return result;
    };

    auto sig = [&](RawSignalKind k, std::string detail) {
        RawSignal s;
        s.kind = k;
        s.tx_index = tx_index;
        s.detail = std::move(detail);
        return s;
    };

    if (state.contract_dead)
        return reject({sig(RawSignalKind::UnknownFunction, "contract was destroyed")});

    const ContractFunction* fn = model.find_function(tx.function);
    if (!fn || !fn->descriptor.callable())
        return reject({sig(RawSignalKind::UnknownFunction, "no callable function '" + tx.function + "'")});

    std::vector<RawSignal> pre;
    const auto& params = fn->descriptor.params;
    if (tx.args.size() != params.size()) {
        pre.push_back(sig(RawSignalKind::ArityOrTypeMismatch,
                          tx.function + " takes " + std::to_string(params.size()) + " argument(s), got " +
                              std::to_string(tx.args.size())));
    } else {
        for (size_t i = 0; i < params.size(); ++i) {
            if (tx.args[i].type() != params[i].type)
                pre.push_back(sig(RawSignalKind::ArityOrTypeMismatch,
                                  "argument '" + params[i].name + "' expects " + to_string(params[i].type) +
                                      ", got " + to_string(tx.args[i].type())));
        }
    }
    auto bal = state.external_balances.find(tx.sender);
    if (bal == state.external_balances.end())
        pre.push_back(sig(RawSignalKind::InsufficientBalance, "sender not funded"));
    else if (bal->second < tx.amount)
        pre.push_back(sig(RawSignalKind::InsufficientBalance, "sender balance below transaction value"));
    if (tx.amount > 0 && !fn->descriptor.payable)
        pre.push_back(sig(RawSignalKind::ValueToNonpayable, "value sent to nonpayable '" + tx.function + "'"));
    if (!pool.contains_amount(tx.amount))
        pre.push_back(sig(RawSignalKind::ValueConstraintViolation, "amount not in seed pool"));
    if (!pre.empty()) return reject(std::move(pre));

    state.nonces[tx.sender] += 1;
    std::vector<TraceEvent> frame_events;
    if (tx.amount > 0) {
        state.external_balances[tx.sender] -= tx.amount;
        state.contract_balance += tx.amount;
        TraceEvent ev;
        ev.kind = TraceEventKind::EtherIn;
        ev.tx_index = tx_index;
        ev.addr = tx.sender;
        ev.amount = tx.amount;
        frame_events.push_back(std::move(ev));
    }

    Frame frame{model, pool, state, frame_events, options, tx_index, 0, tx.sender, tx.sender, tx.amount,
                &params, &tx.args};
    try {
        try {
            exec_body(frame, fn->body);
        } catch (const FrameHalt&) {
        }
        result.events.insert(result.events.end(), frame_events.begin(), frame_events.end());
    } catch (const RevertException& r) {
        return reject({r.signal});
    }
    return result;
}

ExecutionTrace execute_sequence(const ContractModel& model, const SeedPool& pool,
                                const TransactionSequence& seq, const VmOptions& options) {
    ExecutionTrace trace;
    ChainState state = deploy(model, pool, options);
    for (size_t i = 0; i < seq.txs.size(); ++i) {
        TxResult r = execute_transaction(state, seq.txs[i], model, pool, static_cast<int>(i), options);
        trace.events.insert(trace.events.end(), r.events.begin(), r.events.end());
        trace.raw_signals.insert(trace.raw_signals.end(), r.signals.begin(), r.signals.end());
    }
    trace.final_state = std::move(state);
    return trace;
}

}  // namespace reflectfuzz
