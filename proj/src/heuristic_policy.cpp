// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic policy. Drafting chases guards backwards from the most
// dangerous function; repairs pattern-match the feedback against the model.
#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>

#include "reflectfuzz/agents.hpp"

namespace reflectfuzz {

namespace {

// ---- body walking ----

void for_each_statement(const std::vector<Statement>& body, const std::function<void(const Statement&)>& fn) {
    for (const Statement& st : body) {
        fn(st);
        for_each_statement(st.then_body, fn);
        for_each_statement(st.else_body, fn);
    }
}

void for_each_expr(const std::vector<Statement>& body, const std::function<void(const Expr&)>& fn) {
    std::function<void(const Expr&)> walk_expr = [&](const Expr& e) {
        fn(e);
        for (const Expr& c : e.children) walk_expr(c);
    };
    for_each_statement(body, [&](const Statement& st) {
        switch (st.kind) {
        case StatementKind::Require:
        case StatementKind::If:
            walk_expr(st.expr);
            break;
        case StatementKind::Assign:
            walk_expr(st.expr);
            break;
        case StatementKind::Send:
        case StatementKind::LowLevelCall:
            walk_expr(st.addr_expr);
            walk_expr(st.amount_expr);
            break;
        case StatementKind::DelegateCall:
        case StatementKind::SelfDestruct:
            walk_expr(st.addr_expr);
            break;
        default:
            break;
        }
    });
}

// ---- target ranking ----

int rank_of(const ContractFunction& fn, const ContractModel& model) {
    int rank = 0;
    for_each_statement(fn.body, [&](const Statement& st) {
        switch (st.kind) {
        case StatementKind::SelfDestruct: rank = std::max(rank, 4); break;
        case StatementKind::Send:
        case StatementKind::LowLevelCall: rank = std::max(rank, 3); break;
        case StatementKind::DelegateCall: rank = std::max(rank, 2); break;
        case StatementKind::Assign:
            if (model.deployer_slot && st.slot == *model.deployer_slot) rank = std::max(rank, 1);
            break;
        default: break;
        }
    });
    return rank;
}

std::vector<const ContractFunction*> ranked_targets(const ContractModel& model) {
    std::vector<std::pair<int, const ContractFunction*>> scored;
    for (const ContractFunction& fn : model.functions) {
        if (!fn.descriptor.callable()) continue;
        int r = rank_of(fn, model);
        if (r > 0) scored.push_back({r, &fn});
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<const ContractFunction*> out;
    for (const auto& entry : scored) out.push_back(entry.second);
    return out;
}

// ---- dataflow facts ----

// Slots a function reads before definitely writing them. Writes inside a
// branch are not definite; a branch-local write shadows reads only within
// that branch.
void collect_reads(const std::vector<Statement>& body, std::set<std::string>& written,
                   std::vector<std::string>& reads) {
    auto note = [&](const Expr& e) {
        for (const std::string& s : expr_slot_reads(e))
            if (!written.count(s) && std::find(reads.begin(), reads.end(), s) == reads.end())
                reads.push_back(s);
    };
    for (const Statement& st : body) {
        switch (st.kind) {
        case StatementKind::Require:
            note(st.expr);
            break;
        case StatementKind::Assign:
            note(st.expr);
            written.insert(st.slot);
            break;
        case StatementKind::Send:
            note(st.addr_expr);
            note(st.amount_expr);
            break;
        case StatementKind::LowLevelCall:
            note(st.addr_expr);
            note(st.amount_expr);
            if (st.has_capture) written.insert(st.slot);
            break;
        case StatementKind::DelegateCall:
        case StatementKind::SelfDestruct:
            note(st.addr_expr);
            break;
        case StatementKind::If: {
            note(st.expr);
            std::set<std::string> then_written = written;
            collect_reads(st.then_body, then_written, reads);
            std::set<std::string> else_written = written;
            collect_reads(st.else_body, else_written, reads);
            break;
        }
        case StatementKind::ReadBlockField:
            written.insert(st.slot);
            break;
        case StatementKind::Revert:
            break;
        }
    }
}

std::vector<std::string> read_before_write_slots(const ContractFunction& fn) {
    std::set<std::string> written;
    std::vector<std::string> reads;
    collect_reads(fn.body, written, reads);
    return reads;
}

bool writes_slot(const ContractFunction& fn, const std::string& slot) {
    bool found = false;
    for_each_statement(fn.body, [&](const Statement& st) {
        if (st.kind == StatementKind::Assign && st.slot == slot) found = true;
        if (st.kind == StatementKind::ReadBlockField && st.slot == slot) found = true;
    });
    return found;
}

const ContractFunction* first_writer(const ContractModel& model, const std::string& slot) {
    for (const ContractFunction& fn : model.functions)
        if (fn.descriptor.callable() && writes_slot(fn, slot)) return &fn;
    return nullptr;
}

bool pays_to_caller(const ContractFunction& fn) {
    bool found = false;
    for_each_statement(fn.body, [&](const Statement& st) {
        if ((st.kind == StatementKind::Send || st.kind == StatementKind::LowLevelCall) &&
            expr_mentions(st.addr_expr, ExprKind::MsgSender))
            found = true;
    });
    return found;
}

std::vector<std::string> funding_slots(const ContractFunction& fn) {
    std::vector<std::string> out;
    for_each_statement(fn.body, [&](const Statement& st) {
        if (st.kind == StatementKind::Assign && expr_mentions(st.expr, ExprKind::MsgValue) &&
            std::find(out.begin(), out.end(), st.slot) == out.end())
            out.push_back(st.slot);
    });
    return out;
}

bool is_funding(const ContractFunction& fn) {
    return fn.descriptor.payable && !funding_slots(fn).empty();
}

// Lower bound the rest of the contract demands of a value-fed slot, read
// off guards like `raised >= goal`. Resolvable operands are uint literals
// and uint slots with known initial values.
std::uint64_t demanded_bound(const ContractModel& model, const std::vector<std::string>& slots) {
    auto resolve = [&](const Expr& e) -> std::optional<std::uint64_t> {
        if (e.kind == ExprKind::Literal && e.literal.type() == ValueType::Uint) return e.literal.as_uint();
        if (e.kind == ExprKind::Slot) {
            const StorageSlot* s = model.find_slot(e.name);
            if (s && s->type == ValueType::Uint) return s->init.as_uint();
        }
        return std::nullopt;
    };
    auto is_fed = [&](const Expr& e) {
        return e.kind == ExprKind::Slot && std::find(slots.begin(), slots.end(), e.name) != slots.end();
    };
    std::uint64_t bound = 0;
    auto consider = [&](BinaryOp op, const Expr& lhs, const Expr& rhs) {
        // normalized shape: fed-slot OP other
        if (!is_fed(lhs)) return;
        auto x = resolve(rhs);
        if (!x) return;
        switch (op) {
        case BinaryOp::Ge:
        case BinaryOp::Eq: bound = std::max(bound, *x); break;
        case BinaryOp::Gt:
            if (*x < std::numeric_limits<std::uint64_t>::max()) bound = std::max(bound, *x + 1);
            break;
        default: break;
        }
    };
    auto flip = [](BinaryOp op) {
        switch (op) {
        case BinaryOp::Lt: return BinaryOp::Gt;
        case BinaryOp::Le: return BinaryOp::Ge;
        case BinaryOp::Gt: return BinaryOp::Lt;
        case BinaryOp::Ge: return BinaryOp::Le;
        default: return op;
        }
    };
    for (const ContractFunction& fn : model.functions) {
        if (!fn.descriptor.callable()) continue;
        for_each_expr(fn.body, [&](const Expr& e) {
            if (e.kind != ExprKind::Binary) return;
            switch (e.bop) {
            case BinaryOp::Eq:
            case BinaryOp::Lt:
            case BinaryOp::Le:
            case BinaryOp::Gt:
            case BinaryOp::Ge:
                consider(e.bop, e.children[0], e.children[1]);
                consider(flip(e.bop), e.children[1], e.children[0]);
                break;
            default: break;
            }
        });
    }
    return bound;
}

// ---- pool picks ----

Address first_attacker(const SeedPool& pool) {
    if (!pool.attackers.empty()) return pool.attackers.front();
    if (!pool.users.empty()) return pool.users.front();
    return pool.deployer;
}

Address first_user(const SeedPool& pool) {
    if (!pool.users.empty()) return pool.users.front();
    return first_attacker(pool);
}

std::uint64_t smallest_positive_amount(const SeedPool& pool) {
    for (std::uint64_t a : pool.amounts)
        if (a > 0) return a;
    return 0;
}

std::uint64_t funding_amount(const SeedPool& pool, std::uint64_t bound) {
    if (bound == 0) return smallest_positive_amount(pool);
    for (std::uint64_t a : pool.amounts)
        if (a >= bound) return a;
    return pool.amounts.empty() ? 0 : pool.amounts.back();
}

// ---- argument candidates ----

std::vector<Value> candidates_for_param(const ContractFunction& fn, const Param& param, const SeedPool& pool) {
    std::vector<Value> out;
    auto push = [&](Value v) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
    };
    // literals the body compares this parameter against, in body order
    for_each_expr(fn.body, [&](const Expr& e) {
        if (e.kind != ExprKind::Binary) return;
        switch (e.bop) {
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: break;
        default: return;
        }
        const Expr& l = e.children[0];
        const Expr& r = e.children[1];
        auto grab = [&](const Expr& p, const Expr& lit) {
            if (p.kind == ExprKind::Param && p.name == param.name && lit.kind == ExprKind::Literal &&
                lit.literal.type() == param.type)
                push(lit.literal);
        };
        grab(l, r);
        grab(r, l);
    });
    switch (param.type) {
    case ValueType::Uint:
        push(uint_value(0));
        push(uint_value(1));
        if (!pool.amounts.empty()) push(uint_value(pool.amounts.back()));
        break;
    case ValueType::Int:
        push(int_value(0));
        push(int_value(1));
        push(int_value(-1));
        break;
    case ValueType::Bool:
        push(bool_value(true));
        push(bool_value(false));
        break;
    case ValueType::Address:
        push(address_value(first_attacker(pool)));
        push(address_value(pool.deployer));
        push(address_value(first_user(pool)));
        break;
    case ValueType::Bytes:
        push(bytes_value({}));
        break;
    case ValueType::String:
        push(string_value(""));
        break;
    }
    return out;
}

// ---- misc ----

std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string nearest_interface_name(const std::string& name, const std::vector<FunctionDescriptor>& interface) {
    std::string best;
    std::size_t best_dist = std::numeric_limits<std::size_t>::max();
    for (const FunctionDescriptor& d : interface) {
        std::size_t dist = levenshtein(name, d.name);
        if (dist < best_dist || (dist == best_dist && d.name < best)) {
            best_dist = dist;
            best = d.name;
        }
    }
    return best;
}

const RawSignal* earliest_raw(const Feedback& fb, RawSignalKind kind) {
    const RawSignal* best = nullptr;
    for (const RawSignal& s : fb.raw_signals)
        if (s.kind == kind && (!best || s.tx_index < best->tx_index)) best = &s;
    return best;
}

const RawSignal* raw_for_tx(const Feedback& fb, int tx_index, RawSignalKind kind) {
    for (const RawSignal& s : fb.raw_signals)
        if (s.kind == kind && s.tx_index == tx_index) return &s;
    return nullptr;
}

bool has_kind(const Feedback& fb, int tx_index, FeedbackKind k) {
    auto it = fb.per_tx.find(tx_index);
    if (it == fb.per_tx.end()) return false;
    return std::find(it->second.begin(), it->second.end(), k) != it->second.end();
}

std::optional<Expr> try_parse_guard(const std::string& text) {
    if (text.empty()) return std::nullopt;
    try {
        return parse_expression(text);
    } catch (const ModelError&) {
        return std::nullopt;
    }
}

// Collect every comparison `ident OP literal` (either operand order) from a
// guard expression, normalized so the identifier is on the left.
struct GuardComparison {
    std::string ident;
    BinaryOp op = BinaryOp::Eq;
    Value literal;
};

BinaryOp mirror(BinaryOp op) {
    switch (op) {
    case BinaryOp::Lt: return BinaryOp::Gt;
    case BinaryOp::Le: return BinaryOp::Ge;
    case BinaryOp::Gt: return BinaryOp::Lt;
    case BinaryOp::Ge: return BinaryOp::Le;
    default: return op;
    }
}

void collect_guard_comparisons(const Expr& e, std::vector<GuardComparison>& out) {
    if (e.kind == ExprKind::Binary) {
        switch (e.bop) {
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge: {
            const Expr& l = e.children[0];
            const Expr& r = e.children[1];
            if (l.kind == ExprKind::Ident && r.kind == ExprKind::Literal)
                out.push_back({l.name, e.bop, r.literal});
            else if (r.kind == ExprKind::Ident && l.kind == ExprKind::Literal)
                out.push_back({r.name, mirror(e.bop), l.literal});
            break;
        }
        default: break;
        }
    }
    for (const Expr& c : e.children) collect_guard_comparisons(c, out);
}

// A value for `ident OP literal` to hold, when one can be named statically.
std::optional<Value> satisfying_value(BinaryOp op, const Value& lit, ValueType want) {
    Value v = lit;
    if (want == ValueType::Int && v.type() == ValueType::Uint &&
        v.as_uint() <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        v = int_value(static_cast<std::int64_t>(v.as_uint()));
    if (v.type() != want) return std::nullopt;
    switch (op) {
    case BinaryOp::Eq:
    case BinaryOp::Ge:
    case BinaryOp::Le:
        return v;
    case BinaryOp::Gt:
        if (want == ValueType::Uint) {
            if (v.as_uint() == std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
            return uint_value(v.as_uint() + 1);
        }
        if (want == ValueType::Int) return int_value(v.as_int() + 1);
        return std::nullopt;
    case BinaryOp::Lt:
        if (want == ValueType::Uint) {
            if (v.as_uint() == 0) return std::nullopt;
            return uint_value(v.as_uint() - 1);
        }
        if (want == ValueType::Int) return int_value(v.as_int() - 1);
        return std::nullopt;
    case BinaryOp::Ne:
        switch (want) {
        case ValueType::Uint: return uint_value(v.as_uint() + 1);
        case ValueType::Int: return int_value(v.as_int() + 1);
        case ValueType::Bool: return bool_value(!v.as_bool());
        default: return std::nullopt;
        }
    default:
        return std::nullopt;
    }
}

// Guard shape `msg.sender == X` / `tx.origin == X` where X names an address
// that is known before any transaction runs.
std::optional<Address> demanded_sender(const Expr& guard, const ContractModel& model, const SeedPool& pool) {
    std::optional<Address> found;
    std::function<void(const Expr&)> walk = [&](const Expr& e) {
        if (found) return;
        if (e.kind == ExprKind::Binary && e.bop == BinaryOp::Eq) {
            const Expr* who = nullptr;
            const Expr* what = nullptr;
            for (int side = 0; side < 2; ++side) {
                const Expr& a = e.children[side];
                const Expr& b = e.children[1 - side];
                if (a.kind == ExprKind::MsgSender || a.kind == ExprKind::TxOrigin) {
                    who = &a;
                    what = &b;
                    break;
                }
            }
            if (who && what) {
                if (what->kind == ExprKind::Literal && what->literal.type() == ValueType::Address) {
                    found = what->literal.as_address();
                    return;
                }
                if (what->kind == ExprKind::Ident) {
                    const StorageSlot* s = model.find_slot(what->name);
                    if (s && s->type == ValueType::Address) {
                        if (model.deployer_slot && *model.deployer_slot == s->name) found = pool.deployer;
                        else if (!(s->init.as_address() == Address{})) found = s->init.as_address();
                        return;
                    }
                }
            }
        }
        for (const Expr& c : e.children) walk(c);
    };
    walk(guard);
    return found;
}

// ---- the policy ----

class HeuristicPolicy : public PolicyBackend {
public:
    explicit HeuristicPolicy(std::uint64_t seed) : seed_(seed) {}

    const char* name() const override { return "heuristic"; }

    TransactionSequence draft(const ProgramContext& ctx, const ContractModel& model) override {
        const SeedPool& pool = ctx.seed_pool;
        std::vector<const ContractFunction*> ranked = ranked_targets(model);
        std::vector<const ContractFunction*> order;
        if (!ranked.empty()) {
            std::set<std::string> visited;
            place(ranked.front(), model, visited, order);
        } else {
            for (const ContractFunction& fn : model.functions)
                if (fn.descriptor.callable()) order.push_back(&fn);
        }
        const ContractFunction* top = ranked.empty() ? nullptr : ranked.front();
        TransactionSequence seq;
        seq.origin = SequenceOrigin::Drafted;
        for (const ContractFunction* fn : order) seq.txs.push_back(draft_tx(*fn, model, pool, top));
        return seq;
    }

    AgentAction reflect_global(const ProgramContext& ctx, const ContractModel& model,
                               const TransactionSequence& seq, const Feedback& fb, int round) override {
        AgentAction act;
        act.agent = AgentId::TxSeqRefiner;
        if (fb.vulnerability || seq.txs.empty()) return act;

        if (const RawSignal* sig = earliest_raw(fb, RawSignalKind::RequireFailed)) {
            int k = sig->tx_index;
            if (k < 0 || static_cast<std::size_t>(k) >= seq.txs.size()) return act;
            auto guard = try_parse_guard(sig->detail);
            if (!guard) return act;
            for (const std::string& slot : guard_slot_names(*guard, model)) {
                const ContractFunction* writer = first_writer(model, slot);
                if (!writer) continue;
                for (std::size_t j = k + 1; j < seq.txs.size(); ++j) {
                    if (seq.txs[j].function == writer->descriptor.name) {
                        StructuralEdit e;
                        e.op = StructuralEdit::Op::Reorder;
                        e.index = static_cast<int>(j);
                        e.to_index = k;
                        act.structural_edits.push_back(e);
                        act.rationale = "move the '" + slot + "' writer ahead of the failing guard";
                        return act;
                    }
                }
                const ContractFunction* top = nullptr;
                auto ranked = ranked_targets(model);
                if (!ranked.empty()) top = ranked.front();
                StructuralEdit e;
                e.op = StructuralEdit::Op::Insert;
                e.index = k;
                e.tx = draft_tx(*writer, model, ctx.seed_pool, top);
                act.structural_edits.push_back(e);
                act.rationale = "insert the '" + slot + "' writer ahead of the failing guard";
                return act;
            }
            return act;
        }

        if (fb.clean()) {
            // nothing failed, nothing fired: point the tail at another target
            std::vector<std::string> targets;
            for (const ContractFunction* fn : ranked_targets(model)) targets.push_back(fn->descriptor.name);
            if (targets.empty())
                for (const ContractFunction& fn : model.functions)
                    if (fn.descriptor.callable()) targets.push_back(fn.descriptor.name);
            if (targets.empty()) return act;
            int last = static_cast<int>(seq.txs.size()) - 1;
            std::size_t idx = static_cast<std::size_t>(round) % targets.size();
            if (targets[idx] == seq.txs[last].function && targets.size() > 1) idx = (idx + 1) % targets.size();
            const ContractFunction* fn = model.find_function(targets[idx]);
            if (!fn) return act;
            auto ranked = ranked_targets(model);
            Transaction fresh = draft_tx(*fn, model, ctx.seed_pool, ranked.empty() ? nullptr : ranked.front());
            act.field_edits.push_back({last, TxField::Function, fresh.function, {}, {}, 0});
            act.field_edits.push_back({last, TxField::Args, "", fresh.args, {}, 0});
            act.field_edits.push_back({last, TxField::Sender, "", {}, fresh.sender, 0});
            act.field_edits.push_back({last, TxField::Amount, "", {}, {}, fresh.amount});
            act.rationale = "retarget the final transaction at '" + fresh.function + "'";
        }
        return act;
    }

    AgentAction check_element(AgentId agent, const ProgramContext& ctx, const ContractModel& model,
                              const TransactionSequence& seq, const Feedback& fb, int round) override {
        switch (agent) {
        case AgentId::FunChecker: return check_function(ctx, seq, fb);
        case AgentId::ArgChecker: return check_args(ctx, model, seq, fb, round);
        case AgentId::SNDChecker: return check_sender(ctx, model, seq, fb);
        case AgentId::AMTChecker: return check_amount(ctx, seq, fb);
        default: {
            AgentAction act;
            act.agent = agent;
            return act;
        }
        }
    }

private:
    void place(const ContractFunction* fn, const ContractModel& model, std::set<std::string>& visited,
               std::vector<const ContractFunction*>& order) {
        if (!visited.insert(fn->descriptor.name).second) return;
        for (const std::string& slot : read_before_write_slots(*fn)) {
            const ContractFunction* w = first_writer(model, slot);
            if (w && w->descriptor.name != fn->descriptor.name) place(w, model, visited, order);
        }
        order.push_back(fn);
    }

    Transaction draft_tx(const ContractFunction& fn, const ContractModel& model, const SeedPool& pool,
                         const ContractFunction* top) {
        Transaction tx;
        tx.function = fn.descriptor.name;
        for (const Param& p : fn.descriptor.params)
            tx.args.push_back(candidates_for_param(fn, p, pool).front());
        if (is_funding(fn)) {
            tx.amount = funding_amount(pool, demanded_bound(model, funding_slots(fn)));
            tx.sender = top && pays_to_caller(*top) ? first_attacker(pool) : first_user(pool);
        } else if (fn.descriptor.payable) {
            tx.amount = smallest_positive_amount(pool);
            tx.sender = first_attacker(pool);
        } else {
            tx.amount = 0;
            tx.sender = first_attacker(pool);
        }
        return tx;
    }

    std::vector<std::string> guard_slot_names(const Expr& guard, const ContractModel& model) {
        std::vector<std::string> out;
        std::function<void(const Expr&)> walk = [&](const Expr& e) {
            if (e.kind == ExprKind::Ident && model.find_slot(e.name) &&
                std::find(out.begin(), out.end(), e.name) == out.end())
                out.push_back(e.name);
            for (const Expr& c : e.children) walk(c);
        };
        walk(guard);
        return out;
    }

    AgentAction check_function(const ProgramContext& ctx, const TransactionSequence& seq, const Feedback& fb) {
        AgentAction act;
        act.agent = AgentId::FunChecker;
        for (const auto& entry : fb.per_tx) {
            const int k = entry.first;
            if (k < 0 || static_cast<std::size_t>(k) >= seq.txs.size()) continue;
            if (!has_kind(fb, k, FeedbackKind::FunctionNotFound)) continue;
            std::string best = nearest_interface_name(seq.txs[k].function, ctx.interface);
            if (best.empty() || best == seq.txs[k].function) continue;
            act.field_edits.push_back({k, TxField::Function, best, {}, {}, 0});
            act.rationale = "nearest declared function name";
        }
        return act;
    }

    AgentAction check_args(const ProgramContext& ctx, const ContractModel& model, const TransactionSequence& seq,
                           const Feedback& fb, int round) {
        AgentAction act;
        act.agent = AgentId::ArgChecker;
        for (const auto& entry : fb.per_tx) {
            const int k = entry.first;
            if (k < 0 || static_cast<std::size_t>(k) >= seq.txs.size()) continue;
            const ContractFunction* fn = model.find_function(seq.txs[k].function);
            if (!fn || !fn->descriptor.callable()) continue;
            if (has_kind(fb, k, FeedbackKind::ArgumentMismatch)) {
                std::vector<Value> args;
                for (const Param& p : fn->descriptor.params) {
                    auto cands = candidates_for_param(*fn, p, ctx.seed_pool);
                    args.push_back(cands[static_cast<std::size_t>(round) % cands.size()]);
                }
                if (args == seq.txs[k].args) continue;
                act.field_edits.push_back({k, TxField::Args, "", std::move(args), {}, 0});
                act.rationale = "regenerated arguments from declared signature";
                continue;
            }
            if (has_kind(fb, k, FeedbackKind::RequireFailed)) {
                const RawSignal* sig = raw_for_tx(fb, k, RawSignalKind::RequireFailed);
                if (!sig) continue;
                auto guard = try_parse_guard(sig->detail);
                if (!guard) continue;
                std::vector<GuardComparison> cmps;
                collect_guard_comparisons(*guard, cmps);
                if (seq.txs[k].args.size() != fn->descriptor.params.size()) continue;
                std::vector<Value> args = seq.txs[k].args;
                bool changed = false;
                for (const GuardComparison& c : cmps) {
                    for (std::size_t p = 0; p < fn->descriptor.params.size(); ++p) {
                        if (fn->descriptor.params[p].name != c.ident) continue;
                        auto v = satisfying_value(c.op, c.literal, fn->descriptor.params[p].type);
                        if (v && !(args[p] == *v)) {
                            args[p] = *v;
                            changed = true;
                        }
                    }
                }
                if (changed) {
                    act.field_edits.push_back({k, TxField::Args, "", std::move(args), {}, 0});
                    act.rationale = "pick arguments the failing guard accepts";
                }
            }
        }
        return act;
    }

    AgentAction check_sender(const ProgramContext& ctx, const ContractModel& model, const TransactionSequence& seq,
                             const Feedback& fb) {
        AgentAction act;
        act.agent = AgentId::SNDChecker;
        const SeedPool& pool = ctx.seed_pool;
        for (const auto& entry : fb.per_tx) {
            const int k = entry.first;
            if (k < 0 || static_cast<std::size_t>(k) >= seq.txs.size()) continue;
            if (has_kind(fb, k, FeedbackKind::RequireFailed)) {
                const RawSignal* sig = raw_for_tx(fb, k, RawSignalKind::RequireFailed);
                if (sig) {
                    auto guard = try_parse_guard(sig->detail);
                    if (guard) {
                        auto who = demanded_sender(*guard, model, pool);
                        if (who && !(*who == seq.txs[k].sender)) {
                            act.field_edits.push_back({k, TxField::Sender, "", {}, *who, 0});
                            act.rationale = "guard names the required sender";
                            continue;
                        }
                    }
                }
            }
            if (has_kind(fb, k, FeedbackKind::SenderError)) {
                auto all = pool.all_senders();
                if (all.empty()) continue;
                std::size_t idx = 0;
                for (std::size_t i = 0; i < all.size(); ++i)
                    if (all[i] == seq.txs[k].sender) {
                        idx = (i + 1) % all.size();
                        break;
                    }
                if (!(all[idx] == seq.txs[k].sender)) {
                    act.field_edits.push_back({k, TxField::Sender, "", {}, all[idx], 0});
                    act.rationale = "rotate to the next pooled sender";
                }
            }
        }
        return act;
    }

    AgentAction check_amount(const ProgramContext& ctx, const TransactionSequence& seq, const Feedback& fb) {
        AgentAction act;
        act.agent = AgentId::AMTChecker;
        const SeedPool& pool = ctx.seed_pool;
        for (const auto& entry : fb.per_tx) {
            const int k = entry.first;
            if (k < 0 || static_cast<std::size_t>(k) >= seq.txs.size()) continue;
            if (has_kind(fb, k, FeedbackKind::NonPayableFunction)) {
                if (seq.txs[k].amount != 0) {
                    act.field_edits.push_back({k, TxField::Amount, "", {}, {}, 0});
                    act.rationale = "nonpayable functions take no value";
                }
                continue;
            }
            if (!has_kind(fb, k, FeedbackKind::IncorrectTransactionValue)) continue;
            const RawSignal* sig = raw_for_tx(fb, k, RawSignalKind::ValueConstraintViolation);
            if (sig && sig->detail == "amount not in seed pool") {
                // clamp to the nearest dictionary amount
                std::uint64_t cur = seq.txs[k].amount;
                std::uint64_t best = 0;
                std::uint64_t best_gap = std::numeric_limits<std::uint64_t>::max();
                for (std::uint64_t a : pool.amounts) {
                    std::uint64_t gap = a > cur ? a - cur : cur - a;
                    if (gap < best_gap || (gap == best_gap && a > best)) {
                        best_gap = gap;
                        best = a;
                    }
                }
                if (best != cur) {
                    act.field_edits.push_back({k, TxField::Amount, "", {}, {}, best});
                    act.rationale = "snap the amount to the value dictionary";
                }
                continue;
            }
            // a value-dependent guard rejected the run: raise funding at the
            // nearest payable transaction at or before the failure
            int j = -1;
            for (int i = k; i >= 0; --i) {
                const FunctionDescriptor* d = ctx.find(seq.txs[i].function);
                if (d && d->payable) {
                    j = i;
                    break;
                }
            }
            if (j < 0) continue;
            std::uint64_t cur = seq.txs[j].amount;
            std::uint64_t next = 0;
            bool have = false;
            for (std::uint64_t a : pool.amounts)
                if (a > cur) {
                    next = a;
                    have = true;
                    break;
                }
            if (have) {
                act.field_edits.push_back({j, TxField::Amount, "", {}, {}, next});
                act.rationale = "raise the funding amount one dictionary step";
            }
        }
        return act;
    }

    std::uint64_t seed_;
};

}  // namespace

std::unique_ptr<PolicyBackend> make_heuristic_backend(std::uint64_t rng_seed) {
    return std::make_unique<HeuristicPolicy>(rng_seed);
}

}  // namespace reflectfuzz
