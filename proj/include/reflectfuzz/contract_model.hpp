// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reflectfuzz/txmodel.hpp"

namespace reflectfuzz {

// ===== expressions =====

enum class ExprKind { Literal, Slot, Param, Ident, MsgSender, MsgValue, TxOrigin, Unary, Binary };
enum class UnaryOp { Not, Neg };
enum class BinaryOp { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div, Mod };

// Expression tree. Ident nodes only exist between parsing and binding;
// a loaded model contains Slot/Param nodes with `type` filled in.
struct Expr {
    ExprKind kind = ExprKind::Literal;
    Value literal{};
    std::string name;  // Slot / Param / Ident
    UnaryOp uop = UnaryOp::Not;
    BinaryOp bop = BinaryOp::Or;
    std::vector<Expr> children;  // Unary: 1, Binary: 2
    ValueType type = ValueType::Uint;

    bool operator==(const Expr&) const = default;
};

std::string render_expr(const Expr& e);

// True when any node in the tree satisfies `kind`.
bool expr_mentions(const Expr& e, ExprKind kind);
// Slot names read anywhere in the tree, in first-use order, deduplicated.
std::vector<std::string> expr_slot_reads(const Expr& e);
// Param names read anywhere in the tree, in first-use order, deduplicated.
std::vector<std::string> expr_param_reads(const Expr& e);

// ===== statements =====

enum class StatementKind { Require, Assign, Send, LowLevelCall, DelegateCall, SelfDestruct, If, ReadBlockField, Revert };
enum class BlockFieldKind { Timestamp, Number };

const char* to_string(BlockFieldKind f);

struct Statement {
    StatementKind kind = StatementKind::Revert;
    Expr expr;            // Require condition / Assign value / If condition
    Expr addr_expr;       // Send to / LowLevelCall to / DelegateCall target / SelfDestruct beneficiary
    Expr amount_expr;     // Send / LowLevelCall
    std::string slot;     // Assign target / LowLevelCall capture / ReadBlockField destination
    bool has_capture = false;
    BlockFieldKind field = BlockFieldKind::Timestamp;
    std::vector<Statement> then_body;
    std::vector<Statement> else_body;
    std::string guard_source;  // original text of a Require condition

    bool operator==(const Statement&) const = default;
};

// ===== model =====

struct StorageSlot {
    std::string name;
    ValueType type = ValueType::Uint;
    Value init{};

    bool operator==(const StorageSlot&) const = default;
};

struct ContractFunction {
    FunctionDescriptor descriptor;
    std::vector<Statement> body;

    bool operator==(const ContractFunction&) const = default;
};

struct CallbackCall {
    std::string function;
    std::vector<Value> args;

    bool operator==(const CallbackCall&) const = default;
};

struct ContractModel {
    std::string name;
    std::vector<StorageSlot> storage;
    std::uint64_t initial_balance = 0;
    std::optional<std::string> deployer_slot;
    std::vector<ContractFunction> functions;
    // Re-entrant behaviour of attacker accounts: calls executed when an
    // attacker address receives a value-bearing low-level call.
    std::vector<CallbackCall> attacker_callback;
    std::string source_text;

    const ContractFunction* find_function(std::string_view fname) const;
    const StorageSlot* find_slot(std::string_view sname) const;
    std::vector<FunctionDescriptor> interface() const;  // callable surface
};

struct ModelError : std::runtime_error {
    std::string position;
    std::string cause;

    ModelError(std::string pos, std::string c)
        : std::runtime_error(pos + ": " + c), position(std::move(pos)), cause(std::move(c)) {}
};

// Parses, binds and type-checks a contract document. Throws ModelError with
// the offending position on any structural, naming or typing problem.
ContractModel load_model(const std::string& document);

// Parses an infix expression without binding identifiers (Ident nodes remain).
// Exposed for tests; load_model uses it internally.
Expr parse_expression(const std::string& text);

ProgramContext make_context(const ContractModel& model, const SeedPool& pool);

// Base pool extended with a value dictionary harvested from the model:
// uint storage initials and uint literals appearing in function bodies.
SeedPool default_pool_for(const ContractModel& model);

}  // namespace reflectfuzz
