// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#include "reflectfuzz/contract_model.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

#include "json.hpp"

namespace reflectfuzz {

using nlohmann::json;

const char* to_string(BlockFieldKind f) {
    return f == BlockFieldKind::Timestamp ? "timestamp" : "number";
}

// ===== expression utilities =====

static const char* binop_text(BinaryOp op) {
    switch (op) {
    case BinaryOp::Or: return "||";
    case BinaryOp::And: return "&&";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    }
    return "?";
}

std::string render_expr(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Literal:
        if (e.literal.type() == ValueType::String) return "\"" + e.literal.as_string() + "\"";
        return value_to_text(e.literal);
    case ExprKind::Slot:
    case ExprKind::Param:
    case ExprKind::Ident:
        return e.name;
    case ExprKind::MsgSender: return "msg.sender";
    case ExprKind::MsgValue: return "msg.value";
    case ExprKind::TxOrigin: return "tx.origin";
    case ExprKind::Unary:
        return (e.uop == UnaryOp::Not ? "!" : "-") + ("(" + render_expr(e.children[0]) + ")");
    case ExprKind::Binary:
        return "(" + render_expr(e.children[0]) + " " + binop_text(e.bop) + " " +
               render_expr(e.children[1]) + ")";
    }
    return "?";
}

bool expr_mentions(const Expr& e, ExprKind kind) {
    if (e.kind == kind) return true;
    for (const auto& c : e.children)
        if (expr_mentions(c, kind)) return true;
    return false;
}

template <typename Pred>
static void collect_names(const Expr& e, Pred pred, std::vector<std::string>& out) {
    if (pred(e) && std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
    for (const auto& c : e.children) collect_names(c, pred, out);
}

std::vector<std::string> expr_slot_reads(const Expr& e) {
    std::vector<std::string> out;
    collect_names(e, [](const Expr& n) { return n.kind == ExprKind::Slot; }, out);
    return out;
}

std::vector<std::string> expr_param_reads(const Expr& e) {
    std::vector<std::string> out;
    collect_names(e, [](const Expr& n) { return n.kind == ExprKind::Param; }, out);
    return out;
}

// ===== expression parser =====

namespace {

struct Token {
    enum class Kind { Number, String, Ident, Op, End } kind = Kind::End;
    std::string text;
    std::uint64_t number = 0;
    bool is_hex = false;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_ = Token{};
        if (pos_ >= src_.size()) return;
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            bool hex = pos_ + 1 < src_.size() && c == '0' && (src_[pos_ + 1] == 'x' || src_[pos_ + 1] == 'X');
            if (hex) {
                pos_ += 2;
                while (pos_ < src_.size() && hex_ok(src_[pos_])) ++pos_;
            } else {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
            tok_.kind = Token::Kind::Number;
            tok_.text = src_.substr(start, pos_ - start);
            tok_.is_hex = hex;
            if (!hex) {
                auto v = value_from_text(ValueType::Uint, tok_.text);
                if (!v) throw ModelError("expr", "numeric literal out of range: " + tok_.text);
                tok_.number = v->as_uint();
            }
            return;
        }
        if (c == '"') {
            size_t start = ++pos_;
            while (pos_ < src_.size() && src_[pos_] != '"') ++pos_;
            if (pos_ >= src_.size()) throw ModelError("expr", "unterminated string literal");
            tok_.kind = Token::Kind::String;
            tok_.text = src_.substr(start, pos_ - start);
            ++pos_;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '.'))
                ++pos_;
            tok_.kind = Token::Kind::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            return;
        }
        static const char* two_char[] = {"||", "&&", "==", "!=", "<=", ">="};
        for (const char* op : two_char) {
            if (src_.compare(pos_, 2, op) == 0) {
                tok_.kind = Token::Kind::Op;
                tok_.text = op;
                pos_ += 2;
                return;
            }
        }
        if (std::string("()<>+-*/%!").find(c) != std::string::npos) {
            tok_.kind = Token::Kind::Op;
            tok_.text = std::string(1, c);
            ++pos_;
            return;
        }
        throw ModelError("expr", std::string("unexpected character '") + c + "'");
    }

    static bool hex_ok(char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
    }

    const std::string& src_;
    size_t pos_ = 0;
    Token tok_;
};

Expr make_binary(BinaryOp op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.bop = op;
    e.children.push_back(std::move(lhs));
    e.children.push_back(std::move(rhs));
    return e;
}

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    Expr parse() {
        Expr e = parse_or();
        if (lex_.peek().kind != Token::Kind::End)
            throw ModelError("expr", "trailing input after expression: '" + lex_.peek().text + "'");
        return e;
    }

private:
    Expr parse_or() {
        Expr e = parse_and();
        while (is_op("||")) {
            lex_.take();
            e = make_binary(BinaryOp::Or, std::move(e), parse_and());
        }
        return e;
    }

    Expr parse_and() {
        Expr e = parse_equality();
        while (is_op("&&")) {
            lex_.take();
            e = make_binary(BinaryOp::And, std::move(e), parse_equality());
        }
        return e;
    }

    Expr parse_equality() {
        Expr e = parse_relational();
        while (is_op("==") || is_op("!=")) {
            BinaryOp op = lex_.take().text == "==" ? BinaryOp::Eq : BinaryOp::Ne;
            e = make_binary(op, std::move(e), parse_relational());
        }
        return e;
    }

    Expr parse_relational() {
        Expr e = parse_additive();
        while (is_op("<") || is_op("<=") || is_op(">") || is_op(">=")) {
            std::string t = lex_.take().text;
            BinaryOp op = t == "<" ? BinaryOp::Lt : t == "<=" ? BinaryOp::Le : t == ">" ? BinaryOp::Gt : BinaryOp::Ge;
            e = make_binary(op, std::move(e), parse_additive());
        }
        return e;
    }

    Expr parse_additive() {
        Expr e = parse_multiplicative();
        while (is_op("+") || is_op("-")) {
            BinaryOp op = lex_.take().text == "+" ? BinaryOp::Add : BinaryOp::Sub;
            e = make_binary(op, std::move(e), parse_multiplicative());
        }
        return e;
    }

    Expr parse_multiplicative() {
        Expr e = parse_unary();
        while (is_op("*") || is_op("/") || is_op("%")) {
            std::string t = lex_.take().text;
            BinaryOp op = t == "*" ? BinaryOp::Mul : t == "/" ? BinaryOp::Div : BinaryOp::Mod;
            e = make_binary(op, std::move(e), parse_unary());
        }
        return e;
    }

    Expr parse_unary() {
        if (is_op("!")) {
            lex_.take();
            Expr e;
            e.kind = ExprKind::Unary;
            e.uop = UnaryOp::Not;
            e.children.push_back(parse_unary());
            return e;
        }
        if (is_op("-")) {
            lex_.take();
            Expr child = parse_unary();
            if (child.kind == ExprKind::Literal && child.literal.type() == ValueType::Uint) {
                std::uint64_t mag = child.literal.as_uint();
                if (mag > static_cast<std::uint64_t>(INT64_MAX))
                    throw ModelError("expr", "negative literal out of range");
                child.literal = int_value(-static_cast<std::int64_t>(mag));
                return child;
            }
            Expr e;
            e.kind = ExprKind::Unary;
            e.uop = UnaryOp::Neg;
            e.children.push_back(std::move(child));
            return e;
        }
        return parse_primary();
    }

    Expr parse_primary() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Op && t.text == "(") {
            lex_.take();
            Expr e = parse_or();
            if (!is_op(")")) throw ModelError("expr", "expected ')'");
            lex_.take();
            return e;
        }
        if (t.kind == Token::Kind::Number) {
            Token num = lex_.take();
            Expr e;
            e.kind = ExprKind::Literal;
            if (num.is_hex) {
                if (num.text.size() == 42) {
                    auto a = address_from_hex(num.text);
                    if (!a) throw ModelError("expr", "malformed address literal " + num.text);
                    e.literal = address_value(*a);
                } else {
                    auto v = value_from_text(ValueType::Bytes, num.text);
                    if (!v) throw ModelError("expr", "malformed bytes literal " + num.text);
                    e.literal = *v;
                }
            } else {
                e.literal = uint_value(num.number);
            }
            return e;
        }
        if (t.kind == Token::Kind::String) {
            Expr e;
            e.kind = ExprKind::Literal;
            e.literal = string_value(lex_.take().text);
            return e;
        }
        if (t.kind == Token::Kind::Ident) {
            Token id = lex_.take();
            Expr e;
            if (id.text == "msg.sender") e.kind = ExprKind::MsgSender;
            else if (id.text == "msg.value") e.kind = ExprKind::MsgValue;
            else if (id.text == "tx.origin") e.kind = ExprKind::TxOrigin;
            else if (id.text == "true" || id.text == "false") {
                e.kind = ExprKind::Literal;
                e.literal = bool_value(id.text == "true");
            } else if (id.text.find('.') != std::string::npos) {
                throw ModelError("expr", "unknown builtin '" + id.text + "'");
            } else {
                e.kind = ExprKind::Ident;
                e.name = id.text;
            }
            return e;
        }
        throw ModelError("expr", "expected an expression");
    }

    bool is_op(const char* s) const {
        return lex_.peek().kind == Token::Kind::Op && lex_.peek().text == s;
    }

    Lexer lex_;
};

}  // namespace

Expr parse_expression(const std::string& text) {
    return Parser(text).parse();
}

// ===== binding and type checking =====

namespace {

struct Scope {
    const std::vector<StorageSlot>* storage;
    const std::vector<Param>* params;

    const StorageSlot* slot(const std::string& n) const {
        for (const auto& s : *storage)
            if (s.name == n) return &s;
        return nullptr;
    }
    const Param* param(const std::string& n) const {
        for (const auto& p : *params)
            if (p.name == n) return &p;
        return nullptr;
    }
};

bool numeric(ValueType t) { return t == ValueType::Uint || t == ValueType::Int; }

// Resolves Ident nodes, infers types bottom-up and adapts unsuffixed
// non-negative literals to int context where needed.
void bind_expr(Expr& e, const Scope& scope, const std::string& pos) {
    switch (e.kind) {
    case ExprKind::Literal:
        e.type = e.literal.type();
        return;
    case ExprKind::Ident: {
        if (const Param* p = scope.param(e.name)) {
            e.kind = ExprKind::Param;
            e.type = p->type;
            return;
        }
        if (const StorageSlot* s = scope.slot(e.name)) {
            e.kind = ExprKind::Slot;
            e.type = s->type;
            return;
        }
        throw ModelError(pos, "unresolved identifier '" + e.name + "'");
    }
    case ExprKind::Slot:
    case ExprKind::Param:
        return;  // already bound
    case ExprKind::MsgSender:
    case ExprKind::TxOrigin:
        e.type = ValueType::Address;
        return;
    case ExprKind::MsgValue:
        e.type = ValueType::Uint;
        return;
    case ExprKind::Unary: {
        bind_expr(e.children[0], scope, pos);
        if (e.uop == UnaryOp::Not) {
            if (e.children[0].type != ValueType::Bool)
                throw ModelError(pos, "'!' expects bool, got " + std::string(to_string(e.children[0].type)));
            e.type = ValueType::Bool;
        } else {
            if (e.children[0].type != ValueType::Int)
                throw ModelError(pos, "unary '-' expects int, got " + std::string(to_string(e.children[0].type)));
            e.type = ValueType::Int;
        }
        return;
    }
    case ExprKind::Binary: {
        bind_expr(e.children[0], scope, pos);
        bind_expr(e.children[1], scope, pos);
        ValueType lt = e.children[0].type;
        ValueType rt = e.children[1].type;

        auto coerce = [&](Expr& lit, ValueType want) {
            if (want == ValueType::Int && lit.kind == ExprKind::Literal && lit.type == ValueType::Uint) {
                std::uint64_t u = lit.literal.as_uint();
                if (u <= static_cast<std::uint64_t>(INT64_MAX)) {
                    lit.literal = int_value(static_cast<std::int64_t>(u));
                    lit.type = ValueType::Int;
                    return true;
                }
            }
            return false;
        };
        if (lt != rt) {
            if (coerce(e.children[0], rt)) lt = rt;
            else if (coerce(e.children[1], lt)) rt = lt;
        }

        switch (e.bop) {
        case BinaryOp::Or:
        case BinaryOp::And:
            if (lt != ValueType::Bool || rt != ValueType::Bool)
                throw ModelError(pos, "boolean operator expects bool operands");
            e.type = ValueType::Bool;
            return;
        case BinaryOp::Eq:
        case BinaryOp::Ne:
            if (lt != rt) throw ModelError(pos, "cannot compare " + std::string(to_string(lt)) + " with " + to_string(rt));
            e.type = ValueType::Bool;
            return;
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge:
            if (lt != rt || !numeric(lt))
                throw ModelError(pos, "ordering comparison expects matching numeric operands");
            e.type = ValueType::Bool;
            return;
        default:
            if (lt != rt || !numeric(lt))
                throw ModelError(pos, "arithmetic expects matching numeric operands");
            e.type = lt;
            return;
        }
    }
    }
}

void bind_body(std::vector<Statement>& body, const Scope& scope, const std::string& pos);

void bind_statement(Statement& st, const Scope& scope, const std::string& pos) {
    auto expect = [&](const Expr& e, ValueType t, const char* what) {
        if (e.type != t)
            throw ModelError(pos, std::string(what) + " must be " + to_string(t) + ", got " + to_string(e.type));
    };
    switch (st.kind) {
    case StatementKind::Require:
        bind_expr(st.expr, scope, pos);
        expect(st.expr, ValueType::Bool, "require condition");
        return;
    case StatementKind::Assign: {
        const StorageSlot* s = scope.slot(st.slot);
        if (!s) throw ModelError(pos, "assign to unknown slot '" + st.slot + "'");
        bind_expr(st.expr, scope, pos);
        if (st.expr.type != s->type) {
            // adapt a bare non-negative literal to an int slot
            if (s->type == ValueType::Int && st.expr.kind == ExprKind::Literal &&
                st.expr.type == ValueType::Uint &&
                st.expr.literal.as_uint() <= static_cast<std::uint64_t>(INT64_MAX)) {
                st.expr.literal = int_value(static_cast<std::int64_t>(st.expr.literal.as_uint()));
                st.expr.type = ValueType::Int;
            } else {
                throw ModelError(pos, "slot '" + st.slot + "' is " + to_string(s->type) + ", value is " +
                                          to_string(st.expr.type));
            }
        }
        return;
    }
    case StatementKind::Send:
    case StatementKind::LowLevelCall:
        bind_expr(st.addr_expr, scope, pos);
        expect(st.addr_expr, ValueType::Address, "recipient");
        bind_expr(st.amount_expr, scope, pos);
        expect(st.amount_expr, ValueType::Uint, "amount");
        if (st.kind == StatementKind::LowLevelCall && st.has_capture) {
            const StorageSlot* s = scope.slot(st.slot);
            if (!s) throw ModelError(pos, "capture into unknown slot '" + st.slot + "'");
            if (s->type != ValueType::Bool) throw ModelError(pos, "capture slot must be bool");
        }
        return;
    case StatementKind::DelegateCall:
    case StatementKind::SelfDestruct:
        bind_expr(st.addr_expr, scope, pos);
        expect(st.addr_expr, ValueType::Address, st.kind == StatementKind::DelegateCall ? "target" : "beneficiary");
        return;
    case StatementKind::If:
        bind_expr(st.expr, scope, pos);
        expect(st.expr, ValueType::Bool, "if condition");
        bind_body(st.then_body, scope, pos);
        bind_body(st.else_body, scope, pos);
        return;
    case StatementKind::ReadBlockField: {
        const StorageSlot* s = scope.slot(st.slot);
        if (!s) throw ModelError(pos, "read_block into unknown slot '" + st.slot + "'");
        if (s->type != ValueType::Uint) throw ModelError(pos, "read_block destination must be uint");
        return;
    }
    case StatementKind::Revert:
        return;
    }
}

void bind_body(std::vector<Statement>& body, const Scope& scope, const std::string& pos) {
    for (size_t i = 0; i < body.size(); ++i)
        bind_statement(body[i], scope, pos + "[" + std::to_string(i) + "]");
}

// ===== document loading =====

Expr parse_at(const json& j, const std::string& pos) {
    if (!j.is_string()) throw ModelError(pos, "expected an expression string");
    try {
        return parse_expression(j.get<std::string>());
    } catch (const ModelError& e) {
        throw ModelError(pos, e.cause + " in '" + j.get<std::string>() + "'");
    }
}

std::vector<Statement> parse_body(const json& j, const std::string& pos);

Statement parse_statement(const json& j, const std::string& pos) {
    if (!j.is_object() || j.size() != 1)
        throw ModelError(pos, "expected a single-key statement object");
    const std::string tag = j.begin().key();
    const json& v = j.begin().value();
    Statement st;
    if (tag == "require") {
        st.kind = StatementKind::Require;
        st.expr = parse_at(v, pos);
        st.guard_source = v.get<std::string>();
        return st;
    }
    if (tag == "assign") {
        st.kind = StatementKind::Assign;
        if (!v.is_object() || !v.contains("slot") || !v.contains("value"))
            throw ModelError(pos, "assign needs {slot, value}");
        st.slot = v["slot"].get<std::string>();
        st.expr = parse_at(v["value"], pos + ".value");
        return st;
    }
    if (tag == "send" || tag == "call") {
        st.kind = tag == "send" ? StatementKind::Send : StatementKind::LowLevelCall;
        if (!v.is_object() || !v.contains("to") || !v.contains("amount"))
            throw ModelError(pos, tag + " needs {to, amount}");
        st.addr_expr = parse_at(v["to"], pos + ".to");
        st.amount_expr = parse_at(v["amount"], pos + ".amount");
        if (tag == "call" && v.contains("capture")) {
            st.has_capture = true;
            st.slot = v["capture"].get<std::string>();
        }
        return st;
    }
    if (tag == "delegatecall") {
        st.kind = StatementKind::DelegateCall;
        if (!v.is_object() || !v.contains("target")) throw ModelError(pos, "delegatecall needs {target}");
        st.addr_expr = parse_at(v["target"], pos + ".target");
        return st;
    }
    if (tag == "selfdestruct") {
        st.kind = StatementKind::SelfDestruct;
        if (!v.is_object() || !v.contains("beneficiary"))
            throw ModelError(pos, "selfdestruct needs {beneficiary}");
        st.addr_expr = parse_at(v["beneficiary"], pos + ".beneficiary");
        return st;
    }
    if (tag == "if") {
        st.kind = StatementKind::If;
        if (!v.is_object() || !v.contains("cond") || !v.contains("then"))
            throw ModelError(pos, "if needs {cond, then[, else]}");
        st.expr = parse_at(v["cond"], pos + ".cond");
        st.then_body = parse_body(v["then"], pos + ".then");
        if (v.contains("else")) st.else_body = parse_body(v["else"], pos + ".else");
        return st;
    }
    if (tag == "read_block") {
        st.kind = StatementKind::ReadBlockField;
        if (!v.is_object() || !v.contains("field") || !v.contains("into"))
            throw ModelError(pos, "read_block needs {field, into}");
        const std::string f = v["field"].get<std::string>();
        if (f == "timestamp") st.field = BlockFieldKind::Timestamp;
        else if (f == "number") st.field = BlockFieldKind::Number;
        else throw ModelError(pos + ".field", "unknown block field '" + f + "'");
        st.slot = v["into"].get<std::string>();
        return st;
    }
    if (tag == "revert") {
        st.kind = StatementKind::Revert;
        return st;
    }
    throw ModelError(pos, "unknown statement tag '" + tag + "'");
}

std::vector<Statement> parse_body(const json& j, const std::string& pos) {
    if (!j.is_array()) throw ModelError(pos, "expected a statement array");
    std::vector<Statement> out;
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_statement(j[i], pos + "[" + std::to_string(i) + "]"));
    return out;
}

}  // namespace

const ContractFunction* ContractModel::find_function(std::string_view fname) const {
    for (const auto& f : functions)
        if (f.descriptor.name == fname) return &f;
    return nullptr;
}

const StorageSlot* ContractModel::find_slot(std::string_view sname) const {
    for (const auto& s : storage)
        if (s.name == sname) return &s;
    return nullptr;
}

std::vector<FunctionDescriptor> ContractModel::interface() const {
    std::vector<FunctionDescriptor> out;
    for (const auto& f : functions)
        if (f.descriptor.callable()) out.push_back(f.descriptor);
    return out;
}

ContractModel load_model(const std::string& document) {
    json doc = json::parse(document, nullptr, false);
    if (doc.is_discarded()) throw ModelError("$", "not a JSON document");
    if (!doc.is_object()) throw ModelError("$", "expected an object");

    ContractModel m;
    m.source_text = document;
    if (!doc.contains("name") || !doc["name"].is_string()) throw ModelError("name", "missing contract name");
    m.name = doc["name"].get<std::string>();

    if (doc.contains("balance")) {
        if (!doc["balance"].is_number_unsigned()) throw ModelError("balance", "expected a non-negative integer");
        m.initial_balance = doc["balance"].get<std::uint64_t>();
    }

    std::set<std::string> slot_names;
    if (doc.contains("storage")) {
        const json& js = doc["storage"];
        if (!js.is_array()) throw ModelError("storage", "expected an array");
        for (size_t i = 0; i < js.size(); ++i) {
            const std::string pos = "storage[" + std::to_string(i) + "]";
            const json& s = js[i];
            if (!s.is_object() || !s.contains("name") || !s.contains("type"))
                throw ModelError(pos, "slot needs {name, type[, init]}");
            StorageSlot slot;
            slot.name = s["name"].get<std::string>();
            if (!slot_names.insert(slot.name).second)
                throw ModelError(pos, "duplicate slot '" + slot.name + "'");
            auto t = value_type_from_string(s["type"].get<std::string>());
            if (!t) throw ModelError(pos + ".type", "unknown value type '" + s["type"].get<std::string>() + "'");
            slot.type = *t;
            if (s.contains("init")) {
                std::string raw;
                if (s["init"].is_string()) raw = s["init"].get<std::string>();
                else if (s["init"].is_number_unsigned()) raw = std::to_string(s["init"].get<std::uint64_t>());
                else if (s["init"].is_number_integer()) raw = std::to_string(s["init"].get<std::int64_t>());
                else if (s["init"].is_boolean()) raw = s["init"].get<bool>() ? "true" : "false";
                else throw ModelError(pos + ".init", "expected a scalar");
                auto v = value_from_text(slot.type, raw);
                if (!v) throw ModelError(pos + ".init", "'" + raw + "' is not a valid " + to_string(slot.type));
                slot.init = *v;
            } else {
                slot.init = default_value(slot.type);
            }
            m.storage.push_back(std::move(slot));
        }
    }

    if (doc.contains("deployer_slot")) {
        if (!doc["deployer_slot"].is_string()) throw ModelError("deployer_slot", "expected a slot name");
        m.deployer_slot = doc["deployer_slot"].get<std::string>();
        const StorageSlot* s = m.find_slot(*m.deployer_slot);
        if (!s) throw ModelError("deployer_slot", "unknown slot '" + *m.deployer_slot + "'");
        if (s->type != ValueType::Address) throw ModelError("deployer_slot", "deployer slot must be an address");
    }

    if (!doc.contains("functions") || !doc["functions"].is_array())
        throw ModelError("functions", "missing function list");
    std::set<std::string> fn_names;
    for (size_t i = 0; i < doc["functions"].size(); ++i) {
        const std::string pos = "functions[" + std::to_string(i) + "]";
        const json& jf = doc["functions"][i];
        if (!jf.is_object() || !jf.contains("name") || !jf.contains("body"))
            throw ModelError(pos, "function needs {name, body}");
        ContractFunction fn;
        fn.descriptor.name = jf["name"].get<std::string>();
        if (!fn_names.insert(fn.descriptor.name).second)
            throw ModelError(pos, "duplicate function '" + fn.descriptor.name + "'");
        if (jf.contains("payable")) fn.descriptor.payable = jf["payable"].get<bool>();
        if (jf.contains("visibility")) {
            auto v = visibility_from_string(jf["visibility"].get<std::string>());
            if (!v) throw ModelError(pos + ".visibility", "unknown visibility");
            fn.descriptor.visibility = *v;
        }
        if (jf.contains("params")) {
            const json& jp = jf["params"];
            if (!jp.is_array()) throw ModelError(pos + ".params", "expected an array");
            std::set<std::string> param_names;
            for (size_t p = 0; p < jp.size(); ++p) {
                const std::string ppos = pos + ".params[" + std::to_string(p) + "]";
                if (!jp[p].is_object() || !jp[p].contains("name") || !jp[p].contains("type"))
                    throw ModelError(ppos, "param needs {name, type}");
                Param param;
                param.name = jp[p]["name"].get<std::string>();
                if (!param_names.insert(param.name).second)
                    throw ModelError(ppos, "duplicate param '" + param.name + "'");
                if (slot_names.count(param.name))
                    throw ModelError(ppos, "param '" + param.name + "' shadows a storage slot");
                auto t = value_type_from_string(jp[p]["type"].get<std::string>());
                if (!t) throw ModelError(ppos + ".type", "unknown value type");
                param.type = *t;
                fn.descriptor.params.push_back(std::move(param));
            }
        }
        fn.body = parse_body(jf["body"], pos + ".body");
        Scope scope{&m.storage, &fn.descriptor.params};
        bind_body(fn.body, scope, pos + ".body");
        m.functions.push_back(std::move(fn));
    }

    if (doc.contains("attacker_callback")) {
        const json& jc = doc["attacker_callback"];
        if (!jc.is_array()) throw ModelError("attacker_callback", "expected an array");
        for (size_t i = 0; i < jc.size(); ++i) {
            const std::string pos = "attacker_callback[" + std::to_string(i) + "]";
            if (!jc[i].is_object() || !jc[i].contains("function"))
                throw ModelError(pos, "callback needs {function[, args]}");
            CallbackCall cb;
            cb.function = jc[i]["function"].get<std::string>();
            const ContractFunction* fn = m.find_function(cb.function);
            if (!fn || !fn->descriptor.callable())
                throw ModelError(pos, "callback targets unknown or uncallable function '" + cb.function + "'");
            if (jc[i].contains("args")) {
                const json& ja = jc[i]["args"];
                if (!ja.is_array() || ja.size() != fn->descriptor.params.size())
                    throw ModelError(pos + ".args", "argument count mismatch");
                for (size_t a = 0; a < ja.size(); ++a) {
                    std::string raw = ja[a].is_string() ? ja[a].get<std::string>() : ja[a].dump();
                    auto v = value_from_text(fn->descriptor.params[a].type, raw);
                    if (!v) throw ModelError(pos + ".args", "bad callback argument");
                    cb.args.push_back(*v);
                }
            } else if (!fn->descriptor.params.empty()) {
                throw ModelError(pos, "callback function takes arguments");
            }
            m.attacker_callback.push_back(std::move(cb));
        }
    }

    return m;
}

ProgramContext make_context(const ContractModel& model, const SeedPool& pool) {
    ProgramContext ctx;
    ctx.source_text = model.source_text;
    ctx.interface = model.interface();
    ctx.seed_pool = pool;
    return ctx;
}

static void harvest_expr(const Expr& e, std::set<std::uint64_t>& out) {
    if (e.kind == ExprKind::Literal && e.literal.type() == ValueType::Uint)
        out.insert(e.literal.as_uint());
    for (const auto& c : e.children) harvest_expr(c, out);
}

static void harvest_body(const std::vector<Statement>& body, std::set<std::uint64_t>& out) {
    for (const auto& st : body) {
        harvest_expr(st.expr, out);
        harvest_expr(st.addr_expr, out);
        harvest_expr(st.amount_expr, out);
        harvest_body(st.then_body, out);
        harvest_body(st.else_body, out);
    }
}

SeedPool default_pool_for(const ContractModel& model) {
    SeedPool pool = default_seed_pool();
    std::set<std::uint64_t> dict(pool.amounts.begin(), pool.amounts.end());
    for (const auto& s : model.storage)
        if (s.type == ValueType::Uint) dict.insert(s.init.as_uint());
    for (const auto& f : model.functions) harvest_body(f.body, dict);
    pool.amounts.assign(dict.begin(), dict.end());
    return pool;
}

}  // namespace reflectfuzz
