// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#include "reflectfuzz/txmodel.hpp"

#include <algorithm>
#include <charconv>
#include <random>

#include "json.hpp"

namespace reflectfuzz {

using nlohmann::json;

const char* to_string(ValueType t) {
    switch (t) {
    case ValueType::Uint: return "uint";
    case ValueType::Int: return "int";
    case ValueType::Bool: return "bool";
    case ValueType::Address: return "address";
    case ValueType::Bytes: return "bytes";
    case ValueType::String: return "string";
    }
    return "?";
}

std::optional<ValueType> value_type_from_string(std::string_view s) {
    if (s == "uint") return ValueType::Uint;
    if (s == "int") return ValueType::Int;
    if (s == "bool") return ValueType::Bool;
    if (s == "address") return ValueType::Address;
    if (s == "bytes") return ValueType::Bytes;
    if (s == "string") return ValueType::String;
    return std::nullopt;
}

Address Address::from_tail(std::uint64_t tail) {
    Address a;
    for (int i = 0; i < 8; ++i)
        a.bytes[19 - i] = static_cast<std::uint8_t>(tail >> (8 * i));
    return a;
}

static int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::string to_hex(const Address& a) {
    static const char* digits = "0123456789abcdef";
    std::string out = "0x";
    out.reserve(42);
    for (auto b : a.bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

std::optional<Address> address_from_hex(std::string_view s) {
    if (s.size() != 42 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X')) return std::nullopt;
    Address a;
    for (int i = 0; i < 20; ++i) {
        int hi = hex_digit(s[2 + 2 * i]);
        int lo = hex_digit(s[3 + 2 * i]);
        if (hi < 0 || lo < 0) return std::nullopt;
        a.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return a;
}

Value uint_value(std::uint64_t v) { return Value{v}; }
Value int_value(std::int64_t v) { return Value{v}; }
Value bool_value(bool v) { return Value{v}; }
Value address_value(const Address& v) { return Value{v}; }
Value bytes_value(Bytes v) { return Value{std::move(v)}; }
Value string_value(std::string v) { return Value{std::move(v)}; }

Value default_value(ValueType t) {
    switch (t) {
    case ValueType::Uint: return uint_value(0);
    case ValueType::Int: return int_value(0);
    case ValueType::Bool: return bool_value(false);
    case ValueType::Address: return address_value(Address{});
    case ValueType::Bytes: return bytes_value({});
    case ValueType::String: return string_value("");
    }
    return uint_value(0);
}

std::string value_to_text(const Value& v) {
    switch (v.type()) {
    case ValueType::Uint: return std::to_string(v.as_uint());
    case ValueType::Int: return std::to_string(v.as_int());
    case ValueType::Bool: return v.as_bool() ? "true" : "false";
    case ValueType::Address: return to_hex(v.as_address());
    case ValueType::Bytes: {
        static const char* digits = "0123456789abcdef";
        std::string out = "0x";
        for (auto b : v.as_bytes()) {
            out.push_back(digits[b >> 4]);
            out.push_back(digits[b & 0xf]);
        }
        return out;
    }
    case ValueType::String: return v.as_string();
    }
    return "";
}

std::optional<Value> value_from_text(ValueType t, std::string_view text) {
    switch (t) {
    case ValueType::Uint: {
        if (text.empty()) return std::nullopt;
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || p != text.data() + text.size()) return std::nullopt;
        return uint_value(v);
    }
    case ValueType::Int: {
        if (text.empty()) return std::nullopt;
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || p != text.data() + text.size()) return std::nullopt;
        return int_value(v);
    }
    case ValueType::Bool:
        if (text == "true") return bool_value(true);
        if (text == "false") return bool_value(false);
        return std::nullopt;
    case ValueType::Address: {
        auto a = address_from_hex(text);
        if (!a) return std::nullopt;
        return address_value(*a);
    }
    case ValueType::Bytes: {
        if (text.size() < 2 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) return std::nullopt;
        if ((text.size() - 2) % 2 != 0) return std::nullopt;
        Bytes out;
        for (size_t i = 2; i + 1 < text.size(); i += 2) {
            int hi = hex_digit(text[i]);
            int lo = hex_digit(text[i + 1]);
            if (hi < 0 || lo < 0) return std::nullopt;
            out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
        }
        return bytes_value(std::move(out));
    }
    case ValueType::String:
        return string_value(std::string(text));
    }
    return std::nullopt;
}

const char* to_string(Visibility v) {
    switch (v) {
    case Visibility::Public: return "public";
    case Visibility::External: return "external";
    case Visibility::Internal: return "internal";
    case Visibility::Private: return "private";
    }
    return "?";
}

std::optional<Visibility> visibility_from_string(std::string_view s) {
    if (s == "public") return Visibility::Public;
    if (s == "external") return Visibility::External;
    if (s == "internal") return Visibility::Internal;
    if (s == "private") return Visibility::Private;
    return std::nullopt;
}

const char* to_string(SequenceOrigin o) {
    switch (o) {
    case SequenceOrigin::Drafted: return "drafted";
    case SequenceOrigin::GloballyReflected: return "globally-reflected";
    case SequenceOrigin::LocallyReflected: return "locally-reflected";
    }
    return "?";
}

std::optional<SequenceOrigin> sequence_origin_from_string(std::string_view s) {
    if (s == "drafted") return SequenceOrigin::Drafted;
    if (s == "globally-reflected") return SequenceOrigin::GloballyReflected;
    if (s == "locally-reflected") return SequenceOrigin::LocallyReflected;
    return std::nullopt;
}

std::vector<Address> SeedPool::all_senders() const {
    std::vector<Address> out;
    out.push_back(deployer);
    out.insert(out.end(), users.begin(), users.end());
    out.insert(out.end(), attackers.begin(), attackers.end());
    return out;
}

const std::vector<Address>& SeedPool::partition(SenderRole role) const {
    static const std::vector<Address> empty;
    switch (role) {
    case SenderRole::Deployer: {
        // Materialized on demand would dangle; the deployer partition is a
        // single element so callers go through sample_sender instead.
        static thread_local std::vector<Address> dep;
        dep.assign(1, deployer);
        return dep;
    }
    case SenderRole::User: return users;
    case SenderRole::Attacker: return attackers;
    }
    return empty;
}

bool SeedPool::contains_sender(const Address& a) const {
    if (a == deployer) return true;
    if (std::find(users.begin(), users.end(), a) != users.end()) return true;
    return std::find(attackers.begin(), attackers.end(), a) != attackers.end();
}

bool SeedPool::contains_amount(std::uint64_t v) const {
    return std::binary_search(amounts.begin(), amounts.end(), v);
}

bool SeedPool::is_attacker(const Address& a) const {
    return std::find(attackers.begin(), attackers.end(), a) != attackers.end();
}

SeedPool default_seed_pool() {
    SeedPool pool;
    pool.deployer = Address::from_tail(0x1001);
    pool.users = {Address::from_tail(0x2001), Address::from_tail(0x2002), Address::from_tail(0x2003)};
    pool.attackers = {Address::from_tail(0xa001), Address::from_tail(0xa002)};
    pool.amounts = {0, 1};
    return pool;
}

Address sample_sender(const SeedPool& pool, SenderRole role, std::uint64_t rng_seed) {
    const std::vector<Address>& part = pool.partition(role);
    if (part.empty()) throw EmptyPartition("sample_sender: empty partition");
    std::mt19937_64 gen(rng_seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(role));
    std::uniform_int_distribution<size_t> dist(0, part.size() - 1);
    return part[dist(gen)];
}

const FunctionDescriptor* ProgramContext::find(std::string_view name) const {
    for (const auto& f : interface)
        if (f.name == name) return &f;
    return nullptr;
}

const char* to_string(FaultKind k) {
    switch (k) {
    case FaultKind::UnknownFunction: return "UnknownFunction";
    case FaultKind::ArgTypeMismatch: return "ArgTypeMismatch";
    case FaultKind::SenderNotInPool: return "SenderNotInPool";
    case FaultKind::AmountNotInPool: return "AmountNotInPool";
    case FaultKind::ValueToNonPayable: return "ValueToNonPayable";
    }
    return "?";
}

std::vector<ElementFault> validate_sequence(const TransactionSequence& seq, const ProgramContext& ctx) {
    std::vector<ElementFault> faults;
    for (size_t i = 0; i < seq.txs.size(); ++i) {
        const Transaction& tx = seq.txs[i];
        const int idx = static_cast<int>(i);
        const FunctionDescriptor* fd = ctx.find(tx.function);
        if (fd == nullptr) {
            faults.push_back({idx, FaultKind::UnknownFunction, tx.function});
            continue;
        }
        if (tx.args.size() != fd->params.size()) {
            faults.push_back({idx, FaultKind::ArgTypeMismatch,
                              "expected " + std::to_string(fd->params.size()) + " args, got " +
                                  std::to_string(tx.args.size())});
        } else {
            for (size_t a = 0; a < tx.args.size(); ++a) {
                if (tx.args[a].type() != fd->params[a].type) {
                    faults.push_back({idx, FaultKind::ArgTypeMismatch,
                                      std::string(fd->params[a].name) + " expects " +
                                          to_string(fd->params[a].type) + ", got " +
                                          to_string(tx.args[a].type())});
                }
            }
        }
        if (!ctx.seed_pool.contains_sender(tx.sender))
            faults.push_back({idx, FaultKind::SenderNotInPool, to_hex(tx.sender)});
        if (!ctx.seed_pool.contains_amount(tx.amount))
            faults.push_back({idx, FaultKind::AmountNotInPool, std::to_string(tx.amount)});
        if (tx.amount > 0 && !fd->payable)
            faults.push_back({idx, FaultKind::ValueToNonPayable, tx.function});
    }
    return faults;
}

// ===== record codec =====

std::string encode_sequence(const TransactionSequence& seq) {
    json doc;
    doc["origin"] = to_string(seq.origin);
    json txs = json::array();
    for (const auto& tx : seq.txs) {
        json args = json::array();
        for (const auto& v : tx.args)
            args.push_back({{"type", to_string(v.type())}, {"value", value_to_text(v)}});
        txs.push_back({{"function", tx.function},
                       {"args", std::move(args)},
                       {"sender", to_hex(tx.sender)},
                       {"amount", std::to_string(tx.amount)}});
    }
    doc["txs"] = std::move(txs);
    return doc.dump(2) + "\n";
}

static const json& require_field(const json& obj, const char* key, const std::string& pos) {
    auto it = obj.find(key);
    if (it == obj.end()) throw DecodeError(pos, std::string("missing field '") + key + "'");
    return *it;
}

TransactionSequence decode_sequence(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw DecodeError("$", "not a JSON document");
    if (!doc.is_object()) throw DecodeError("$", "expected an object");

    TransactionSequence seq;
    if (auto it = doc.find("origin"); it != doc.end()) {
        if (!it->is_string()) throw DecodeError("origin", "expected a string");
        auto o = sequence_origin_from_string(it->get<std::string>());
        if (!o) throw DecodeError("origin", "unknown origin '" + it->get<std::string>() + "'");
        seq.origin = *o;
    }

    const json& txs = require_field(doc, "txs", "$");
    if (!txs.is_array()) throw DecodeError("txs", "expected an array");

    for (size_t i = 0; i < txs.size(); ++i) {
        const std::string pos = "txs[" + std::to_string(i) + "]";
        const json& jt = txs[i];
        if (!jt.is_object()) throw DecodeError(pos, "expected an object");
        Transaction tx;

        const json& fn = require_field(jt, "function", pos);
        if (!fn.is_string()) throw DecodeError(pos + ".function", "expected a string");
        tx.function = fn.get<std::string>();

        const json& args = require_field(jt, "args", pos);
        if (!args.is_array()) throw DecodeError(pos + ".args", "expected an array");
        for (size_t a = 0; a < args.size(); ++a) {
            const std::string apos = pos + ".args[" + std::to_string(a) + "]";
            const json& ja = args[a];
            if (!ja.is_object()) throw DecodeError(apos, "expected an object");
            const json& jtype = require_field(ja, "type", apos);
            if (!jtype.is_string()) throw DecodeError(apos + ".type", "expected a string");
            auto vt = value_type_from_string(jtype.get<std::string>());
            if (!vt) throw DecodeError(apos + ".type", "unknown value type '" + jtype.get<std::string>() + "'");
            const json& jval = require_field(ja, "value", apos);
            std::string raw;
            if (jval.is_string()) raw = jval.get<std::string>();
            else if (jval.is_number_unsigned()) raw = std::to_string(jval.get<std::uint64_t>());
            else if (jval.is_number_integer()) raw = std::to_string(jval.get<std::int64_t>());
            else if (jval.is_boolean()) raw = jval.get<bool>() ? "true" : "false";
            else throw DecodeError(apos + ".value", "expected a string or scalar");
            auto v = value_from_text(*vt, raw);
            if (!v) throw DecodeError(apos + ".value", "'" + raw + "' is not a valid " + to_string(*vt));
            tx.args.push_back(std::move(*v));
        }

        const json& sender = require_field(jt, "sender", pos);
        if (!sender.is_string()) throw DecodeError(pos + ".sender", "expected a hex address string");
        auto addr = address_from_hex(sender.get<std::string>());
        if (!addr) throw DecodeError(pos + ".sender", "malformed address '" + sender.get<std::string>() + "'");
        tx.sender = *addr;

        const json& amount = require_field(jt, "amount", pos);
        if (amount.is_number_integer() && amount.get<std::int64_t>() < 0)
            throw DecodeError(pos + ".amount", "negative amount");
        std::string araw;
        if (amount.is_string()) araw = amount.get<std::string>();
        else if (amount.is_number_unsigned()) araw = std::to_string(amount.get<std::uint64_t>());
        else if (amount.is_number_integer()) araw = std::to_string(amount.get<std::int64_t>());
        else throw DecodeError(pos + ".amount", "expected a decimal string");
        if (!araw.empty() && araw[0] == '-') throw DecodeError(pos + ".amount", "negative amount");
        auto av = value_from_text(ValueType::Uint, araw);
        if (!av) throw DecodeError(pos + ".amount", "'" + araw + "' is not a valid amount");
        tx.amount = av->as_uint();

        seq.txs.push_back(std::move(tx));
    }
    return seq;
}

}  // namespace reflectfuzz
