// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace reflectfuzz {

// The six value kinds a contract can store, accept and compare.
enum class ValueType { Uint, Int, Bool, Address, Bytes, String };

const char* to_string(ValueType t);
std::optional<ValueType> value_type_from_string(std::string_view s);

struct Address {
    std::array<std::uint8_t, 20> bytes{};

    auto operator<=>(const Address&) const = default;

    // Builds an address whose low 8 bytes hold `tail` big-endian.
    static Address from_tail(std::uint64_t tail);
};

std::string to_hex(const Address& a);
std::optional<Address> address_from_hex(std::string_view s);

using Bytes = std::vector<std::uint8_t>;

// Tagged runtime value. The variant alternative order mirrors ValueType.
struct Value {
    std::variant<std::uint64_t, std::int64_t, bool, Address, Bytes, std::string> data{std::uint64_t{0}};

    ValueType type() const { return static_cast<ValueType>(data.index()); }

    std::uint64_t as_uint() const { return std::get<std::uint64_t>(data); }
    std::int64_t as_int() const { return std::get<std::int64_t>(data); }
    bool as_bool() const { return std::get<bool>(data); }
    const Address& as_address() const { return std::get<Address>(data); }
    const Bytes& as_bytes() const { return std::get<Bytes>(data); }
    const std::string& as_string() const { return std::get<std::string>(data); }

    bool operator==(const Value&) const = default;
};

Value uint_value(std::uint64_t v);
Value int_value(std::int64_t v);
Value bool_value(bool v);
Value address_value(const Address& v);
Value bytes_value(Bytes v);
Value string_value(std::string v);
Value default_value(ValueType t);

// Canonical text form used by the record codec: decimal for numbers,
// true/false, 0x-hex for addresses and bytes, raw text for strings.
std::string value_to_text(const Value& v);
std::optional<Value> value_from_text(ValueType t, std::string_view text);

enum class Visibility { Public, External, Internal, Private };

const char* to_string(Visibility v);
std::optional<Visibility> visibility_from_string(std::string_view s);

struct Param {
    std::string name;
    ValueType type = ValueType::Uint;

    bool operator==(const Param&) const = default;
};

struct FunctionDescriptor {
    std::string name;
    std::vector<Param> params;
    bool payable = false;
    Visibility visibility = Visibility::Public;

    bool callable() const {
        return visibility == Visibility::Public || visibility == Visibility::External;
    }

    bool operator==(const FunctionDescriptor&) const = default;
};

// One attack-sequence element: named call with typed args, a sender and
// an ether amount in wei.
struct Transaction {
    std::string function;
    std::vector<Value> args;
    Address sender{};
    std::uint64_t amount = 0;

    bool operator==(const Transaction&) const = default;
};

enum class SequenceOrigin { Drafted, GloballyReflected, LocallyReflected };

const char* to_string(SequenceOrigin o);
std::optional<SequenceOrigin> sequence_origin_from_string(std::string_view s);

struct TransactionSequence {
    std::vector<Transaction> txs;
    SequenceOrigin origin = SequenceOrigin::Drafted;

    bool operator==(const TransactionSequence&) const = default;

    // Equality of the transactions alone, ignoring the origin marker.
    bool same_txs(const TransactionSequence& other) const { return txs == other.txs; }
};

enum class SenderRole { Deployer, User, Attacker };

// Address universe and candidate amounts for a fuzzing run. The deployer is
// distinct from users and attackers; amounts always include 0.
struct SeedPool {
    Address deployer{};
    std::vector<Address> users;
    std::vector<Address> attackers;
    std::vector<std::uint64_t> amounts;  // kept sorted and unique

    std::vector<Address> all_senders() const;
    const std::vector<Address>& partition(SenderRole role) const;
    bool contains_sender(const Address& a) const;
    bool contains_amount(std::uint64_t v) const;
    bool is_attacker(const Address& a) const;

    bool operator==(const SeedPool&) const = default;
};

// Base pool: one deployer, three users, two attackers, amounts {0, 1}.
SeedPool default_seed_pool();

struct EmptyPartition : std::runtime_error {
    explicit EmptyPartition(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic pick from the requested partition.
Address sample_sender(const SeedPool& pool, SenderRole role, std::uint64_t rng_seed);

// What the policy layer is allowed to know about the target program.
struct ProgramContext {
    std::string source_text;
    std::vector<FunctionDescriptor> interface;  // callable surface only
    SeedPool seed_pool;

    const FunctionDescriptor* find(std::string_view name) const;
};

enum class FaultKind {
    UnknownFunction,
    ArgTypeMismatch,
    SenderNotInPool,
    AmountNotInPool,
    ValueToNonPayable,
};

const char* to_string(FaultKind k);

struct ElementFault {
    int tx_index = 0;
    FaultKind kind = FaultKind::UnknownFunction;
    std::string detail;

    bool operator==(const ElementFault&) const = default;
};

// Static checks of a sequence against the callable interface and the pool.
// A tx with an unknown function gets exactly one fault; otherwise every
// violated element is reported.
std::vector<ElementFault> validate_sequence(const TransactionSequence& seq, const ProgramContext& ctx);

struct DecodeError : std::runtime_error {
    std::string position;
    std::string cause;

    DecodeError(std::string pos, std::string c)
        : std::runtime_error(pos + ": " + c), position(std::move(pos)), cause(std::move(c)) {}
};

// Canonical JSON record codec. encode is deterministic (sorted keys, fixed
// indentation); decode is strict about required fields, value-type tags and
// non-negative amounts.
std::string encode_sequence(const TransactionSequence& seq);
TransactionSequence decode_sequence(const std::string& text);

}  // namespace reflectfuzz
