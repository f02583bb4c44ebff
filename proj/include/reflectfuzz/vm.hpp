// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "reflectfuzz/contract_model.hpp"
#include "reflectfuzz/signals.hpp"
#include "reflectfuzz/txmodel.hpp"

namespace reflectfuzz {

struct GenesisConfig {
    std::uint64_t account_funding = 1'000'000;
    std::uint64_t genesis_timestamp = 1'000'000;
    std::uint64_t genesis_block = 1;
    std::uint64_t block_interval_secs = 15;

    bool operator==(const GenesisConfig&) const = default;
};

struct VmOptions {
    int reenter_bound = 2;  // maximum attacker callback nesting depth
    GenesisConfig genesis;

    bool operator==(const VmOptions&) const = default;
};

// Complete world state. Equality is exact, which is what the transaction
// atomicity guarantee is stated in terms of: a reverted transaction leaves
// the state equal to the state before it, taint bookkeeping included.
struct ChainState {
    std::map<std::string, Value> storage;
    std::uint64_t contract_balance = 0;
    std::map<Address, std::uint64_t> external_balances;
    std::map<Address, std::uint64_t> nonces;
    std::uint64_t block_number = 0;
    std::uint64_t block_timestamp = 0;
    bool contract_dead = false;
    // Slots whose current value derives from caller-controlled inputs,
    // from transferred value, or from block data, carried across
    // transactions so later reads see the provenance.
    std::set<std::string> input_tainted_slots;
    std::set<std::string> value_tainted_slots;
    std::map<std::string, BlockFieldKind> block_tainted_slots;

    bool operator==(const ChainState&) const = default;
};

enum class TraceEventKind {
    TxBegin,
    Reverted,
    EtherIn,
    EtherOut,
    StorageWrite,
    SelfDestructed,
    LowLevelCallFailed,
    ReenteredCall,
    BlockFieldRead,
    TxOriginRead,
    DelegateCalled,
};

const char* to_string(TraceEventKind k);

// One observation from execution. Flat on purpose: every event carries the
// {tx_index, depth} envelope, other fields are meaningful per kind:
//   TxBegin            name=function, addr=sender, amount=declared value
//   Reverted           name=cause text
//   EtherIn            addr=payer, amount
//   EtherOut           addr=recipient, amount, via=send|call|selfdestruct
//   StorageWrite       name=slot, old_value, new_value
//   SelfDestructed     addr=beneficiary
//   LowLevelCallFailed addr=target, amount, flag=result was captured
//   ReenteredCall      addr=attacker, depth=new frame depth
//   BlockFieldRead     field, flag=read happened inside a branch condition
//   TxOriginRead       flag=read happened inside a guard condition
//   DelegateCalled     addr=target, flag=target derives from caller input
struct TraceEvent {
    TraceEventKind kind = TraceEventKind::TxBegin;
    int tx_index = 0;
    int depth = 0;
    std::string name;
    Address addr{};
    std::uint64_t amount = 0;
    Value old_value{};
    Value new_value{};
    std::string via;
    bool flag = false;
    BlockFieldKind field = BlockFieldKind::Timestamp;

    bool operator==(const TraceEvent&) const = default;
};

std::string describe(const TraceEvent& e);

// Fresh world: storage initialised, the deployer slot bound to the pool's
// deployer, every pool address funded, block cursor at genesis.
ChainState deploy(const ContractModel& model, const SeedPool& pool, const VmOptions& options);

struct TxResult {
    std::vector<TraceEvent> events;   // committed view only
    std::vector<RawSignal> signals;   // top-level frame only
};

// Runs one transaction against the state in place. A transaction is atomic:
// on any failure the state is restored exactly, including nonce and block
// cursor, and the event list is collapsed to [TxBegin, Reverted]. Events
// from nested attacker callbacks that reverted are likewise discarded, with
// only the [ReenteredCall, Reverted] pair kept.
TxResult execute_transaction(ChainState& state, const Transaction& tx, const ContractModel& model,
                             const SeedPool& pool, int tx_index, const VmOptions& options);

struct ExecutionTrace {
    std::vector<TraceEvent> events;
    ChainState final_state;
    std::vector<RawSignal> raw_signals;

    bool operator==(const ExecutionTrace&) const = default;
};

// deploy + execute_transaction over the whole sequence.
ExecutionTrace execute_sequence(const ContractModel& model, const SeedPool& pool,
                                const TransactionSequence& seq, const VmOptions& options = {});

}  // namespace reflectfuzz
