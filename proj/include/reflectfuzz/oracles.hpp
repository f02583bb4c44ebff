// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "reflectfuzz/vm.hpp"

namespace reflectfuzz {

enum class VulnClass {
    EtherLeak,
    SuicidalContract,
    BlockstateDependency,
    UncheckedEther,
    UnrestrictedDelegate,
    EtherFreeze,
    Reentrancy,
    TxOriginUse,
};

// Short detector code, e.g. "EL".
const char* to_string(VulnClass c);
// Human name, e.g. "ether leak".
const char* describe(VulnClass c);
std::optional<VulnClass> vuln_class_from_string(std::string_view s);

enum class Severity { Medium, High };

const char* to_string(Severity s);
Severity severity(VulnClass c);

// Every class, enum order. Useful for exhaustive iteration.
const std::vector<VulnClass>& all_classes();

// Reporting precedence: when several classes fire on one trace, the verdict
// shown to agents names the first one in this order.
const std::vector<VulnClass>& verdict_order();

struct Verdict {
    bool found = false;
    std::vector<std::size_t> witness;  // indices into the examined trace's events

    bool operator==(const Verdict&) const = default;
};

struct OracleReport {
    std::map<VulnClass, Verdict> verdicts;

    bool any_found() const;
    // Classes that fired, in verdict_order().
    std::vector<VulnClass> found_classes() const;
    const Verdict& at(VulnClass c) const { return verdicts.at(c); }
};

// Evaluates all eight detectors against one committed trace. `history`
// carries earlier traces of the same contract; only the ether freeze
// detector consults it (the contract must have accepted ether at least once
// across the campaign for freezing to be observable).
OracleReport run_all(const ContractModel& model, const ExecutionTrace& trace, const SeedPool& pool,
                     const std::vector<ExecutionTrace>& history = {});

}  // namespace reflectfuzz
