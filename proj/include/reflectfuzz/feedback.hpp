// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reflectfuzz/oracles.hpp"
#include "reflectfuzz/signals.hpp"
#include "reflectfuzz/txmodel.hpp"

namespace reflectfuzz {

// The categories agents reason in. Every raw executor signal folds into
// exactly one of these.
enum class FeedbackKind {
    FunctionNotFound,
    ArgumentMismatch,
    SenderError,
    NonPayableFunction,
    IncorrectTransactionValue,
    RequireFailed,
};

const char* to_string(FeedbackKind k);

// Total mapping; no raw signal is left out.
FeedbackKind fold_signal(RawSignalKind k);

struct Feedback {
    // Per transaction index: categories observed, deduplicated, in first
    // occurrence order.
    std::map<int, std::vector<FeedbackKind>> per_tx;
    // First fired class in verdict_order(), if any.
    std::optional<VulnClass> vulnerability;
    std::string summary_text;
    // The undigested executor signals. Repair heuristics read guard texts
    // from here; the categories alone would lose that information.
    std::vector<RawSignal> raw_signals;

    bool clean() const { return per_tx.empty(); }
};

Feedback translate(const std::vector<RawSignal>& raws, const OracleReport& report);

// Renders one line per transaction plus a final verdict line. When the text
// would exceed `cap` characters it is truncated in the middle; the verdict
// line always survives.
std::string summarize(const Feedback& fb, const TransactionSequence& seq, std::size_t cap = 2000);

// translate + summarize, with the summary stored on the result.
Feedback analyze(const std::vector<RawSignal>& raws, const OracleReport& report,
                 const TransactionSequence& seq, std::size_t cap = 2000);

}  // namespace reflectfuzz
