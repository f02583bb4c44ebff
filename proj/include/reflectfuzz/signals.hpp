// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace reflectfuzz {

// Low-level outcome of running one transaction. These are the executor's
// vocabulary; the feedback layer folds them into agent-facing categories.
enum class RawSignalKind {
    UnknownFunction,
    ArityOrTypeMismatch,
    InsufficientBalance,
    BadNonce,
    ValueToNonpayable,
    ValueConstraintViolation,
    RequireFailed,
    Reverted,
};

const char* to_string(RawSignalKind k);

struct RawSignal {
    RawSignalKind kind = RawSignalKind::Reverted;
    int tx_index = 0;
    // For RequireFailed / ValueConstraintViolation this is the guard text as
    // written in the model, which repair heuristics match against bodies.
    std::string detail;

    bool operator==(const RawSignal&) const = default;
};

}  // namespace reflectfuzz
