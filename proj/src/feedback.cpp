// reflectfuzz: collaborative reflective fuzzing for contract models
// Copyright 2026 The reflectfuzz Authors.
// SPDX-License-Identifier: Apache-2.0
#include "reflectfuzz/feedback.hpp"

#include <algorithm>
#include <sstream>

namespace reflectfuzz {

const char* to_string(FeedbackKind k) {
    switch (k) {
    case FeedbackKind::FunctionNotFound: return "FunctionNotFound";
    case FeedbackKind::ArgumentMismatch: return "ArgumentMismatch";
    case FeedbackKind::SenderError: return "SenderError";
    case FeedbackKind::NonPayableFunction: return "NonPayableFunction";
    case FeedbackKind::IncorrectTransactionValue: return "IncorrectTransactionValue";
    case FeedbackKind::RequireFailed: return "RequireFailed";
    }
    return "?";
}

FeedbackKind fold_signal(RawSignalKind k) {
    switch (k) {
    case RawSignalKind::UnknownFunction: return FeedbackKind::FunctionNotFound;
    case RawSignalKind::ArityOrTypeMismatch: return FeedbackKind::ArgumentMismatch;
    case RawSignalKind::InsufficientBalance: return FeedbackKind::SenderError;
    case RawSignalKind::BadNonce: return FeedbackKind::SenderError;
    case RawSignalKind::ValueToNonpayable: return FeedbackKind::NonPayableFunction;
    case RawSignalKind::ValueConstraintViolation: return FeedbackKind::IncorrectTransactionValue;
    case RawSignalKind::RequireFailed: return FeedbackKind::RequireFailed;
    case RawSignalKind::Reverted: return FeedbackKind::RequireFailed;
    }
    return FeedbackKind::RequireFailed;
}

Feedback translate(const std::vector<RawSignal>& raws, const OracleReport& report) {
    Feedback fb;
    fb.raw_signals = raws;
    for (const RawSignal& s : raws) {
        FeedbackKind k = fold_signal(s.kind);
        auto& kinds = fb.per_tx[s.tx_index];
        if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
    }
    auto found = report.found_classes();
    if (!found.empty()) fb.vulnerability = found.front();
    return fb;
}

static std::string render_tx(const Transaction& tx) {
    std::ostringstream os;
    os << tx.function << "(";
    for (size_t i = 0; i < tx.args.size(); ++i) {
        if (i) os << ", ";
        os << to_string(tx.args[i].type()) << ":" << value_to_text(tx.args[i]);
    }
    os << ") sender=" << to_hex(tx.sender) << " amount=" << tx.amount;
    return os.str();
}

std::string summarize(const Feedback& fb, const TransactionSequence& seq, std::size_t cap) {
    std::ostringstream body;
    for (size_t i = 0; i < seq.txs.size(); ++i) {
        body << "tx " << i << ": " << render_tx(seq.txs[i]) << " -> ";
        auto it = fb.per_tx.find(static_cast<int>(i));
        if (it == fb.per_tx.end()) {
            body << "ok";
        } else {
            for (size_t k = 0; k < it->second.size(); ++k) {
                if (k) body << ", ";
                body << to_string(it->second[k]);
            }
        }
        body << "\n";
    }
    std::string verdict = fb.vulnerability
                              ? std::string("verdict: VulnerabilityFound(") + to_string(*fb.vulnerability) + ")"
                              : std::string("verdict: VulnerabilityNotFound");
    std::string text = body.str() + verdict;
    if (text.size() <= cap) return text;

    // middle-truncate: the verdict must stay readable
    const std::string ellipsis = "...\n";
    std::size_t tail = ellipsis.size() + verdict.size();
    std::size_t head = cap > tail ? cap - tail : 0;
    return text.substr(0, head) + ellipsis + verdict;
}

Feedback analyze(const std::vector<RawSignal>& raws, const OracleReport& report,
                 const TransactionSequence& seq, std::size_t cap) {
    Feedback fb = translate(raws, report);
    fb.summary_text = summarize(fb, seq, cap);
    return fb;
}

}  // namespace reflectfuzz
