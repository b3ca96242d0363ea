/*
   Copyright 2026 The Twinchain Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twinchain::ledger {

enum class LedgerErrc {
  kBadSignature,
  kStaleNonce,
  kUnknownSender,
  kTooManyTopics,
  kIncompatibleGenesis,
  kBadChainDump,
};

constexpr std::string_view to_string(LedgerErrc e) {
  switch (e) {
    case LedgerErrc::kBadSignature: return "BadSignature";
    case LedgerErrc::kStaleNonce: return "StaleNonce";
    case LedgerErrc::kUnknownSender: return "UnknownSender";
    case LedgerErrc::kTooManyTopics: return "TooManyTopics";
    case LedgerErrc::kIncompatibleGenesis: return "IncompatibleGenesis";
    case LedgerErrc::kBadChainDump: return "BadChainDump";
  }
  return "Unknown";
}

class LedgerError : public std::runtime_error {
 public:
  LedgerError(LedgerErrc code, const std::string& detail = {})
      : std::runtime_error{std::string{to_string(code)} + (detail.empty() ? "" : ": " + detail)}, code_{code} {}

  [[nodiscard]] LedgerErrc code() const noexcept { return code_; }

 private:
  LedgerErrc code_;
};

// Outcome of block validation. Rejections are values, never exceptions.
enum class BlockVerdict {
  kAccepted,
  kAlreadyKnown,
  kOrphan,  // parent not known yet
  kMalformed,
  kBadParent,
  kBadProof,
  kBadDifficulty,
  kBadTimestamp,
  kBadTxRoot,
  kBadSignature,
  kBadNonce,
  kUnknownSender,
  kGasLimitExceeded,
  kBadStateRoot,
  kInvalidAncestor,
};

constexpr std::string_view to_string(BlockVerdict v) {
  switch (v) {
    case BlockVerdict::kAccepted: return "Accepted";
    case BlockVerdict::kAlreadyKnown: return "AlreadyKnown";
    case BlockVerdict::kOrphan: return "Orphan";
    case BlockVerdict::kMalformed: return "Malformed";
    case BlockVerdict::kBadParent: return "BadParent";
    case BlockVerdict::kBadProof: return "BadProof";
    case BlockVerdict::kBadDifficulty: return "BadDifficulty";
    case BlockVerdict::kBadTimestamp: return "BadTimestamp";
    case BlockVerdict::kBadTxRoot: return "BadTxRoot";
    case BlockVerdict::kBadSignature: return "BadSignature";
    case BlockVerdict::kBadNonce: return "BadNonce";
    case BlockVerdict::kUnknownSender: return "UnknownSender";
    case BlockVerdict::kGasLimitExceeded: return "GasLimitExceeded";
    case BlockVerdict::kBadStateRoot: return "BadStateRoot";
    case BlockVerdict::kInvalidAncestor: return "InvalidAncestor";
  }
  return "Unknown";
}

}  // namespace twinchain::ledger
