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

#include <future>
#include <optional>
#include <stop_token>
#include <thread>

#include "twinchain/ledger/block.hpp"

namespace twinchain::ledger {

inline bool meets_difficulty(const Hash256& h, std::uint32_t difficulty) { return leading_zero_bits(h) >= difficulty; }

inline bool proof_valid(const BlockHeader& header) { return meets_difficulty(header.hash(), header.difficulty); }

struct MiningResult {
  std::uint64_t nonce{0};
  std::uint64_t attempts{0};
};

// Searches nonces upward from `start` until the header hash meets its
// difficulty. Returns nullopt when `keep_going` reports false; it is polled
// every 256 attempts.
template <class KeepGoing>
std::optional<MiningResult> search_nonce(const BlockHeader& header, KeepGoing&& keep_going, std::uint64_t start = 0) {
  auto buffer = header.encode();
  auto* tail = buffer.data() + buffer.size() - 8;
  std::uint64_t attempts = 0;
  for (std::uint64_t nonce = start;; ++nonce) {
    if ((attempts & 0xff) == 0 && !keep_going()) return std::nullopt;
    for (int i = 0; i < 8; ++i) tail[i] = static_cast<std::uint8_t>(nonce >> (8 * (7 - i)));
    ++attempts;
    if (meets_difficulty(sha256(buffer), header.difficulty)) return MiningResult{nonce, attempts};
  }
}

inline std::optional<MiningResult> search_nonce(const BlockHeader& header, std::stop_token stop = {},
                                                std::uint64_t start = 0) {
  return search_nonce(header, [&] { return !stop.stop_requested(); }, start);
}

// Runs a mining function on a dedicated worker thread. Destroying or
// cancelling the job requests stop; the result is nullopt if it was cut short.
template <class Result>
class MiningJob {
 public:
  template <class F>
  explicit MiningJob(F&& work) {
    std::packaged_task<std::optional<Result>(std::stop_token)> task{std::forward<F>(work)};
    result_ = task.get_future();
    worker_ = std::jthread{[t = std::move(task)](std::stop_token st) mutable { t(st); }};
  }

  void cancel() { worker_.request_stop(); }
  std::optional<Result> wait() { return result_.get(); }

 private:
  std::future<std::optional<Result>> result_;
  std::jthread worker_;
};

}  // namespace twinchain::ledger
