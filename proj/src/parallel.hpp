// Copyright 2026 The shiftspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace shiftspec::detail {

// Worker cap: SHIFTSPEC_THREADS if set, hardware concurrency otherwise.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("SHIFTSPEC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Calls fn(chunk, begin, end) for every fixed-size chunk of [0, n). Chunk
// boundaries do not depend on the thread count, so callers that reduce
// per-chunk results in chunk order get identical output for any budget.
template <class Fn>
void for_each_chunk(std::size_t n, std::size_t chunkSize, Fn&& fn) {
  if (n == 0) return;
  const std::size_t chunks = (n + chunkSize - 1) / chunkSize;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(thread_budget(), chunks));
  auto run = [&](std::size_t c) {
    const std::size_t begin = c * chunkSize;
    fn(c, begin, std::min(n, begin + chunkSize));
  };
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) run(c);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace shiftspec::detail
