// Copyright 2026 The ech-lab Authors. All rights reserved.
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

#include <cstddef>
#include <functional>
#include <vector>

namespace echlab {

// Worker count used when a caller passes threads == 0: ECH_LAB_THREADS if set
// to a positive integer, otherwise std::thread::hardware_concurrency().
unsigned default_thread_count();

// Runs body(i) for i in [0, n) on up to `threads` workers. Items must be
// independent; callers merge results by index, so output never depends on
// scheduling. Exceptions from any item are rethrown (first by index).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned threads, F&& fn) {
  std::vector<T> out(n);
  parallel_for(n, threads, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace echlab
