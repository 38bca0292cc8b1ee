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

#include <cstdint>
#include <memory>
#include <vector>

#include "echlab/domain.hpp"
#include "echlab/weights.hpp"

namespace echlab {

// Certified interval for c_k. When `multiplicities` is nonempty it is a
// feasible vector d_i on the (sorted) head weights attaining `lower`.
struct CapacityBracket {
  std::int64_t k = 0;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::int64_t> multiplicities;
  std::int64_t exhausted_budget = 0;  // sum of d_i^2 + d_i
  bool exact = false;
  bool converged = true;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
};

// (k+1)-st smallest entry of {a(m+n)}: a*d with d minimal, (d+1)(d+2)/2 >= k+1.
double cap_ball(double a, std::int64_t k);
// (k+1)-st smallest entry of {ma + nb : m, n >= 0}.
double cap_ellipsoid(double a, double b, std::int64_t k);
// min{am + bn : (m+1)(n+1) >= k+1}.
double cap_polydisc(double a, double b, std::int64_t k);

struct ExactLimits {
  std::int64_t max_k = 5000;
  std::size_t max_items = 500;
};

// Exact optimum of max sum d_i a_i subject to sum d_i^2 + d_i <= 2k by dynamic
// programming over the budget. Requires a finite sequence (no tail); throws
// LimitExceeded past the limits.
CapacityBracket cap_union_exact(const WeightSequence& weights, std::int64_t k,
                                ExactLimits limits = {});
// c_0, ..., c_kmax of the ball union in one pass.
std::vector<double> cap_union_exact_sequence(const std::vector<double>& weights,
                                             std::int64_t kmax, ExactLimits limits = {});

// Certified bracket using the first `head_cut` weights (all when negative) as
// explicit items and the rest of the sequence as tail.
CapacityBracket cap_union_bracket(const WeightSequence& weights, std::int64_t k,
                                  std::int64_t head_cut = -1, ExactLimits limits = {});

struct CapacityOptions {
  double tolerance = 0.05;            // relative width measured against |e_k|
  std::int64_t initial_weights = 4096;
  std::int64_t max_weights = std::int64_t{1} << 20;
  std::int64_t convolution_limit = 20000;
  unsigned threads = 0;
  ExactLimits exact;
};

// Capacity evaluator for one domain. Concave toric pieces keep their weight
// expansion between calls and refine it on demand.
class CapacitySolver {
 public:
  explicit CapacitySolver(DomainSpec spec, CapacityOptions options = {});
  ~CapacitySolver();
  CapacitySolver(CapacitySolver&&) noexcept;
  CapacitySolver& operator=(CapacitySolver&&) noexcept;

  const DomainSpec& spec() const;
  double volume() const;

  // Refines until the tolerance is met or the resource cap is hit.
  CapacityBracket bracket(std::int64_t k);
  // Brackets for many indices; evaluation at fixed refinement runs in parallel.
  std::vector<CapacityBracket> sequence(const std::vector<std::int64_t>& ks);
  // Current weight data of a spec made only of balls and concave toric pieces.
  WeightSequence weights() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

CapacityBracket cap_spec(const DomainSpec& spec, std::int64_t k, double tolerance = 0.05);
std::vector<CapacityBracket> cap_sequence(const DomainSpec& spec,
                                          const std::vector<std::int64_t>& ks,
                                          CapacityOptions options = {});

}  // namespace echlab
