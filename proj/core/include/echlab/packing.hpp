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
#include <optional>
#include <vector>

#include "echlab/capacities.hpp"

namespace echlab {

struct ScaleCap {
  double scale_upper = kInfinity;  // no embedding of scale * source above this
  std::int64_t argmin_k = 0;
  std::int64_t scanned = 0;        // number of indices examined
};

// min over k in `ks` (k >= 1, c_k(source) > 0) of
// upper c_k(target) / lower c_k(source); capacities are linear in scale.
ScaleCap scale_cap(const DomainSpec& source, const DomainSpec& target,
                   const std::vector<std::int64_t>& ks, CapacityOptions options = {});
// All k <= min(k_max, 4096) plus a geometric grid (ratio 1.01) up to k_max.
ScaleCap scale_cap(const DomainSpec& source, const DomainSpec& target, std::int64_t k_max,
                   CapacityOptions options = {});
std::vector<std::int64_t> scale_cap_indices(std::int64_t k_max);

struct ObstructionReport {
  DomainSpec source;  // unit scale
  DomainSpec target;
  double equal_volume_scale = 0.0;  // scale making vol(source) = vol(target)
  std::optional<std::int64_t> witness_k;
  double source_lower = 0.0;  // at the witness, equal-volume scale
  double target_upper = 0.0;
  double scale_upper = kInfinity;
  std::int64_t ratio_k = 0;    // index attaining scale_upper
  double packing_upper = 1.0;  // fraction of vol(target) the source can fill
  std::int64_t scanned_k_max = 0;
  bool unconverged_skipped = false;
};

// Searches for the smallest k with lower c_k(equal-volume source) above
// upper c_k(target): geometric probes (ratio 1.5) then a scan of the last
// gap. packing_upper uses the best ratio seen up to the witness.
ObstructionReport generalized_obstruction(const DomainSpec& source, const DomainSpec& target,
                                          std::int64_t k_cap, CapacityOptions options = {});

// n equal balls against a concave toric target, realised as lambda E(1, n)
// at the equal-volume lambda = sqrt(2 vol / n).
ObstructionReport obstruction_witness(std::int64_t n, const Profile& target, std::int64_t k_cap,
                                      CapacityOptions options = {});

}  // namespace echlab
