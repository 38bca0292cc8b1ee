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

#include "echlab/packing.hpp"

#include <algorithm>
#include <cmath>

#include "echlab/errors.hpp"

namespace echlab {

std::vector<std::int64_t> scale_cap_indices(std::int64_t k_max) {
  if (k_max < 1) throw DomainError("scale_cap needs k_max >= 1");
  std::vector<std::int64_t> ks;
  const std::int64_t dense = std::min<std::int64_t>(k_max, 4096);
  for (std::int64_t k = 1; k <= dense; ++k) ks.push_back(k);
  double next = static_cast<double>(dense);
  while (ks.back() < k_max) {
    next *= 1.01;
    const auto k = std::min(k_max, static_cast<std::int64_t>(std::ceil(next)));
    if (k > ks.back()) ks.push_back(k);
  }
  return ks;
}

ScaleCap scale_cap(const DomainSpec& source, const DomainSpec& target,
                   const std::vector<std::int64_t>& ks, CapacityOptions options) {
  CapacitySolver src(source, options);
  CapacitySolver tgt(target, options);
  std::vector<std::int64_t> valid;
  for (auto k : ks) {
    if (k >= 1) valid.push_back(k);
  }
  const auto s = src.sequence(valid);
  const auto t = tgt.sequence(valid);
  ScaleCap out;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    if (!(s[i].lower > 0.0)) continue;
    ++out.scanned;
    const double ratio = t[i].upper / s[i].lower;
    if (ratio < out.scale_upper) {
      out.scale_upper = ratio;
      out.argmin_k = valid[i];
    }
  }
  return out;
}

ScaleCap scale_cap(const DomainSpec& source, const DomainSpec& target, std::int64_t k_max,
                   CapacityOptions options) {
  return scale_cap(source, target, scale_cap_indices(k_max), options);
}

ObstructionReport generalized_obstruction(const DomainSpec& source, const DomainSpec& target,
                                          std::int64_t k_cap, CapacityOptions options) {
  if (k_cap < 1) throw DomainError("k_cap must be >= 1");
  ObstructionReport rep{source, target, 0.0, std::nullopt};
  const double vs = volume(source);
  const double vt = volume(target);
  if (!std::isfinite(vt)) throw InfiniteVolumeError("target volume must be finite");
  if (!(vs > 0.0) || !std::isfinite(vs)) throw DomainError("source volume must be positive and finite");
  rep.equal_volume_scale = std::sqrt(vt / vs);
  const double lambda = rep.equal_volume_scale;
  CapacitySolver src(source, options);
  CapacitySolver tgt(target, options);

  double best_ratio = kInfinity;
  std::int64_t best_k = 0;
  // Evaluates a batch of indices in parallel; returns the first obstructed one.
  auto probe = [&](const std::vector<std::int64_t>& ks) -> std::optional<std::int64_t> {
    const auto s = src.sequence(ks);
    const auto t = tgt.sequence(ks);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (s[i].lower > 0.0) {
        const double r = t[i].upper / s[i].lower;
        if (r < best_ratio) {
          best_ratio = r;
          best_k = ks[i];
        }
      }
      if (!s[i].converged || !t[i].converged) {
        rep.unconverged_skipped = true;
        continue;
      }
      if (lambda * s[i].lower > t[i].upper) return ks[i];
    }
    return std::nullopt;
  };

  std::vector<std::int64_t> grid{1};
  while (grid.back() < k_cap) {
    const auto k = grid.back();
    grid.push_back(std::min(
        k_cap, std::max(k + 1, static_cast<std::int64_t>(std::ceil(1.5 * static_cast<double>(k))))));
  }
  std::optional<std::int64_t> hit;
  std::int64_t prev = 0;
  constexpr std::size_t kBatch = 8;
  for (std::size_t i = 0; i < grid.size() && !hit; i += kBatch) {
    std::vector<std::int64_t> batch(grid.begin() + static_cast<std::ptrdiff_t>(i),
                                    grid.begin() + static_cast<std::ptrdiff_t>(std::min(grid.size(), i + kBatch)));
    hit = probe(batch);
    rep.scanned_k_max = hit ? *hit : batch.back();
    if (hit) {
      const auto pos = std::find(grid.begin(), grid.end(), *hit);
      prev = pos == grid.begin() ? 0 : *(pos - 1);
    }
  }
  if (hit) {
    // The predicate need not be monotone in k, so the last geometric gap is
    // scanned in order rather than bisected.
    constexpr std::int64_t kChunk = 256;
    for (std::int64_t lo = prev + 1; lo < *hit; lo += kChunk) {
      std::vector<std::int64_t> chunk;
      for (std::int64_t j = lo; j < std::min(*hit, lo + kChunk); ++j) chunk.push_back(j);
      if (auto earlier = probe(chunk)) {
        hit = earlier;
        break;
      }
    }
    const auto s = src.bracket(*hit);
    const auto t = tgt.bracket(*hit);
    rep.witness_k = hit;
    rep.source_lower = lambda * s.lower;
    rep.target_upper = t.upper;
  }
  rep.scale_upper = best_ratio;
  rep.ratio_k = best_k;
  rep.packing_upper = std::min(1.0, best_ratio * best_ratio * vs / vt);
  return rep;
}

ObstructionReport obstruction_witness(std::int64_t n, const Profile& target, std::int64_t k_cap,
                                      CapacityOptions options) {
  if (n < 1) throw DomainError("number of balls must be >= 1");
  return generalized_obstruction(DomainSpec::ellipsoid(1.0, static_cast<double>(n)),
                                 DomainSpec::concave_toric(target), k_cap, options);
}

}  // namespace echlab
