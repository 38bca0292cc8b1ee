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

#include "echlab/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "echlab/errors.hpp"
#include "echlab/parallel.hpp"

namespace echlab {

std::vector<double> default_d_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) {
    throw DomainError("d-grid needs 0 < lo < hi and per_decade >= 1");
  }
  const double span = std::log10(hi / lo);
  const auto steps = static_cast<int>(std::llround(span * per_decade));
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) {
    out.push_back(lo * std::pow(10.0, span * static_cast<double>(i) / std::max(steps, 1)));
  }
  return out;
}

std::vector<DecaySample> decay_samples(const Profile& profile, const std::vector<double>& d_grid,
                                       unsigned threads) {
  for (double d : d_grid) {
    if (!(d > 0.0)) throw DomainError("decay samples need positive distances");
  }
  if (threads == 0) threads = default_thread_count();
  return parallel_map<DecaySample>(d_grid.size(), threads, [&](std::size_t i) {
    return DecaySample{d_grid[i], volume_decay(profile, d_grid[i])};
  });
}

DimensionEstimate inner_dimension(const std::vector<DecaySample>& samples) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(samples.size());
  for (const auto& s : samples) {
    if (!(s.v > 0.0)) throw DomainError("inner_dimension: zero-volume sample at d = " + std::to_string(s.d));
    pts.emplace_back(s.d, s.v);
  }
  DimensionEstimate out;
  out.fit = fit_loglog(pts);
  out.dimension = 4.0 - out.fit.exponent;
  return out;
}

std::vector<FoldedDecaySample> folded_decay(const FoldingParams& params,
                                            const std::vector<double>& d_grid, unsigned threads) {
  const Profile& f = params.profile;
  if (!f.is_power_law()) throw DomainError("folded_decay needs a power-law profile");
  if (!(params.delta > 0.0)) throw DomainError("folded_decay needs delta > 0");
  for (double d : d_grid) {
    if (!(d > 0.0)) throw DomainError("folded decay needs positive distances");
  }
  if (threads == 0) threads = default_thread_count();
  return parallel_map<FoldedDecaySample>(d_grid.size(), threads, [&](std::size_t i) {
    const double d = d_grid[i];
    FoldedDecaySample s;
    s.d = d;
    // Fibres are squares of side sqrt f; they are entirely within d of their
    // boundary once sqrt f <= 2d.
    const double x_inf = f.level_crossing(4.0 * d * d);
    const double inner = f.area_to(x_inf);
    s.tail = f.area_between(x_inf, kInfinity);
    s.strip_x = f.area_to(std::min(d, x_inf));
    s.strip_y0 = d * inner;
    s.strip_y1 = d * inner;
    if (x_inf > 0.0) {
      auto ring = [&](double t) {
        const double x = std::expm1(t);
        return (4.0 * d * std::sqrt(f.value(x)) - 4.0 * d * d) * std::exp(t);
      };
      s.strip_w = adaptive_simpson(ring, 0.0, std::log1p(x_inf), params.tol);
    }
    s.v = s.tail + s.strip_x + s.strip_y0 + s.strip_y1 + s.strip_w;
    return s;
  });
}

std::vector<DecaySample> as_samples(const std::vector<FoldedDecaySample>& folded) {
  std::vector<DecaySample> out;
  out.reserve(folded.size());
  for (const auto& s : folded) out.push_back({s.d, s.v});
  return out;
}

}  // namespace echlab
