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

#include "echlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <numbers>
#include <set>
#include <string>

#include "echlab/errors.hpp"

namespace echlab {
namespace {

constexpr double kPi = std::numbers::pi;

double max_corner_norm2(const Square& s) {
  const double x = std::max(std::abs(s.x.lo), std::abs(s.x.hi));
  const double y = std::max(std::abs(s.y.lo), std::abs(s.y.hi));
  return x * x + y * y;
}

// Squares with corner at the origin-facing lattice point and far corner
// (i s, j s), i, j >= 1, grouped by m = i^2 + j^2: reps[m] = #{(i, j)}.
std::vector<std::int64_t> representation_counts(std::int64_t m_max) {
  std::vector<std::int64_t> reps(static_cast<std::size_t>(m_max + 1), 0);
  for (std::int64_t i = 1; i * i + 1 <= m_max; ++i) {
    for (std::int64_t j = 1; i * i + j * j <= m_max; ++j) ++reps[static_cast<std::size_t>(i * i + j * j)];
  }
  return reps;
}

}  // namespace

bool cube_fits(const Profile& profile, const Square& z, const Square& w) {
  const double r = kPi * max_corner_norm2(z);
  const double s = kPi * max_corner_norm2(w);
  return s < profile.value(r);
}

double CubePacking::packed_volume() const {
  double total = 0.0;
  for (const auto& lv : levels) total += static_cast<double>(lv.count) * lv.cube_volume;
  return total;
}

CubePacking dyadic_packing(const Profile& profile, int max_level) {
  if (max_level < 0 || max_level > 8) throw DomainError("dyadic_packing needs 0 <= max_level <= 8");
  const double f0 = profile.f0();
  CubePacking out;
  std::int64_t fitting_prev = 0;
  for (int n = 0; n <= max_level; ++n) {
    const double s = std::ldexp(1.0, -n);
    const double cell = kPi * s * s;  // pi s^2 (i^2 + j^2) is the largest pi|z|^2 of a square
    // No cube fits once f(R) <= 2 pi s^2, the smallest w-square value.
    const double r_cut = profile.level_crossing(2.0 * cell);
    const auto z_max = static_cast<std::int64_t>(std::floor(r_cut / cell)) + 1;
    const auto w_max = static_cast<std::int64_t>(std::floor(f0 / cell)) + 1;
    const auto reps_w = representation_counts(w_max);
    // below[m] = number of w-squares with i^2 + j^2 <= m.
    std::vector<std::int64_t> below(reps_w.size(), 0);
    for (std::size_t m = 1; m < reps_w.size(); ++m) below[m] = below[m - 1] + reps_w[m];
    auto w_squares_under = [&](double level_value) -> std::int64_t {
      // Squares with pi s^2 m < level_value.
      if (level_value <= 0.0) return 0;
      auto m = static_cast<std::int64_t>(std::ceil(level_value / cell)) - 1;
      while (m >= 0 && cell * static_cast<double>(m + 1) < level_value) ++m;
      while (m > 0 && !(cell * static_cast<double>(m) < level_value)) --m;
      m = std::min<std::int64_t>(m, static_cast<std::int64_t>(below.size()) - 1);
      return m < 1 ? 0 : below[static_cast<std::size_t>(m)];
    };
    std::int64_t fitting = 0;  // in the first orthant of both planes
    for (std::int64_t i = 1; i * i + 1 <= z_max; ++i) {
      for (std::int64_t j = 1; i * i + j * j <= z_max; ++j) {
        const double fr = profile.value(cell * static_cast<double>(i * i + j * j));
        const std::int64_t under = w_squares_under(fr);
        if (under == 0) break;  // f decreases along j
        fitting += under;
      }
    }
    // Each fitting cube of the previous level contributes 16 fitting
    // children, none of which may be kept.
    const std::int64_t added = 16 * (fitting - 16 * fitting_prev);
    if (added < 0) throw DomainError("internal: dyadic packing count went negative");
    out.levels.push_back({n, added, s * s, s * s * s * s});
    fitting_prev = fitting;
  }
  return out;
}

std::vector<Cube> enumerate_packing(const Profile& profile, int max_level,
                                    std::int64_t max_cubes) {
  if (max_level < 0 || max_level > 8) throw DomainError("enumerate_packing needs 0 <= max_level <= 8");
  std::vector<Cube> kept;
  std::set<std::array<std::int64_t, 5>> index;
  for (int n = 0; n <= max_level; ++n) {
    const double s = std::ldexp(1.0, -n);
    // Lattice range: |z|^2 < f(0)/pi bounds every coordinate of a fitting cube.
    const double reach = std::sqrt(std::max(profile.level_crossing(2.0 * kPi * s * s), 0.0) / kPi);
    const double wreach = std::sqrt(profile.f0() / kPi);
    const auto zi = static_cast<std::int64_t>(std::ceil(reach / s)) + 1;
    const auto wi = static_cast<std::int64_t>(std::ceil(wreach / s)) + 1;
    for (std::int64_t i = -zi; i < zi; ++i) {
      for (std::int64_t j = -zi; j < zi; ++j) {
        const Square z{{i * s, (i + 1) * s}, {j * s, (j + 1) * s}};
        for (std::int64_t k = -wi; k < wi; ++k) {
          for (std::int64_t l = -wi; l < wi; ++l) {
            const Square w{{k * s, (k + 1) * s}, {l * s, (l + 1) * s}};
            if (!cube_fits(profile, z, w)) continue;
            bool blocked = false;
            for (int c = 0; c < n && !blocked; ++c) {
              // Parent at level c: floor division of the index by 2^(n-c).
              const int sh = n - c;
              auto up = [sh](std::int64_t v) { return v >= 0 ? v >> sh : -((-v - 1) >> sh) - 1; };
              blocked = index.count({c, up(i), up(j), up(k), up(l)}) > 0;
            }
            if (blocked) continue;
            kept.push_back({n, i, j, k, l});
            index.insert({n, i, j, k, l});
            if (static_cast<std::int64_t>(kept.size()) > max_cubes) {
              throw LimitExceeded("enumerate_packing exceeded " + std::to_string(max_cubes) + " cubes");
            }
          }
        }
      }
    }
  }
  return kept;
}

double hutchings_lower_bound(const CubePacking& packing, double volume, std::int64_t k) {
  if (k < 1) throw DomainError("hutchings_lower_bound needs k >= 1");
  if (!(volume > 0.0)) throw DomainError("hutchings_lower_bound needs a positive volume");
  const double threshold = volume / static_cast<double>(k);
  double sum_a = 0.0;
  double v_k = 0.0;
  for (const auto& lv : packing.levels) {
    if (lv.cube_volume < threshold) continue;
    sum_a += static_cast<double>(lv.count) * lv.side_area;
    v_k += static_cast<double>(lv.count) * lv.cube_volume;
  }
  return -2.0 * std::sqrt(2.0) * sum_a +
         2.0 * (v_k - volume) / std::sqrt(volume) * std::sqrt(static_cast<double>(k));
}

double decay_lower_curve(double q, double c, std::int64_t k) {
  if (!(q > 0.0) || q > 2.0) throw DomainError("decay order q must lie in (0, 2]");
  if (!(c > 0.0)) throw DomainError("constant C must be positive");
  if (k < 1) throw DomainError("decay_lower_curve needs k >= 1");
  return -c * std::pow(static_cast<double>(k), (2.0 - q) / 4.0);
}

}  // namespace echlab
