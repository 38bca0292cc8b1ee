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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "echlab/bounds.hpp"
#include "echlab/errors.hpp"
#include "oracles.hpp"

using namespace echlab;

namespace {
constexpr double kPi = std::numbers::pi;

Square square_at(std::int64_t i, std::int64_t j, double s) {
  return {{static_cast<double>(i) * s, static_cast<double>(i + 1) * s},
          {static_cast<double>(j) * s, static_cast<double>(j + 1) * s}};
}

// Greedy count in the positive orthant of both planes, by plain quadruple
// loops. Dyadic cubes nest, so a cube meets a kept coarser cube iff one of
// its ancestors was kept.
std::vector<std::int64_t> brute_counts(const Profile& f, int max_level) {
  std::vector<std::int64_t> counts;
  std::vector<std::vector<bool>> kept_by_level;
  std::vector<std::int64_t> width;
  for (int n = 0; n <= max_level; ++n) {
    const double s = std::ldexp(1.0, -n);
    // Coordinates reach at most where the smallest w-square stops fitting;
    // f(0) bounds the w side and the z side is found by stepping outward.
    std::int64_t w = static_cast<std::int64_t>(std::ceil(std::sqrt(f.f0() / kPi) / s)) + 1;
    while (f(kPi * s * s * static_cast<double>(w * w)) > 2.0 * kPi * s * s) ++w;
    width.push_back(w);
    std::vector<bool> kept(static_cast<std::size_t>(w * w * w * w), false);
    std::int64_t c = 0;
    for (std::int64_t i = 0; i < w; ++i)
      for (std::int64_t j = 0; j < w; ++j)
        for (std::int64_t k = 0; k < w; ++k)
          for (std::int64_t l = 0; l < w; ++l) {
            const double r = kPi * s * s * static_cast<double>((i + 1) * (i + 1) + (j + 1) * (j + 1));
            const double sw = kPi * s * s * static_cast<double>((k + 1) * (k + 1) + (l + 1) * (l + 1));
            if (!(sw < f(r))) continue;
            bool blocked = false;
            for (int m = 0; m < n && !blocked; ++m) {
              const int sh = n - m;
              const std::int64_t wm = width[static_cast<std::size_t>(m)];
              const std::int64_t a = i >> sh, b = j >> sh, cc = k >> sh, d = l >> sh;
              if (a < wm && b < wm && cc < wm && d < wm)
                blocked = kept_by_level[static_cast<std::size_t>(m)][static_cast<std::size_t>(((a * wm + b) * wm + cc) * wm + d)];
            }
            if (blocked) continue;
            kept[static_cast<std::size_t>(((i * w + j) * w + k) * w + l)] = true;
            ++c;
          }
    kept_by_level.push_back(std::move(kept));
    counts.push_back(16 * c);
  }
  return counts;
}
}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("cube_fits examples") {
    const auto f = Profile::piecewise_linear({{0, 7}, {7, 7}, {7, 0}});
    CHECK(cube_fits(f, square_at(0, 0, 1), square_at(0, 0, 1)));
    CHECK(cube_fits(f, square_at(-1, -1, 1), square_at(-1, 0, 1)));
    // pi * 5 > 7: the far corner (1, 2) leaves the polydisc.
    CHECK_FALSE(cube_fits(f, square_at(0, 1, 1), square_at(0, 0, 1)));
    const auto g = Profile::power_law(1.5);
    // Open condition: S equal to f(R) does not fit.
    const double s = std::sqrt(g(kPi * 2.0 * 0.01) / (2.0 * kPi));
    CHECK_FALSE(cube_fits(g, square_at(0, 0, 0.1), square_at(0, 0, s)));
    CHECK(cube_fits(g, square_at(0, 0, 0.1), square_at(0, 0, s * (1 - 1e-9))));
  }

  TEST_CASE("polydisc P(7, 7) holds one unit cube per orthant") {
    const auto f = Profile::piecewise_linear({{0, 7}, {7, 7}, {7, 0}});
    const auto p = dyadic_packing(f, 0);
    CHECK(p.levels.at(0).count == 16);
    CHECK(p.levels.at(0).side_area == 1.0);
    CHECK(p.levels.at(0).cube_volume == 1.0);
  }

  TEST_CASE("counts agree with brute force and with the explicit packing") {
    for (const auto& f : {Profile::power_law(1.5), Profile::power_law(2.0),
                          Profile::piecewise_linear({{0, 3}, {2, 1}, {4, 0}})}) {
      const auto packing = dyadic_packing(f, 3);
      const auto brute = brute_counts(f, 3);
      const auto cubes = enumerate_packing(f, 3);
      std::vector<std::int64_t> listed(4, 0);
      for (const auto& c : cubes) ++listed[static_cast<std::size_t>(c.level)];
      for (int n = 0; n <= 3; ++n) {
        CHECK(packing.levels[static_cast<std::size_t>(n)].count == brute[static_cast<std::size_t>(n)]);
        CHECK(packing.levels[static_cast<std::size_t>(n)].count == listed[static_cast<std::size_t>(n)]);
        CHECK(packing.levels[static_cast<std::size_t>(n)].count % 16 == 0);
      }
    }
  }

  TEST_CASE("explicit cubes are disjoint and inside the domain") {
    const auto f = Profile::power_law(1.5);
    const auto cubes = enumerate_packing(f, 3);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& c : cubes) {
      const double s = std::ldexp(1.0, -c.level);
      for (int t = 0; t < 20; ++t) {
        const double x = (static_cast<double>(c.i) + u(rng)) * s, y = (static_cast<double>(c.j) + u(rng)) * s;
        const double a = (static_cast<double>(c.k) + u(rng)) * s, b = (static_cast<double>(c.l) + u(rng)) * s;
        REQUIRE(kPi * (a * a + b * b) < f(kPi * (x * x + y * y)));
      }
    }
    // Pairwise open-box disjointness.
    for (std::size_t p = 0; p < cubes.size(); ++p) {
      for (std::size_t q = p + 1; q < cubes.size(); ++q) {
        const auto& A = cubes[p];
        const auto& B = cubes[q];
        const double sa = std::ldexp(1.0, -A.level), sb = std::ldexp(1.0, -B.level);
        auto overlap = [](double a0, double a1, double b0, double b1) { return a0 < b1 && b0 < a1; };
        const bool meet =
            overlap(A.i * sa, (A.i + 1) * sa, B.i * sb, (B.i + 1) * sb) &&
            overlap(A.j * sa, (A.j + 1) * sa, B.j * sb, (B.j + 1) * sb) &&
            overlap(A.k * sa, (A.k + 1) * sa, B.k * sb, (B.k + 1) * sb) &&
            overlap(A.l * sa, (A.l + 1) * sa, B.l * sb, (B.l + 1) * sb);
        REQUIRE_FALSE(meet);
      }
    }
  }

  TEST_CASE("packed volume grows with the level and stays below the domain volume") {
    const auto f = Profile::power_law(1.5);
    const auto packing = dyadic_packing(f, 8);
    double prev = 0.0;
    for (int n = 0; n <= 8; ++n) {
      CubePacking partial;
      partial.levels.assign(packing.levels.begin(), packing.levels.begin() + n + 1);
      const double v = partial.packed_volume();
      CHECK(v >= prev);
      prev = v;
    }
    CHECK(prev < f.area());
    CHECK(prev > 0.5 * f.area());
  }

  TEST_CASE("cube counts grow like 2^(10/3 n) for the 1.5 power law") {
    const auto packing = dyadic_packing(Profile::power_law(1.5), 8);
    std::vector<std::pair<double, double>> xy;
    for (const auto& lv : packing.levels) {
      if (lv.level >= 4 && lv.count > 0) xy.emplace_back(std::ldexp(1.0, lv.level), static_cast<double>(lv.count));
    }
    REQUIRE(xy.size() >= 4);
    CHECK(oracle::loglog_slope(xy) == doctest::Approx(10.0 / 3.0).epsilon(0.12));  // +-0.4
  }

  TEST_CASE("Hutchings bound against a direct evaluation") {
    const auto f = Profile::power_law(1.5);
    const auto packing = dyadic_packing(f, 7);
    const double vol = f.area();
    for (std::int64_t k : {1, 10, 1000, 100000}) {
      double sum_a = 0.0, vk = 0.0;
      for (const auto& lv : packing.levels) {
        const double a = std::pow(4.0, -lv.level);
        if (a * a >= vol / static_cast<double>(k)) {
          sum_a += static_cast<double>(lv.count) * a;
          vk += static_cast<double>(lv.count) * a * a;
        }
      }
      const double expect = -2.0 * std::sqrt(2.0) * sum_a + 2.0 * (vk - vol) * std::sqrt(static_cast<double>(k) / vol);
      CHECK(hutchings_lower_bound(packing, vol, k) == doctest::Approx(expect).epsilon(1e-12));
      CHECK(hutchings_lower_bound(packing, vol, k) < 0.0);
    }
    CHECK_THROWS_AS(hutchings_lower_bound(packing, vol, 0), DomainError);
    CHECK_THROWS_AS(hutchings_lower_bound(packing, 0.0, 5), DomainError);
  }

  TEST_CASE("decay lower curve") {
    CHECK(decay_lower_curve(2.0, 3.0, 1000) == doctest::Approx(-3.0));
    CHECK(decay_lower_curve(1.0, 1.0, 10000) == doctest::Approx(-10.0));
    CHECK(decay_lower_curve(2.0 / 3.0, 2.0, 4096) == doctest::Approx(-2.0 * std::pow(4096.0, 1.0 / 3.0)));
    CHECK_THROWS_AS(decay_lower_curve(0.0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(decay_lower_curve(2.5, 1.0, 1), DomainError);
    CHECK_THROWS_AS(decay_lower_curve(1.0, -1.0, 1), DomainError);
    CHECK_THROWS_AS(dyadic_packing(Profile::power_law(1.5), 9), DomainError);
  }
}
