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

#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "echlab/errors.hpp"
#include "echlab/weights.hpp"

using namespace echlab;

namespace {

// Random convex lattice polygon profile with up to five edges.
Profile random_lattice_profile(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> step(1, 6), edges(1, 5);
  std::vector<std::pair<int, int>> e;
  const int n = edges(rng);
  for (int i = 0; i < n; ++i) e.emplace_back(step(rng), step(rng));
  std::sort(e.begin(), e.end(), [](auto l, auto r) { return l.second * r.first > r.second * l.first; });
  int h = 0;
  for (auto [dx, dy] : e) h += dy;
  std::vector<Point2> pts{{0.0, static_cast<double>(h)}};
  double x = 0, y = h;
  for (auto [dx, dy] : e) {
    x += dx;
    y -= dy;
    if (pts.size() >= 2) {
      const auto p0 = pts[pts.size() - 2], p1 = pts.back();
      if ((p1.y - p0.y) * (x - p1.x) == (y - p1.y) * (p1.x - p0.x)) pts.pop_back();
    }
    pts.push_back({x, y});
  }
  return Profile::piecewise_linear(pts);
}

double half_sum_squares(const std::vector<double>& w) {
  return 0.5 * std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
}

}  // namespace

TEST_SUITE("weights") {
  TEST_CASE("a triangle is a single ball") {
    for (double a : {1.0, 2.5, 7.0}) {
      const auto ws = weight_expansion(Profile::piecewise_linear({{0, a}, {a, 0}}));
      REQUIRE(ws.head.size() == 1);
      CHECK(ws.head[0] == doctest::Approx(a));
      CHECK(ws.tail_volume == 0.0);
      CHECK(ws.finite());
    }
  }

  TEST_CASE("ellipsoid profiles") {
    const auto e12 = weight_expansion(Profile::piecewise_linear({{0, 1}, {2, 0}}));
    REQUIRE(e12.head.size() == 2);
    CHECK(e12.head[0] == doctest::Approx(1.0));
    CHECK(e12.head[1] == doctest::Approx(1.0));
    CHECK(e12.tail_volume == 0.0);
    const auto prof = Profile::piecewise_linear({{0, 1}, {3, 0}});
    const auto e13 = weight_expansion(prof);
    REQUIRE(e13.finite());
    CHECK(e13.head == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(half_sum_squares(e13.head) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(prof.area() == 1.5);
  }

  TEST_CASE("structural invariants on random lattice polygons") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const auto prof = random_lattice_profile(rng);
      const auto ws = weight_expansion(prof, {0.0, 100000});
      REQUIRE(ws.finite());
      CHECK(std::is_sorted(ws.head.rbegin(), ws.head.rend()));
      CHECK(ws.head.back() > 0.0);
      CHECK(ws.tail_cap <= ws.head.back());
      CHECK(half_sum_squares(ws.head) == doctest::Approx(prof.area()).epsilon(1e-9));
      for (double a : ws.head) CHECK(a <= prof.f0() + prof.support_end());
    }
  }

  TEST_CASE("truncated expansions keep a certified tail") {
    const auto prof = Profile::piecewise_linear({{0, 5}, {1, 3}, {4, 1}, {9, 0}});
    const auto full = weight_expansion(prof, {0.0, 100000});
    const auto cut = weight_expansion(prof, {0.0, 3});
    REQUIRE(cut.head.size() == 3);
    CHECK(cut.tail_volume > 0.0);
    CHECK(half_sum_squares(cut.head) + cut.tail_volume == doctest::Approx(prof.area()).epsilon(1e-12));
    CHECK(cut.tail_cap <= cut.head.back());
    CHECK(cut.tail_cap >= full.head[3] - 1e-12);
  }

  TEST_CASE("support-function engine agrees with polygon recursion") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
      const auto prof = random_lattice_profile(rng);
      auto a = weight_expansion(prof, {0.0, 100000}).head;
      WeightEngine engine(prof);
      engine.expand(100000);
      REQUIRE(engine.exhausted());
      auto b = engine.head();
      std::sort(a.rbegin(), a.rend());
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
    }
  }

  TEST_CASE("engine snapshots and monotone expansion") {
    WeightEngine engine(Profile::power_law(1.5));
    engine.expand(100);
    const auto s100 = engine.snapshot(100);
    engine.expand(50);  // no-op: already emitted
    CHECK(engine.head().size() == 100);
    engine.expand(1000);
    const auto s1000 = engine.snapshot(1000);
    CHECK(std::equal(s100.head.begin(), s100.head.end(), s1000.head.begin()));
    CHECK(std::is_sorted(s1000.head.rbegin(), s1000.head.rend()));
    CHECK(s1000.tail_volume < s100.tail_volume);
    CHECK(s1000.tail_cap <= s1000.head.back());
    CHECK(half_sum_squares(s1000.head) + s1000.tail_volume == doctest::Approx(2.0).epsilon(1e-9));
    double residue_area = 0.0;
    for (const auto& r : s1000.residues) residue_area += r.area;
    CHECK(residue_area == doctest::Approx(s1000.tail_volume).epsilon(1e-6));
  }

  TEST_CASE("unbounded expansion: tangent lower bounds") {
    const auto f = Profile::power_law(1.5);
    const int m = 16;
    auto ws = weight_expansion_unbounded(f, m);
    std::vector<double> bounds;
    for (int i = 1; i <= m; ++i) {
      if (auto t = tangent_triangle(f, i)) bounds.push_back(t->weight_lower_bound);
    }
    std::sort(bounds.rbegin(), bounds.rend());
    REQUIRE(ws.head.size() >= bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) CHECK(ws.head[i] >= bounds[i] * (1 - 1e-12));
  }

  TEST_CASE("unbounded expansion: extent and refinement") {
    const auto f = Profile::power_law(1.5);
    double prev_tail = INFINITY;
    for (int m : {4, 8, 16}) {
      const auto ws = weight_expansion_unbounded(f, m);
      const double extent = pl_inner_approx(f, default_slope_schedule(m)).support_end();
      CHECK(std::accumulate(ws.head.begin(), ws.head.end(), 0.0) >= extent);
      CHECK(ws.tail_volume < prev_tail);
      CHECK(half_sum_squares(ws.head) + ws.tail_volume == doctest::Approx(f.area()).epsilon(1e-9));
      prev_tail = ws.tail_volume;
    }
  }

  TEST_CASE("expansion errors") {
    CHECK_THROWS_AS(weight_expansion(Profile::power_law(1.5)), DomainError);
    CHECK_THROWS_AS(weight_expansion(Profile::piecewise_linear({{0, 4}, {3, 3}, {4, 0}})), DomainError);
    CHECK_THROWS_AS(WeightEngine(Profile::piecewise_linear({{0, 3}, {2, 3}, {2, 0}})), DomainError);
  }
}
