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
#include <cmath>
#include <random>

#include "doctest.h"
#include "echlab/capacities.hpp"
#include "echlab/errors.hpp"
#include "echlab/weights.hpp"
#include "oracles.hpp"

using namespace echlab;

namespace {
WeightSequence seq_of(std::vector<double> w) {
  WeightSequence ws;
  std::sort(w.rbegin(), w.rend());
  ws.head = std::move(w);
  return ws;
}
}  // namespace

TEST_SUITE("capacities") {
  TEST_CASE("ball examples and definition") {
    CHECK(cap_ball(1, 0) == 0);
    CHECK(cap_ball(1, 6) == 3);
    CHECK(cap_ball(2, 6) == 6);
    for (std::int64_t k = 0; k <= 10000; ++k) REQUIRE(cap_ball(1.5, k) == oracle::ball(1.5, k));
  }

  TEST_CASE("Weyl law for the unit ball") {
    for (std::int64_t k = 0; k <= 1000000; ++k) {
      REQUIRE(std::abs(cap_ball(1.0, k) - std::sqrt(2.0 * static_cast<double>(k))) <= 2.0);
    }
  }

  TEST_CASE("ellipsoid lattice counts") {
    const double e12[] = {0, 1, 2, 2, 3, 3, 4, 4, 4};
    for (int k = 0; k <= 8; ++k) CHECK(cap_ellipsoid(1, 2, k) == e12[k]);
    for (std::int64_t k = 0; k <= 10000; ++k) REQUIRE(cap_ellipsoid(1, 1, k) == cap_ball(1, k));
    for (double lambda : {0.5, 2.0, 4.0}) {
      for (std::int64_t k = 0; k <= 500; ++k) CHECK(cap_ellipsoid(lambda, 2 * lambda, k) == lambda * cap_ellipsoid(1, 2, k));
    }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int t = 0; t < 20; ++t) {
      const double a = u(rng), b = u(rng);
      const auto vals = oracle::lattice(a, b, 800);
      for (std::int64_t k = 0; k < 800; ++k) REQUIRE(cap_ellipsoid(a, b, k) == vals[static_cast<std::size_t>(k)]);
    }
  }

  TEST_CASE("polydisc") {
    CHECK(cap_polydisc(1, 1, 1) == 1);
    CHECK(cap_polydisc(1, 1, 3) == 2);
    for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, 2.5}, {3.0, 0.7}}) {
      for (std::int64_t k = 0; k <= 2000; ++k) REQUIRE(cap_polydisc(a, b, k) == oracle::polydisc(a, b, k));
    }
    for (double a : {1.0, 3.0}) {
      for (std::int64_t k = 0; k <= 100000; ++k) {
        REQUIRE(cap_polydisc(a, a, k) - 2.0 * std::sqrt(a * a * static_cast<double>(k)) >= -2.0 * a);
      }
    }
  }

  TEST_CASE("exact ball unions: named instances") {
    CHECK(cap_union_exact(seq_of({10.0, 9.9}), 3).lower == 20.0);
    const auto b = cap_union_exact(seq_of({1.0, 1.0}), 4);
    CHECK(b.lower == 3.0);
    CHECK(b.upper == 3.0);
    CHECK(b.exact);
    auto d = b.multiplicities;
    std::sort(d.rbegin(), d.rend());
    CHECK(d == std::vector<std::int64_t>{2, 1});
    for (std::int64_t k = 0; k <= 300; ++k) REQUIRE(cap_union_exact(seq_of({2.5}), k).lower == cap_ball(2.5, k));
  }

  TEST_CASE("exact ball unions against exhaustive enumeration") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> count(1, 4);
    std::uniform_real_distribution<double> w(0.05, 10.0);
    for (int inst = 0; inst < 500; ++inst) {
      std::vector<double> ws(static_cast<std::size_t>(count(rng)));
      for (auto& x : ws) x = w(rng);
      const auto seq = seq_of(ws);
      for (std::int64_t k = 0; k <= 12; ++k) {
        const auto b = cap_union_exact(seq, k);
        REQUIRE(b.lower == doctest::Approx(oracle::union_by_multiplicities(seq.head, k)).epsilon(1e-14));
        // Multiplicity certificate.
        REQUIRE(b.multiplicities.size() == seq.head.size());
        double value = 0.0;
        std::int64_t budget = 0;
        for (std::size_t i = 0; i < seq.head.size(); ++i) {
          REQUIRE(b.multiplicities[i] >= 0);
          value += static_cast<double>(b.multiplicities[i]) * seq.head[i];
          budget += b.multiplicities[i] * (b.multiplicities[i] + 1);
        }
        CHECK(budget <= 2 * k);
        CHECK(value == doctest::Approx(b.lower).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("exchange inequality at exact optima") {
    // Moving one unit from item j (d_j -> d_j - 1 frees d_j budget units) onto
    // d_j unused items starting at I never gains.
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> w(0.1, 3.0);
    for (int inst = 0; inst < 100; ++inst) {
      std::vector<double> ws(30);
      for (auto& x : ws) x = w(rng);
      const auto seq = seq_of(ws);
      for (std::int64_t k : {5, 17, 40, 90}) {
        const auto b = cap_union_exact(seq, k);
        auto d = b.multiplicities;
        std::size_t first_zero = 0;
        while (first_zero < d.size() && d[first_zero] > 0) ++first_zero;
        for (std::size_t j = 0; j < first_zero; ++j) {
          const auto need = static_cast<std::size_t>(d[j]);
          if (first_zero + need > seq.head.size()) continue;
          bool unused = true;
          for (std::size_t t = first_zero; t < first_zero + need; ++t) unused = unused && d[t] == 0;
          if (!unused) continue;
          double gain = -seq.head[j];
          for (std::size_t t = first_zero; t < first_zero + need; ++t) gain += seq.head[t];
          CHECK(gain <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("exact sequence matches pointwise evaluation") {
    const std::vector<double> w{3.0, 2.0, 1.5, 1.5, 0.5};
    const auto seq = cap_union_exact_sequence(w, 400);
    REQUIRE(seq.size() == 401);
    for (std::int64_t k = 0; k <= 400; ++k) CHECK(seq[static_cast<std::size_t>(k)] == cap_union_exact(seq_of(w), k).lower);
  }

  TEST_CASE("brackets contain the exact value") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> count(2, 50);
    std::uniform_int_distribution<std::int64_t> kk(0, 500);
    std::uniform_real_distribution<double> w(0.01, 5.0);
    for (int inst = 0; inst < 1000; ++inst) {
      std::vector<double> ws(static_cast<std::size_t>(count(rng)));
      for (auto& x : ws) x = w(rng);
      const auto seq = seq_of(ws);
      const std::int64_t k = kk(rng);
      const double exact = cap_union_exact(seq, k).lower;
      const auto cut = std::uniform_int_distribution<std::int64_t>(1, static_cast<std::int64_t>(ws.size()))(rng);
      const auto b = cap_union_bracket(seq, k, cut);
      REQUIRE(b.lower <= exact + 1e-9);
      REQUIRE(exact <= b.upper + 1e-9);
      CHECK(0.0 <= b.lower);
      const auto whole = cap_union_bracket(seq, k);
      CHECK(whole.lower == doctest::Approx(exact).epsilon(1e-12));
      CHECK(whole.upper == doctest::Approx(exact).epsilon(1e-12));
    }
  }

  TEST_CASE("upper brackets tighten as the head grows") {
    WeightEngine engine(Profile::power_law(1.5));
    engine.expand(4096);
    const auto ws = engine.snapshot(4096);
    for (std::int64_t k : {1000, 10000, 100000}) {
      double prev = INFINITY;
      for (std::int64_t n = 64; n <= 4096; n *= 2) {
        const auto b = cap_union_bracket(ws, k, n);
        CHECK(b.upper <= prev + 1e-9 * std::max(1.0, prev));
        CHECK(b.lower <= b.upper);
        prev = b.upper;
      }
    }
  }

  TEST_CASE("exact head values grow with the exhaustion level") {
    const auto f = Profile::power_law(1.5);
    std::vector<double> prev;
    for (int m : {2, 4, 8}) {
      const auto ws = weight_expansion_unbounded(f, m, {1e-3, 400});
      const auto cur = cap_union_exact_sequence(ws.head, 300);
      if (!prev.empty()) {
        for (std::size_t k = 0; k < cur.size(); ++k) CHECK(prev[k] <= cur[k] + 1e-12);
      }
      prev = cur;
    }
  }

  TEST_CASE("cap_spec dispatch") {
    const double copies[] = {0, 1, 2, 2, 3};
    for (int k = 0; k <= 4; ++k) CHECK(cap_spec(DomainSpec::copies(2, DomainSpec::ball(1)), k).lower == copies[k]);
    CapacitySolver toric(DomainSpec::concave_toric(Profile::piecewise_linear({{0, 1}, {2, 0}})));
    for (std::int64_t k = 0; k <= 1000; ++k) {
      const auto b = toric.bracket(k);
      REQUIRE(b.lower == cap_ellipsoid(1, 2, k));
      REQUIRE(b.upper == cap_ellipsoid(1, 2, k));
    }
    // A mixed union against an independent max-plus convolution.
    std::vector<double> ball, ell;
    for (std::int64_t k = 0; k <= 300; ++k) {
      ball.push_back(oracle::ball(1.0, k));
      ell.push_back(oracle::lattice(1.0, 2.0, 301)[static_cast<std::size_t>(k)]);
    }
    const auto conv = oracle::sup_convolve(ball, ell);
    const auto u = DomainSpec::disjoint_union({DomainSpec::ball(1.0), DomainSpec::ellipsoid(1.0, 2.0)});
    CapacitySolver us(u);
    for (std::int64_t k = 0; k <= 300; ++k) CHECK(us.bracket(k).lower == conv[static_cast<std::size_t>(k)]);
  }

  TEST_CASE("scale homogeneity is exact bracket-wise") {
    const DomainSpec bases[] = {DomainSpec::ellipsoid(1, 2), DomainSpec::concave_toric(Profile::power_law(1.5)),
                                DomainSpec::copies(2, DomainSpec::polydisc(1, 1))};
    for (const auto& x : bases) {
      for (double c : {0.5, 2.0, 3.0}) {
        CapacitySolver plain(x), scaled(DomainSpec::scale(c, x));
        for (std::int64_t k : {0, 1, 7, 100, 1000}) {
          const auto a = plain.bracket(k), b = scaled.bracket(k);
          CHECK(b.lower == c * a.lower);
          CHECK(b.upper == c * a.upper);
        }
      }
    }
  }

  TEST_CASE("c_0 = 0 and sequences are nondecreasing") {
    const DomainSpec specs[] = {DomainSpec::ball(1), DomainSpec::polydisc(1, 2),
                                DomainSpec::concave_toric(Profile::power_law(1.5)),
                                DomainSpec::concave_toric(Profile::power_law(1.25)),
                                DomainSpec::copies(3, DomainSpec::ellipsoid(1, 3))};
    std::vector<std::int64_t> ks(2001);
    for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = static_cast<std::int64_t>(i);
    for (const auto& s : specs) {
      const auto br = cap_sequence(s, ks);
      CHECK(br[0].lower == 0.0);
      CHECK(br[0].upper == 0.0);
      for (std::size_t i = 1; i < br.size(); ++i) {
        REQUIRE(br[i].lower >= br[i - 1].lower);
        REQUIRE(br[i].upper >= br[i - 1].upper);
        REQUIRE(br[i].lower <= br[i].upper);
      }
    }
  }

  TEST_CASE("power-law brackets meet the tolerance") {
    CapacityOptions opt;
    opt.tolerance = 0.01;
    CapacitySolver s(DomainSpec::concave_toric(Profile::power_law(1.5)), opt);
    for (std::int64_t k : {1000, 10000, 100000}) {
      const auto b = s.bracket(k);
      CHECK(b.converged);
      const double e = b.midpoint() - 2.0 * std::sqrt(2.0 * static_cast<double>(k));
      CHECK(b.width() <= 0.01 * std::abs(e));
    }
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(cap_ball(1, -1), DomainError);
    CHECK_THROWS_AS(cap_ball(0, 1), DomainError);
    CHECK_THROWS_AS(cap_ellipsoid(1, -2, 1), DomainError);
    WeightSequence tail = seq_of({1.0});
    tail.tail_volume = 0.1;
    tail.tail_cap = 0.5;
    tail.residues.push_back({0.5, 0.1});
    CHECK_THROWS_AS(cap_union_exact(tail, 3), DomainError);
    CHECK_THROWS_AS(cap_union_exact(seq_of({1.0, 0.5}), 100000), LimitExceeded);
    CapacitySolver mixed(DomainSpec::disjoint_union({DomainSpec::ball(1), DomainSpec::polydisc(1, 1)}));
    CHECK_THROWS_AS(mixed.bracket(30000), LimitExceeded);
  }
}
