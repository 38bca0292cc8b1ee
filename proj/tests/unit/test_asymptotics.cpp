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
#include <random>

#include "doctest.h"
#include "echlab/asymptotics.hpp"
#include "echlab/errors.hpp"
#include "oracles.hpp"

using namespace echlab;

TEST_SUITE("asymptotics") {
  TEST_CASE("ball subleading term against the triangular count") {
    CapacitySolver s(DomainSpec::ball(1.0));
    std::vector<std::int64_t> ks(5001);
    for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = static_cast<std::int64_t>(i);
    const auto pts = subleading_series(s, ks);
    for (const auto& p : pts) {
      const double e = oracle::ball(1.0, p.k) - std::sqrt(2.0 * static_cast<double>(p.k));
      REQUIRE(p.e_lower == doctest::Approx(e).epsilon(1e-12));
      REQUIRE(p.e_upper == doctest::Approx(e).epsilon(1e-12));
      REQUIRE(p.e_prime_upper == doctest::Approx(std::min(e, 0.0)).epsilon(1e-12));
    }
    // At k = d(d+3)/2 the capacity is d while sqrt(2k) = sqrt(d(d+3)) > d.
    for (std::int64_t d = 1; d <= 60; ++d) CHECK(pts[static_cast<std::size_t>(d * (d + 3) / 2)].e_upper < 0.0);
  }

  TEST_CASE("geometric grid") {
    const auto g = geometric_k_grid(1000, 100000, 24);
    CHECK(g.front() == 1000);
    CHECK(g.back() == 100000);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK(g.size() >= 45);
    CHECK(g.size() <= 49);
    CHECK(geometric_k_grid(5, 5).size() == 1);
    CHECK_THROWS_AS(geometric_k_grid(10, 5), DomainError);
  }

  TEST_CASE("fits recover synthetic power laws") {
    std::vector<std::pair<double, double>> neg, pos;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
    for (double k = 100; k <= 1e5; k *= 1.2) {
      neg.emplace_back(k, -3.0 * std::pow(k, 0.3) * std::exp(jitter(rng)));
      pos.emplace_back(k, 2.0 * std::pow(k, -1.5));
    }
    const auto fe = fit_exponent(neg);
    CHECK(fe.exponent == doctest::Approx(0.3).epsilon(1e-2));
    CHECK(std::exp(fe.log_coefficient) == doctest::Approx(3.0).epsilon(2e-2));
    CHECK(fe.residual_rms < 2e-3);
    const auto fl = fit_loglog(pos);
    CHECK(fl.exponent == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(fl.exponent == doctest::Approx(oracle::loglog_slope(pos)).epsilon(1e-12));
    const auto ranged = fit_loglog(pos, {1000, 10000});
    CHECK(ranged.k_min >= 1000);
    CHECK(ranged.k_max <= 10000);
    std::vector<std::pair<double, double>> bad = neg;
    bad[3].second = 0.5;
    CHECK_THROWS_AS(fit_exponent(bad), DomainError);
    CHECK_THROWS_AS(fit_exponent({neg.begin(), neg.begin() + 4}), DomainError);
  }

  TEST_CASE("power-law profile: exponent near 1/3 and dimension near 10/3") {
    CapacityOptions opt;
    opt.tolerance = 0.01;
    CapacitySolver s(DomainSpec::concave_toric(Profile::power_law(1.5)), opt);
    const auto pts = subleading_series(s, geometric_k_grid(1000, 100000, 24));
    for (const auto& p : pts) {
      CHECK(p.converged);
      CHECK(p.e_lower <= p.e_upper);
      CHECK(p.e_upper < 0.0);
    }
    const auto iv = certified_exponent(pts, {});
    CHECK(iv.contains(1.0 / 3.0));
    CHECK(iv.width() <= 0.14);
    CHECK(iv.midpoint.exponent == doctest::Approx(1.0 / 3.0).epsilon(0.21));  // +-0.07
    const auto dim = ech_dimension(pts);
    CHECK_FALSE(dim.degenerate);
    CHECK(dim.value == doctest::Approx(10.0 / 3.0).epsilon(0.09));  // +-0.3
  }

  TEST_CASE("growth exponent identity") {
    // For the power law p, the exponent of -e_k is 1/(2p); as a decay rate q
    // this reads (2 - q)/4 with q = 2 - 2/p.
    for (double p : {1.25, 1.5, 2.0, 3.0}) {
      const double q = 2.0 - 2.0 / p;
      CHECK((2.0 - q) / 4.0 == doctest::Approx(1.0 / (2.0 * p)));
    }
  }

  TEST_CASE("polydisc dimension stays near 2") {
    CapacitySolver s(DomainSpec::polydisc(1, 1));
    const auto pts = subleading_series(s, geometric_k_grid(100, 100000, 24));
    double min_e = 0.0;
    for (const auto& p : pts) min_e = std::min(min_e, p.e_lower);
    CHECK(min_e >= -2.0 - 1e-9);
    const auto dim = ech_dimension(pts);
    CHECK((dim.degenerate || dim.value <= 2.2));
  }

  TEST_CASE("subleading term stays bounded for ball unions") {
    CapacitySolver s(DomainSpec::copies(3, DomainSpec::ball(1)));
    std::vector<std::int64_t> ks(3001);
    for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = static_cast<std::int64_t>(i);
    for (const auto& p : subleading_series(s, ks)) REQUIRE(p.e_lower >= -4.5);
  }

  TEST_CASE("degenerate dimension when nothing is negative") {
    std::vector<SubleadingPoint> pts;
    for (std::int64_t k = 10; k < 30; ++k) pts.push_back({k, 0.5, 1.0, 0.0, true});
    const auto dim = ech_dimension(pts);
    CHECK(dim.degenerate);
    CHECK(dim.value == 2.0);
  }

  TEST_CASE("to_subleading uses the volume") {
    CapacityBracket b;
    b.k = 8;
    b.lower = 3.0;
    b.upper = 5.0;
    const auto p = to_subleading(b, 0.5);
    CHECK(p.e_lower == doctest::Approx(-1.0));
    CHECK(p.e_upper == doctest::Approx(1.0));
    CHECK(p.e_prime_upper == 0.0);
  }
}
