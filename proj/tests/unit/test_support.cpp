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

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "doctest.h"
#include "echlab/errors.hpp"
#include "echlab/parallel.hpp"
#include "echlab/quadrature.hpp"
#include "oracles.hpp"

using namespace echlab;

TEST_SUITE("parallel") {
  TEST_CASE("every index runs once and results land by index") {
    for (unsigned threads : {1u, 2u, 7u}) {
      std::vector<std::atomic<int>> hits(1000);
      parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i].fetch_add(1); });
      for (const auto& h : hits) REQUIRE(h.load() == 1);
      const auto sq = parallel_map<std::size_t>(1000, threads, [](std::size_t i) { return i * i; });
      for (std::size_t i = 0; i < sq.size(); ++i) REQUIRE(sq[i] == i * i);
    }
    parallel_for(0, 4, [](std::size_t) { FAIL("no items expected"); });
  }

  TEST_CASE("the lowest failing index is rethrown") {
    try {
      parallel_for(100, 4, [](std::size_t i) {
        if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "17");
    }
  }

  TEST_CASE("thread count from the environment") {
    setenv("ECH_LAB_THREADS", "3", 1);
    CHECK(default_thread_count() == 3);
    unsetenv("ECH_LAB_THREADS");
    CHECK(default_thread_count() >= 1);
  }
}

TEST_SUITE("quadrature") {
  TEST_CASE("adaptive Simpson on smooth and peaked integrands") {
    CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(adaptive_simpson([](double x) { return std::exp(-x * x); }, -8.0, 8.0) ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
    const auto peaked = [](double x) { return 1.0 / (1e-4 + x * x); };
    CHECK(adaptive_simpson(peaked, -1.0, 1.0) == doctest::Approx(2.0 * std::atan(1.0 / 1e-2) / 1e-2).epsilon(1e-8));
    CHECK(adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0) ==
          doctest::Approx(oracle::simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0)).epsilon(1e-6));
    CHECK(adaptive_simpson([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
  }

  TEST_CASE("cumulative integral is exact between nodes") {
    const auto nodes = geometric_nodes(0.0, 1e-3, 50.0, 40);
    REQUIRE(nodes.front() == 0.0);
    CHECK(nodes.back() == doctest::Approx(50.0));
    for (std::size_t i = 1; i < nodes.size(); ++i) CHECK(nodes[i] > nodes[i - 1]);
    const CumulativeIntegral F([](double x) { return std::exp(-x); }, nodes);
    for (double x : {0.0, 1e-4, 0.3, 2.7183, 17.0, 49.9}) CHECK(F(x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-10));
    CHECK(F.total() == doctest::Approx(1.0 - std::exp(-50.0)).epsilon(1e-10));
    CHECK(F.origin() == 0.0);
  }
}
