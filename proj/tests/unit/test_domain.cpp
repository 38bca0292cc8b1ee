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

#include "doctest.h"
#include "echlab/capacities.hpp"
#include "echlab/domain.hpp"
#include "echlab/errors.hpp"

using namespace echlab;

TEST_SUITE("domain") {
  TEST_CASE("volume examples") {
    CHECK(volume(DomainSpec::ball(1.0)) == 0.5);
    CHECK(volume(DomainSpec::concave_toric(Profile::power_law(2.0))) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(volume(DomainSpec::copies(3, DomainSpec::ball(2.0))) == 6.0);
    CHECK(volume(DomainSpec::ellipsoid(1.0, 3.0)) == 1.5);
    CHECK(volume(DomainSpec::polydisc(2.0, 3.0)) == 6.0);
    CHECK(volume(DomainSpec::disjoint_union({DomainSpec::ball(1.0), DomainSpec::polydisc(1.0, 1.0)})) == 1.5);
    CHECK(volume(DomainSpec::concave_toric(Profile::piecewise_linear({{0, 1}, {3, 0}}))) == 1.5);
  }

  TEST_CASE("volume is homogeneous of degree two under scaling") {
    const DomainSpec specs[] = {DomainSpec::ball(1.0), DomainSpec::ellipsoid(1.0, 2.5),
                                DomainSpec::concave_toric(Profile::power_law(1.5)),
                                DomainSpec::copies(2, DomainSpec::polydisc(1.0, 3.0))};
    for (const auto& s : specs) {
      for (double c : {0.5, 2.0, 3.0, 0.1}) {
        CHECK(volume(DomainSpec::scale(c, s)) == c * c * volume(s));
      }
    }
  }

  TEST_CASE("factory validation") {
    CHECK_THROWS_AS(DomainSpec::ball(0.0), DomainError);
    CHECK_THROWS_AS(DomainSpec::ball(-1.0), DomainError);
    CHECK_THROWS_AS(DomainSpec::ellipsoid(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(DomainSpec::polydisc(-2.0, 1.0), DomainError);
    CHECK_THROWS_AS(DomainSpec::scale(0.0, DomainSpec::ball(1.0)), DomainError);
    CHECK_THROWS_AS(DomainSpec::copies(0, DomainSpec::ball(1.0)), DomainError);
    CHECK_THROWS_AS(DomainSpec::disjoint_union({}), DomainError);
    // A non-convex profile does not bound a concave toric domain.
    CHECK_THROWS_AS(DomainSpec::concave_toric(Profile::piecewise_linear({{0, 4}, {3, 3}, {4, 0}})), DomainError);
    CHECK_THROWS_AS(volume(DomainSpec::concave_toric(Profile::power_law(1.0))), InfiniteVolumeError);
  }

  TEST_CASE("accessors and description") {
    const auto s = DomainSpec::copies(3, DomainSpec::polydisc(1.0, 2.0));
    CHECK(s.op() == DomainSpec::Op::kCopies);
    CHECK(s.count() == 3);
    CHECK(s.child().op() == DomainSpec::Op::kPolydisc);
    CHECK(s.child().b() == 2.0);
    CHECK_FALSE(s.is_leaf());
    CHECK(s.describe() == "copies:3:polydisc:1:2");
    CHECK(DomainSpec::concave_toric(Profile::power_law(1.5)).describe() == "power:1.5");
    CHECK(DomainSpec::disjoint_union({DomainSpec::ball(1), DomainSpec::ellipsoid(1, 2)}).describe() ==
          "union(ball:1;ellipsoid:1:2)");
  }

  TEST_CASE("Ellipsoid(a, a) and Ball(a) give identical capacities") {
    for (double a : {1.0, 2.5, 0.3}) {
      for (std::int64_t k = 0; k <= 3000; ++k) {
        CHECK(cap_spec(DomainSpec::ellipsoid(a, a), k).lower ==
              doctest::Approx(cap_spec(DomainSpec::ball(a), k).lower).epsilon(1e-14));
      }
    }
  }
}
