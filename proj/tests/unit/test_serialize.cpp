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
#include <sstream>

#include "doctest.h"
#include "echlab/errors.hpp"
#include "echlab/serialize.hpp"

using namespace echlab;

TEST_SUITE("serialize") {
  TEST_CASE("doubles round-trip through 17 significant digits") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 10000; ++i) {
      const double x = std::exp(u(rng)) * (i % 2 ? 1 : -1);
      CHECK(parse_double(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(INFINITY) == "inf");
    CHECK(parse_double("inf") == INFINITY);
    CHECK_THROWS_AS(parse_double("1.5x"), DomainError);
    CHECK_THROWS_AS(parse_double(""), DomainError);
    CHECK_THROWS_AS(parse_double("1,5"), DomainError);
  }

  TEST_CASE("inline grammar") {
    CHECK(parse_spec("ball:1").op() == DomainSpec::Op::kBall);
    CHECK(parse_spec("ellipsoid:1:2").b() == 2.0);
    CHECK(parse_spec("polydisc:1:2.5").b() == 2.5);
    CHECK(parse_spec("power:1.5").profile().exponent() == 1.5);
    const auto pl = parse_spec("pl:0,2:1,1:3,0");
    REQUIRE(pl.op() == DomainSpec::Op::kConcaveToric);
    CHECK(pl.profile().points().size() == 3);
    const auto c = parse_spec("copies:3:polydisc:1:1");
    CHECK(c.count() == 3);
    CHECK(c.child().op() == DomainSpec::Op::kPolydisc);
    const auto s = parse_spec("scale:2:copies:2:ball:1");
    CHECK(s.factor() == 2.0);
    const auto u = parse_spec("union(ball:1;pl:0,1:2,0;scale:0.5:power:2)");
    REQUIRE(u.op() == DomainSpec::Op::kDisjointUnion);
    CHECK(u.children().size() == 3);
    CHECK(parse_spec("  ball:1\n").a() == 1.0);
    CHECK(parse_profile("power:2").exponent() == 2.0);
  }

  TEST_CASE("inline grammar errors") {
    CHECK_THROWS_AS(parse_spec("bogus:1"), DomainError);
    CHECK_THROWS_AS(parse_spec("ball"), DomainError);
    CHECK_THROWS_AS(parse_spec("ball:1:2"), DomainError);
    CHECK_THROWS_AS(parse_spec("ball:-1"), DomainError);
    CHECK_THROWS_AS(parse_spec("copies:2.5:ball:1"), DomainError);
    CHECK_THROWS_AS(parse_spec("union(ball:1;ball:2"), DomainError);
    CHECK_THROWS_AS(parse_spec("pl"), DomainError);
    CHECK_THROWS_AS(parse_profile("ball:1"), DomainError);
  }

  TEST_CASE("description round-trips through the parser") {
    const char* cases[] = {"ball:1", "ellipsoid:1:2", "copies:3:polydisc:1:1", "power:1.5", "pl:0,2:1,1:3,0",
                           "scale:0.5:union(ball:1;ellipsoid:2:3)"};
    for (const char* text : cases) CHECK(parse_spec(text).describe() == text);
  }

  TEST_CASE("JSON round-trips") {
    const char* cases[] = {"ball:1", "copies:3:polydisc:1:1", "pl:0,2:1,1:3,0",
                           "scale:0.5:union(ball:1;ellipsoid:2:3;power:1.25)"};
    for (const char* text : cases) {
      const auto spec = parse_spec(text);
      const auto again = parse_spec(to_json(spec));
      CHECK(again.describe() == spec.describe());
    }
    CHECK(parse_profile(R"({"kind":"power","p":1.5})").exponent() == 1.5);
    CHECK(parse_spec(R"({"kind":"pl","points":[[0,1],[2,0]]})").op() == DomainSpec::Op::kConcaveToric);
    CHECK(to_json(Profile::power_law(2.0)) == R"({"kind":"power","p":2.0})");
  }

  TEST_CASE("malformed JSON is a domain error") {
    CHECK_THROWS_AS(parse_spec("{\"op\":\"ball\""), DomainError);
    CHECK_THROWS_AS(parse_spec(R"({"op":"ball"})"), DomainError);
    CHECK_THROWS_AS(parse_spec(R"({"op":"cube","a":1})"), DomainError);
    CHECK_THROWS_AS(parse_spec(R"({"op":"copies","n":1.5,"child":{"op":"ball","a":1}})"), DomainError);
    CHECK_THROWS_AS(parse_profile(R"({"kind":"pl","points":[[0,1],[2]]})"), DomainError);
  }

  TEST_CASE("reports serialise infinities as null") {
    ObstructionReport r{DomainSpec::ball(1.0), DomainSpec::ball(1.0), 1.0, std::nullopt};
    const auto text = to_json(r);
    CHECK(text.find("\"scale_upper\":null") != std::string::npos);
    CHECK(text.find("\"witness_k\":null") != std::string::npos);
  }

  TEST_CASE("CSV tables") {
    CsvTable t({"a", "b"});
    t.row({"1", "x,y"}).row({"q\"uote", CsvTable::cell(0.5)});
    CHECK(t.str() == "a,b\n1,\"x,y\"\n\"q\"\"uote\",0.5\n");
    CHECK_THROWS_AS(t.row({"only one"}), DomainError);
    std::vector<CapacityBracket> br(1);
    br[0].k = 3;
    br[0].lower = br[0].upper = 2.0;
    br[0].exact = true;
    CHECK(to_csv(br).str() == "k,lower,upper,exact,converged\n3,2,2,1,1\n");
  }
}
