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

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "echlab/quadrature.hpp"

namespace echlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

// Signed fraction num/den with den > 0. Used for tangent slopes.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Boundary function f of a toric region {0 <= y <= f(x)} in moment-map
// coordinates. Either the power family f(x) = (1+x)^{-p} or a piecewise
// linear function given by exact breakpoints (slopes are always derived from
// the breakpoints, never stored).
//
// Piecewise-linear breakpoints start at x = 0 with y > 0, have nondecreasing x
// and nonincreasing y, and end on the x-axis. Equal consecutive x values encode
// a vertical drop; f is evaluated right-continuously there. Convexity is not
// required by the type (a product square is a valid region) but is checked by
// every operation that needs a concave toric domain.
class Profile {
 public:
  enum class Kind { kPowerLaw, kPiecewiseLinear };

  static Profile power_law(double p);
  static Profile piecewise_linear(std::vector<Point2> points);

  Kind kind() const { return kind_; }
  bool is_power_law() const { return kind_ == Kind::kPowerLaw; }
  double exponent() const;                    // power law only
  const std::vector<Point2>& points() const;  // piecewise linear only

  double value(double x) const;
  double operator()(double x) const { return value(x); }
  double f0() const { return value(0.0); }
  double support_end() const;
  bool is_convex() const;

  // \int_0^x f; x may be +infinity. Throws InfiniteVolumeError if divergent.
  double area_to(double x) const;
  double area() const { return area_to(kInfinity); }
  double area_between(double x0, double x1) const;

  // Largest r >= 0 with f(r) >= level (0 when f(0) < level). +infinity when the
  // level is <= 0 and the support is unbounded.
  double level_crossing(double level) const;

  // Supporting line with normal (a, b), a, b >= 0 not both zero: the minimum of
  // a*x + b*f(x) over the graph, and the smallest x attaining it. For a == 0
  // the minimum is 0, attained at the support end (possibly +infinity).
  double support_value(double a, double b) const;
  double support_point(double a, double b) const;

 private:
  Profile() = default;
  Kind kind_ = Kind::kPowerLaw;
  double p_ = 0.0;
  std::vector<Point2> pts_;
};

// Tangency with slope -1/i; the value f(x) lower-bounds the i-th weight.
struct TangentPoint {
  double x;
  double weight_lower_bound;
};

// nullopt when no point of the graph has derivative exactly -1/i (power law
// with p*i < 1, or a piecewise-linear profile without a segment of that slope).
std::optional<TangentPoint> tangent_triangle(const Profile& profile, std::int64_t inverse_slope);

// Default exhaustion schedule {-m, ..., -2, -1, -1/2, ..., -1/m}.
std::vector<Rational> default_slope_schedule(int level);

// Upper envelope of the supporting lines at the given (negative) slopes,
// clipped to the first quadrant. The region lies inside the original one.
Profile pl_inner_approx(const Profile& profile, const std::vector<Rational>& slopes);

// Volume of the fiber collar W_d: points whose distance to the boundary of
// their own w-fiber disk is below d. Equals the total volume once the whole
// domain is inside the collar.
double volume_decay(const Profile& profile, double d, QuadratureTolerance tol = {});

}  // namespace echlab
