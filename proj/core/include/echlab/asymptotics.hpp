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
#include <utility>
#include <vector>

#include "echlab/capacities.hpp"

namespace echlab {

// Bracket for e_k = c_k - 2 sqrt(vol k), and the truncation e'_k = min(e_k, 0)
// evaluated on the upper edge.
struct SubleadingPoint {
  std::int64_t k = 0;
  double e_lower = 0.0;
  double e_upper = 0.0;
  double e_prime_upper = 0.0;
  bool converged = true;
};

SubleadingPoint to_subleading(const CapacityBracket& bracket, double volume);
SubleadingPoint subleading(const DomainSpec& spec, std::int64_t k, double tolerance = 0.05);
std::vector<SubleadingPoint> subleading_series(CapacitySolver& solver,
                                               const std::vector<std::int64_t>& ks);

// Geometric grid of distinct integers in [k_min, k_max], `per_decade` points
// per factor of ten before rounding.
std::vector<std::int64_t> geometric_k_grid(std::int64_t k_min, std::int64_t k_max,
                                           int per_decade = 24);

struct FitResult {
  double exponent = 0.0;
  double log_coefficient = 0.0;
  double residual_rms = 0.0;
  double k_min = 0.0;
  double k_max = 0.0;
  std::size_t sample_count = 0;
};

struct KRange {
  double lo = 0.0;
  double hi = kInfinity;
  bool contains(double k) const { return k >= lo && k <= hi; }
};

// Least squares of ln(value) against ln(x) for strictly positive values; the
// range filters on x. k_min / k_max of the result hold the abscissa range.
FitResult fit_loglog(const std::vector<std::pair<double, double>>& samples, KRange range = {});

// Least squares of ln(-value) against ln(k) over samples inside the range.
// Every value in range must be strictly negative; at least 8 samples.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& samples, KRange range = {});

enum class BracketEdge { kLower, kUpper, kMidpoint };
FitResult fit_exponent(const std::vector<SubleadingPoint>& points, KRange range,
                       BracketEdge edge = BracketEdge::kMidpoint);

// Allowance added on each side of the hull of the two edge fits. It absorbs
// the finite-window bias of a log-log slope (lower-order terms in e_k) that
// no bracket refinement can remove; see README for the measured offsets.
inline constexpr double kFiniteWindowAllowance = 0.05;

struct ExponentInterval {
  FitResult lower_edge;  // fit to e_lower
  FitResult upper_edge;  // fit to e_upper
  FitResult midpoint;
  double lo = 0.0;
  double hi = 0.0;
  double allowance = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
};

ExponentInterval certified_exponent(const std::vector<SubleadingPoint>& points, KRange range,
                                    double allowance = kFiniteWindowAllowance);

struct EchDimension {
  double value = 2.0;
  bool degenerate = false;    // no negative e'_k in range: the floor value 2
  std::size_t used = 0;       // samples with e'_k < 0
  FitResult fit;
};

// 2 + 4 * (fitted growth exponent of -e'_k); a finite-window estimate.
EchDimension ech_dimension(const std::vector<SubleadingPoint>& points, KRange range = {});

}  // namespace echlab
