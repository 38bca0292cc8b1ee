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

#include "echlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "echlab/errors.hpp"

namespace echlab {

SubleadingPoint to_subleading(const CapacityBracket& bracket, double volume) {
  const double weyl = 2.0 * std::sqrt(volume * static_cast<double>(bracket.k));
  SubleadingPoint pt;
  pt.k = bracket.k;
  pt.e_lower = bracket.lower - weyl;
  pt.e_upper = bracket.upper - weyl;
  pt.e_prime_upper = std::min(pt.e_upper, 0.0);
  pt.converged = bracket.converged;
  return pt;
}

SubleadingPoint subleading(const DomainSpec& spec, std::int64_t k, double tolerance) {
  CapacityOptions opt;
  opt.tolerance = tolerance;
  CapacitySolver solver(spec, opt);
  return to_subleading(solver.bracket(k), solver.volume());
}

std::vector<SubleadingPoint> subleading_series(CapacitySolver& solver,
                                               const std::vector<std::int64_t>& ks) {
  const auto brackets = solver.sequence(ks);
  std::vector<SubleadingPoint> out;
  out.reserve(brackets.size());
  for (const auto& b : brackets) out.push_back(to_subleading(b, solver.volume()));
  return out;
}

std::vector<std::int64_t> geometric_k_grid(std::int64_t k_min, std::int64_t k_max,
                                           int per_decade) {
  if (k_min < 1 || k_max < k_min || per_decade < 1) {
    throw DomainError("geometric grid needs 1 <= k_min <= k_max and per_decade >= 1");
  }
  std::vector<std::int64_t> out;
  const double lo = std::log10(static_cast<double>(k_min));
  const double hi = std::log10(static_cast<double>(k_max));
  const auto steps = static_cast<int>(std::ceil((hi - lo) * per_decade - 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double e = std::min(hi, lo + static_cast<double>(i) / per_decade);
    const auto k = static_cast<std::int64_t>(std::llround(std::pow(10.0, e)));
    if (out.empty() || k != out.back()) out.push_back(std::clamp(k, k_min, k_max));
  }
  if (out.back() != k_max) out.push_back(k_max);
  return out;
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& samples, KRange range) {
  std::vector<std::pair<double, double>> flipped;
  flipped.reserve(samples.size());
  for (const auto& [k, v] : samples) {
    if (!range.contains(k)) continue;
    if (!(v < 0.0)) {
      throw DomainError("fit_exponent: value at k = " + std::to_string(k) +
                        " is not strictly negative");
    }
    flipped.emplace_back(k, -v);
  }
  return fit_loglog(flipped);
}

FitResult fit_loglog(const std::vector<std::pair<double, double>>& samples, KRange range) {
  std::vector<double> lx, ly;
  FitResult out;
  out.k_min = kInfinity;
  out.k_max = -kInfinity;
  for (const auto& [k, v] : samples) {
    if (!range.contains(k)) continue;
    if (!(k > 0.0)) throw DomainError("log-log fit: sample positions must be positive");
    if (!(v > 0.0)) {
      throw DomainError("log-log fit: value at " + std::to_string(k) + " is not positive");
    }
    lx.push_back(std::log(k));
    ly.push_back(std::log(v));
    out.k_min = std::min(out.k_min, k);
    out.k_max = std::max(out.k_max, k);
  }
  const std::size_t n = lx.size();
  if (n < 8) throw DomainError("log-log fit needs at least 8 samples in range");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw DomainError("log-log fit needs at least two distinct abscissae");
  out.exponent = sxy / sxx;
  out.log_coefficient = my - out.exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (out.log_coefficient + out.exponent * lx[i]);
    ss += r * r;
  }
  out.residual_rms = std::sqrt(ss / static_cast<double>(n));
  out.sample_count = n;
  return out;
}

FitResult fit_exponent(const std::vector<SubleadingPoint>& points, KRange range,
                       BracketEdge edge) {
  std::vector<std::pair<double, double>> samples;
  samples.reserve(points.size());
  for (const auto& pt : points) {
    double v = 0.0;
    switch (edge) {
      case BracketEdge::kLower: v = pt.e_lower; break;
      case BracketEdge::kUpper: v = pt.e_upper; break;
      case BracketEdge::kMidpoint: v = 0.5 * (pt.e_lower + pt.e_upper); break;
    }
    samples.emplace_back(static_cast<double>(pt.k), v);
  }
  return fit_exponent(samples, range);
}

ExponentInterval certified_exponent(const std::vector<SubleadingPoint>& points, KRange range,
                                    double allowance) {
  if (allowance < 0.0) throw DomainError("allowance must be >= 0");
  ExponentInterval out;
  out.lower_edge = fit_exponent(points, range, BracketEdge::kLower);
  out.upper_edge = fit_exponent(points, range, BracketEdge::kUpper);
  out.midpoint = fit_exponent(points, range, BracketEdge::kMidpoint);
  out.allowance = allowance;
  out.lo = std::min(out.lower_edge.exponent, out.upper_edge.exponent) - allowance;
  out.hi = std::max(out.lower_edge.exponent, out.upper_edge.exponent) + allowance;
  return out;
}

EchDimension ech_dimension(const std::vector<SubleadingPoint>& points, KRange range) {
  std::vector<std::pair<double, double>> samples;
  for (const auto& pt : points) {
    const auto k = static_cast<double>(pt.k);
    if (range.contains(k) && pt.e_prime_upper < 0.0) samples.emplace_back(k, pt.e_prime_upper);
  }
  EchDimension out;
  out.used = samples.size();
  if (samples.size() < 8) {
    out.degenerate = true;
    out.value = 2.0;
    return out;
  }
  out.fit = fit_exponent(samples);
  out.value = 2.0 + 4.0 * out.fit.exponent;
  return out;
}

}  // namespace echlab
