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

#include "echlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "echlab/errors.hpp"

namespace echlab {
namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const std::function<double(double)>& f, const Panel& p, double abs_tol,
              const QuadratureTolerance& tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.fa, flm, p.m, p.fm);
  const double right = simpson(p.m, p.fm, frm, p.b, p.fb);
  const double sum = left + right;
  const double err = sum - p.whole;
  const double bound = std::max(abs_tol, tol.relative * std::abs(sum));
  if (depth >= tol.max_depth || std::abs(err) <= 15.0 * bound || p.b - p.a <= 0.0) {
    return sum + err / 15.0;
  }
  return refine(f, {p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * abs_tol, tol, depth + 1) +
         refine(f, {p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * abs_tol, tol, depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        QuadratureTolerance tol) {
  if (a == b) return 0.0;
  if (a > b) return -adaptive_simpson(f, b, a, tol);
  const double fa = f(a), fb = f(b);
  // Pre-split into a few panels so that a symmetric integrand cannot fool the
  // first error estimate.
  constexpr int kInitial = 8;
  const double h = (b - a) / kInitial;
  double total = 0.0;
  for (int i = 0; i < kInitial; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == kInitial) ? b : a + (i + 1) * h;
    const double mid = 0.5 * (lo + hi);
    const double flo = (i == 0) ? fa : f(lo);
    const double fhi = (i + 1 == kInitial) ? fb : f(hi);
    const double fmid = f(mid);
    total += refine(f, {lo, flo, mid, fmid, hi, fhi, simpson(lo, flo, fmid, hi, fhi)},
                    tol.absolute / kInitial, tol, 0);
  }
  return total;
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> integrand,
                                       std::vector<double> nodes, QuadratureTolerance tol)
    : integrand_(std::move(integrand)), nodes_(std::move(nodes)), tol_(tol) {
  if (nodes_.empty()) throw DomainError("CumulativeIntegral: empty node set");
  if (!std::is_sorted(nodes_.begin(), nodes_.end()) ||
      std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw DomainError("CumulativeIntegral: nodes must be strictly increasing");
  }
  values_.resize(nodes_.size());
  values_[0] = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    values_[i] = values_[i - 1] + adaptive_simpson(integrand_, nodes_[i - 1], nodes_[i], tol_);
  }
}

double CumulativeIntegral::operator()(double x) const {
  if (x <= nodes_.front()) return -adaptive_simpson(integrand_, x, nodes_.front(), tol_);
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  if (nodes_[i] == x) return values_[i];
  return values_[i] + adaptive_simpson(integrand_, nodes_[i], x, tol_);
}

std::vector<double> geometric_nodes(double origin, double first_step, double span, int count) {
  if (count < 2 || first_step <= 0.0 || span <= first_step) {
    throw DomainError("geometric_nodes: need count >= 2 and 0 < first_step < span");
  }
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(count) + 1);
  nodes.push_back(origin);
  const double ratio = std::pow(span / first_step, 1.0 / (count - 1));
  double step = first_step;
  for (int i = 0; i < count; ++i) {
    nodes.push_back(origin + step);
    step *= ratio;
  }
  return nodes;
}

}  // namespace echlab
