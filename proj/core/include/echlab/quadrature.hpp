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

#include <functional>
#include <vector>

namespace echlab {

struct QuadratureTolerance {
  double absolute = 1e-12;
  double relative = 1e-10;
  int max_depth = 60;
};

// Adaptive Simpson rule with interval bisection. The error estimate of each
// panel is compared against max(absolute, relative * |panel estimate|), and
// the Richardson correction is applied on acceptance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        QuadratureTolerance tol = {});

// Cumulative integral F(x) = \int_{origin}^{x} g, cached at a fixed set of
// nodes. Evaluation integrates locally from the nearest node at or below x,
// so the result stays accurate to the quadrature tolerance everywhere
// (no interpolation error).
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  // Nodes must be strictly increasing and start at the integration origin.
  CumulativeIntegral(std::function<double(double)> integrand, std::vector<double> nodes,
                     QuadratureTolerance tol = {});

  double operator()(double x) const;
  double origin() const { return nodes_.front(); }
  double last_node() const { return nodes_.back(); }
  double total() const { return values_.back(); }

 private:
  std::function<double(double)> integrand_;
  std::vector<double> nodes_;
  std::vector<double> values_;
  QuadratureTolerance tol_;
};

// Geometric node set origin, origin + h*r^0, ..., up to origin + span.
std::vector<double> geometric_nodes(double origin, double first_step, double span, int count);

}  // namespace echlab
