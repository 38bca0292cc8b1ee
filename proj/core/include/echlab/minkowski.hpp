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

#include <vector>

#include "echlab/asymptotics.hpp"
#include "echlab/folding.hpp"
#include "echlab/profile.hpp"

namespace echlab {

struct DecaySample {
  double d = 0.0;
  double v = 0.0;
};

// Geometric grid over [lo, hi] with `per_decade` points per factor of ten.
std::vector<double> default_d_grid(double lo = 1e-4, double hi = 1e-1, int per_decade = 16);

// Collar volumes W_d of the toric domain of `profile` (a fibre-distance proxy
// for the inner collar V_d).
std::vector<DecaySample> decay_samples(const Profile& profile, const std::vector<double>& d_grid,
                                       unsigned threads = 0);

struct DimensionEstimate {
  double dimension = 0.0;  // 4 - slope
  FitResult fit;           // ln v against ln d
};

DimensionEstimate inner_dimension(const std::vector<DecaySample>& samples);

// Collar of the fibred folding domain, split into its pieces: the region over
// thin fibres (sqrt f < 2d) and four boundary strips.
struct FoldedDecaySample {
  double d = 0.0;
  double v = 0.0;
  double tail = 0.0;    // x beyond the point where sqrt f = 2d
  double strip_x = 0.0; // x < d
  double strip_y0 = 0.0;  // y < d
  double strip_y1 = 0.0;  // y > 1 - d
  double strip_w = 0.0;   // w within d of the boundary of its square
};

std::vector<FoldedDecaySample> folded_decay(const FoldingParams& params,
                                            const std::vector<double>& d_grid,
                                            unsigned threads = 0);
std::vector<DecaySample> as_samples(const std::vector<FoldedDecaySample>& folded);

}  // namespace echlab
