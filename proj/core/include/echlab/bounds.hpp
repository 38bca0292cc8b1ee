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
#include <vector>

#include "echlab/profile.hpp"

namespace echlab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// A square in the z- or w-plane, [x.lo, x.hi] x [y.lo, y.hi].
struct Square {
  Interval x;
  Interval y;
};

// Open containment of the product of two squares in the toric domain of
// `profile`: with R and S the largest values of pi|z|^2 and pi|w|^2 over the
// two squares, the cube fits iff S < f(R).
bool cube_fits(const Profile& profile, const Square& z, const Square& w);

struct PackingLevel {
  int level = 0;           // cubes have side 2^-level
  std::int64_t count = 0;  // cubes added at this level
  double side_area = 0.0;  // a = 4^-level, each cube being symplectically P(a, a)
  double cube_volume = 0.0;
};

// Greedy dyadic packing: a cube of level n is kept iff it fits and meets no
// cube kept at a coarser level. Every count is a multiple of 16 because the
// toric domain is invariant under the sign changes of the four coordinates.
struct CubePacking {
  std::vector<PackingLevel> levels;
  double packed_volume() const;
};

// Counts only (no cube list); max_level <= 8.
CubePacking dyadic_packing(const Profile& profile, int max_level);

// Explicit list of kept cubes by direct 4D enumeration, for small levels.
// Intended as an independent check of dyadic_packing; throws LimitExceeded
// beyond `max_cubes`.
struct Cube {
  int level;
  std::int64_t i, j, k, l;  // lower corner in units of 2^-level
};
std::vector<Cube> enumerate_packing(const Profile& profile, int max_level,
                                    std::int64_t max_cubes = 2000000);

// Lower bound for e_k from a packing by cubes P(a_i, a_i):
// -2 sqrt(2) sum_{I_k} a_i + 2 (V_k - vol) sqrt(k) / sqrt(vol), with I_k the
// cubes of volume at least vol / k and V_k their total volume.
double hutchings_lower_bound(const CubePacking& packing, double volume, std::int64_t k);

// -C k^{(2 - q) / 4}.
double decay_lower_curve(double q, double c, std::int64_t k);

}  // namespace echlab
