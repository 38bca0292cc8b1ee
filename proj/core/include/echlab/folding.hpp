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

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <utility>

#include "echlab/profile.hpp"
#include "echlab/quadrature.hpp"

namespace echlab {

struct FoldingParams {
  Profile profile = Profile::power_law(2.0);  // power law, f(0) = 1
  double delta = 0.01;
  QuadratureTolerance tol{};
};

// Phase-space point, z = x + iy and w = u + iv.
struct PhasePoint {
  double x = 0.0;
  double y = 0.0;
  double u = 0.0;
  double v = 0.0;
};

using Matrix4 = std::array<std::array<double, 4>, 4>;

struct SymplecticDefect {
  double max_entry_error = 0.0;  // max |J^T Omega J - Omega|
  double det_error = 0.0;        // |det J - 1|
};

struct InjectivityReport {
  std::int64_t pairs = 0;
  std::int64_t collisions = 0;
  double min_separation = kInfinity;
};

// The fibred model of the folding embedding: the domain is
//   { x > 0, 0 < y < 1, |u|, |v| < sqrt(f(x)) / 2 },
// Psi shifts the w-fibre over x by chi(x) along u and shears y so that the
// composite stays symplectic for dx^dy + du^dv, and Xi wraps both planes into
// discs through polar coordinates (R, theta) = (pi |.|^2, angle / 2 pi).
class FoldingModel {
 public:
  explicit FoldingModel(FoldingParams params);
  ~FoldingModel();
  FoldingModel(FoldingModel&&) noexcept;
  FoldingModel& operator=(FoldingModel&&) noexcept;

  const FoldingParams& params() const;
  double volume() const;  // integral of f

  double chi(double x) const;
  double chi_prime(double x) const;
  double chi_inverse(double value) const;
  double sigma(double u) const;
  // Bracket for lim sigma(u) as u -> infinity.
  std::pair<double, double> sigma_limit() const;

  bool contains(const PhasePoint& pt) const;
  PhasePoint psi(const PhasePoint& pt) const;  // throws outside the domain
  // Cartesian coordinates of the two polar maps applied to a point of Psi's
  // image; (x, y) carry the z-disc and (u, v) the w-disc.
  PhasePoint xi(const PhasePoint& pt) const;
  PhasePoint embed(const PhasePoint& pt) const { return xi(psi(pt)); }
  // Polar radii pi|z|^2 and pi|w|^2 of xi(pt).
  std::pair<double, double> xi_radii(const PhasePoint& pt) const;

  // Central five-point Jacobians with step h.
  Matrix4 jacobian_psi(const PhasePoint& pt, double h) const;
  Matrix4 jacobian_xi(const PhasePoint& pt, double h) const;

  // Samples the domain with density proportional to volume.
  PhasePoint sample(std::mt19937_64& rng) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SymplecticDefect symplectic_defect(const Matrix4& j);

// Random pairs (p, p') with x' = x + n, n a positive integer, and y' chosen
// so that both points have the same z-image; reports how close the full
// images come. A collision is a separation below 1e-12.
InjectivityReport injectivity_probe(const FoldingModel& model, std::int64_t sample_count,
                                    std::uint64_t seed);

struct FoldingCheckConfig {
  std::int64_t jacobian_points = 10000;
  std::int64_t containment_points = 100000;
  std::int64_t injectivity_pairs = 100000;
  std::uint64_t seed = 1;
};

// Seeded numerical audit of the embedding. Jacobian samples avoid the kinks
// of chi (x = 1) and of the angular wrap (u' = 1/2, 3/2), stay a few steps away
// from the boundary and are limited to x <= 1e3, where finite differences
// still resolve the fibre.
struct FoldingCheckReport {
  std::int64_t jacobian_points = 0;
  SymplecticDefect psi;  // worst entries over the samples
  SymplecticDefect xi;
  std::int64_t containment_points = 0;
  std::int64_t outside = 0;  // images not inside D(z_disc) x D(w_disc)
  double r1_max = 0.0;
  double r2_max = 0.0;
  double z_disc = 0.0;  // 2 + 2 delta
  double w_disc = 0.0;  // V + 2
  std::pair<double, double> sigma_limit;
  InjectivityReport injectivity;

  bool passes(double jacobian_tolerance) const;
};

FoldingCheckReport check_folding(const FoldingModel& model, const FoldingCheckConfig& config);

}  // namespace echlab
