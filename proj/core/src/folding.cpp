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

#include "echlab/folding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "echlab/errors.hpp"

namespace echlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kNodes = 10000;
constexpr double kLastX = 1e16;  // cached range of the cumulative integrals

// Integrals over x are taken in t = ln(1 + x), where every integrand here is
// smooth and slowly varying.
std::vector<double> t_nodes() {
  const double t_max = std::log1p(kLastX);
  std::vector<double> nodes;
  nodes.reserve(kNodes + 2);
  for (int i = 0; i <= kNodes; ++i) nodes.push_back(t_max * i / kNodes);
  // chi' has a corner at x = 1; keep it on a node.
  const double corner = std::log(2.0);
  nodes.insert(std::upper_bound(nodes.begin(), nodes.end(), corner), corner);
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

}  // namespace

struct FoldingModel::Impl {
  FoldingParams params;
  double vol = 0.0;
  // S(t) = int_0^{e^t - 1} sqrt f, so chi(x) = 1 + S(ln x) for x >= 1.
  CumulativeIntegral sqrt_f;
  // H(t) = int_0^{e^t - 1} sqrt f(y) chi'(y) dy, so sigma(u) = 1 + delta + H.
  CumulativeIntegral sigma_part;

  double sqrt_f_at(double x) const { return std::sqrt(params.profile.value(x)); }

  double chi(double x) const {
    if (x <= 1.0) return x;
    return 1.0 + sqrt_f(std::log(x));
  }
  double chi_prime(double x) const { return x <= 1.0 ? 1.0 : sqrt_f_at(x - 1.0); }

  double chi_inverse(double value) const {
    if (value <= 1.0) return value;
    const double target = value - 1.0;
    // Solve S(t) = target; S is increasing with S'(t) = sqrt f(e^t - 1) e^t.
    double lo = 0.0;
    double hi = std::max(1.0, sqrt_f.last_node());
    while (sqrt_f(hi) < target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e4) throw DomainError("chi_inverse: value beyond the range of chi");
    }
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      const double s = sqrt_f(t);
      const double err = s - target;
      if (err > 0.0) hi = t; else lo = t;
      const double slope = sqrt_f_at(std::expm1(t)) * std::exp(t);
      double next = t - err / slope;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) <= 1e-15 * std::max(1.0, t) || hi - lo <= 1e-15 * std::max(1.0, t)) {
        t = next;
        break;
      }
      t = next;
    }
    return std::exp(t);  // x = 1 + (e^t - 1)
  }

  double sigma(double u) const {
    const double delta = params.delta;
    if (u <= 0.5) return u + 0.5 + delta;
    const double y = chi_inverse(u - 0.5);
    return 1.0 + delta + sigma_part(std::log1p(y));
  }

  bool contains(const PhasePoint& p) const {
    if (!(p.x > 0.0) || !(p.y > 0.0) || !(p.y < 1.0)) return false;
    const double half = 0.5 * sqrt_f_at(p.x);
    return std::abs(p.u) < half && std::abs(p.v) < half;
  }

  PhasePoint psi_raw(const PhasePoint& p) const {
    // Psi^w moves the fibre along u; Psi^z compensates in y. With the shear
    // sign (1/2 - v) the pair preserves dx^dy + du^dv.
    return {p.x, p.y + (0.5 - p.v) * chi_prime(p.x), p.u + chi(p.x), p.v};
  }

  std::pair<double, double> radii(const PhasePoint& q) const {
    return {q.y + params.delta, sigma(q.u) + q.v + 0.5};
  }

  PhasePoint xi_raw(const PhasePoint& q) const {
    const auto [r1, r2] = radii(q);
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw DomainError("xi: nonpositive polar radius");
    auto polar = [](double r, double theta) {
      theta -= std::floor(theta);  // theta in [0, 1)
      const double rho = std::sqrt(r / kPi);
      return std::pair{rho * std::cos(2.0 * kPi * theta), rho * std::sin(2.0 * kPi * theta)};
    };
    const auto [zx, zy] = polar(r1, -q.x);
    const auto [wx, wy] = polar(r2, -q.u);
    return {zx, zy, wx, wy};
  }
};

FoldingModel::FoldingModel(FoldingParams params) : impl_(std::make_unique<Impl>()) {
  if (!params.profile.is_power_law()) throw DomainError("folding model needs a power-law profile");
  if (params.profile.exponent() <= 1.0) throw DomainError("folding model needs p > 1");
  if (!(params.delta > 0.0)) throw DomainError("folding model needs delta > 0");
  impl_->params = params;
  impl_->vol = params.profile.area();
  const Profile prof = params.profile;
  const auto nodes = t_nodes();
  impl_->sqrt_f = CumulativeIntegral(
      [prof](double t) {
        const double x = std::expm1(t);
        return std::sqrt(prof.value(x)) * std::exp(t);
      },
      nodes, params.tol);
  impl_->sigma_part = CumulativeIntegral(
      [prof](double t) {
        const double y = std::expm1(t);
        const double cp = y <= 1.0 ? 1.0 : std::sqrt(prof.value(y - 1.0));
        return std::sqrt(prof.value(y)) * cp * std::exp(t);
      },
      nodes, params.tol);
}

FoldingModel::~FoldingModel() = default;
FoldingModel::FoldingModel(FoldingModel&&) noexcept = default;
FoldingModel& FoldingModel::operator=(FoldingModel&&) noexcept = default;

const FoldingParams& FoldingModel::params() const { return impl_->params; }
double FoldingModel::volume() const { return impl_->vol; }
double FoldingModel::chi(double x) const {
  if (x < 0.0) throw DomainError("chi needs x >= 0");
  return impl_->chi(x);
}
double FoldingModel::chi_prime(double x) const {
  if (x < 0.0) throw DomainError("chi' needs x >= 0");
  return impl_->chi_prime(x);
}
double FoldingModel::chi_inverse(double value) const {
  if (value < 0.0) throw DomainError("chi_inverse needs a value >= 0");
  return impl_->chi_inverse(value);
}
double FoldingModel::sigma(double u) const { return impl_->sigma(u); }

std::pair<double, double> FoldingModel::sigma_limit() const {
  // Past the last cached point Y the integrand sqrt(f(y) f(y-1)) lies between
  // f(y) and f(y-1), which have closed-form tails.
  const double t_last = impl_->sigma_part.last_node();
  const double y_last = std::expm1(t_last);
  const double base = 1.0 + impl_->params.delta + impl_->sigma_part.total();
  const Profile& f = impl_->params.profile;
  return {base + f.area_between(y_last, kInfinity), base + f.area_between(y_last - 1.0, kInfinity)};
}

bool FoldingModel::contains(const PhasePoint& pt) const { return impl_->contains(pt); }

PhasePoint FoldingModel::psi(const PhasePoint& pt) const {
  if (!impl_->contains(pt)) throw DomainError("psi: point outside the fibred domain");
  return impl_->psi_raw(pt);
}

PhasePoint FoldingModel::xi(const PhasePoint& pt) const { return impl_->xi_raw(pt); }

std::pair<double, double> FoldingModel::xi_radii(const PhasePoint& pt) const {
  return impl_->radii(pt);
}

namespace {

template <class F>
Matrix4 five_point_jacobian(const F& map, const PhasePoint& p, double h) {
  Matrix4 j{};
  for (int c = 0; c < 4; ++c) {
    auto shifted = [&](double s) {
      PhasePoint q = p;
      double* coords[4] = {&q.x, &q.y, &q.u, &q.v};
      *coords[c] += s * h;
      const PhasePoint r = map(q);
      return std::array<double, 4>{r.x, r.y, r.u, r.v};
    };
    const auto m2 = shifted(-2.0), m1 = shifted(-1.0), p1 = shifted(1.0), p2 = shifted(2.0);
    for (int r = 0; r < 4; ++r) {
      j[r][c] = (m2[r] - 8.0 * m1[r] + 8.0 * p1[r] - p2[r]) / (12.0 * h);
    }
  }
  return j;
}

}  // namespace

Matrix4 FoldingModel::jacobian_psi(const PhasePoint& pt, double h) const {
  return five_point_jacobian([this](const PhasePoint& q) { return impl_->psi_raw(q); }, pt, h);
}

Matrix4 FoldingModel::jacobian_xi(const PhasePoint& pt, double h) const {
  return five_point_jacobian([this](const PhasePoint& q) { return impl_->xi_raw(q); }, pt, h);
}

PhasePoint FoldingModel::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double p = impl_->params.profile.exponent();
  // Inverse of the normalised area function for f = (1+x)^-p.
  double uu = unit(rng);
  const double x = std::pow(1.0 - uu, 1.0 / (1.0 - p)) - 1.0;
  PhasePoint pt;
  pt.x = x > 0.0 ? x : std::numeric_limits<double>::min();
  do {
    pt.y = unit(rng);
  } while (pt.y <= 0.0);
  const double side = impl_->sqrt_f_at(pt.x);
  pt.u = (unit(rng) - 0.5) * side;
  pt.v = (unit(rng) - 0.5) * side;
  return pt;
}

SymplecticDefect symplectic_defect(const Matrix4& j) {
  // Omega for coordinates (x, y, u, v) and the form dx^dy + du^dv.
  const Matrix4 omega{{{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}}};
  SymplecticDefect out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double s = 0.0;
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) s += j[r][a] * omega[r][c] * j[c][b];
      }
      out.max_entry_error = std::max(out.max_entry_error, std::abs(s - omega[a][b]));
    }
  }
  // Determinant by Gaussian elimination with partial pivoting.
  Matrix4 m = j;
  double det = 1.0;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    }
    if (m[piv][c] == 0.0) {
      det = 0.0;
      break;
    }
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < 4; ++r) {
      const double factor = m[r][c] / m[c][c];
      for (int k = c; k < 4; ++k) m[r][k] -= factor * m[c][k];
    }
  }
  out.det_error = std::abs(det - 1.0);
  return out;
}

InjectivityReport injectivity_probe(const FoldingModel& model, std::int64_t sample_count,
                                    std::uint64_t seed) {
  if (sample_count < 0) throw DomainError("sample_count must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> shift(1, 4);
  InjectivityReport report;
  std::int64_t attempts = 0;
  while (report.pairs < sample_count && attempts < 64 * std::max<std::int64_t>(sample_count, 1)) {
    ++attempts;
    const PhasePoint a = model.sample(rng);
    PhasePoint b;
    b.x = a.x + shift(rng);
    const double side = std::sqrt(model.params().profile.value(b.x));
    b.u = (unit(rng) - 0.5) * side;
    b.v = (unit(rng) - 0.5) * side;
    // Same z-image: equal radius y + (1/2 - v) chi'(x), angle differs by n.
    b.y = a.y + (0.5 - a.v) * model.chi_prime(a.x) - (0.5 - b.v) * model.chi_prime(b.x);
    if (!model.contains(b)) continue;
    const PhasePoint ea = model.embed(a);
    const PhasePoint eb = model.embed(b);
    const double sep = std::hypot(std::hypot(ea.x - eb.x, ea.y - eb.y), std::hypot(ea.u - eb.u, ea.v - eb.v));
    ++report.pairs;
    report.min_separation = std::min(report.min_separation, sep);
    if (sep < 1e-12) ++report.collisions;
  }
  return report;
}

bool FoldingCheckReport::passes(double jacobian_tolerance) const {
  return psi.max_entry_error <= jacobian_tolerance && xi.max_entry_error <= jacobian_tolerance &&
         psi.det_error <= jacobian_tolerance && xi.det_error <= jacobian_tolerance && outside == 0 &&
         sigma_limit.second < w_disc && injectivity.collisions == 0;
}

FoldingCheckReport check_folding(const FoldingModel& model, const FoldingCheckConfig& config) {
  if (config.jacobian_points < 0 || config.containment_points < 0 || config.injectivity_pairs < 0) {
    throw DomainError("folding check sample counts must be >= 0");
  }
  const auto& fp = model.params();
  FoldingCheckReport rep;
  rep.z_disc = 2.0 + 2.0 * fp.delta;
  rep.w_disc = model.volume() + 2.0;
  std::mt19937_64 rng(config.seed);

  auto worst = [](SymplecticDefect& acc, const SymplecticDefect& d) {
    acc.max_entry_error = std::max(acc.max_entry_error, d.max_entry_error);
    acc.det_error = std::max(acc.det_error, d.det_error);
  };
  constexpr double h = 1e-3;
  while (rep.jacobian_points < config.jacobian_points) {
    const PhasePoint pt = model.sample(rng);
    if (pt.x > 1e3 || std::abs(pt.x - 1.0) < 10 * h || pt.y < 3 * h || pt.y > 1 - 3 * h) continue;
    const double half = 0.5 * std::sqrt(fp.profile.value(pt.x));
    if (half - std::max(std::abs(pt.u), std::abs(pt.v)) < 3 * h * std::max(1.0, half)) continue;
    const PhasePoint q = model.psi(pt);
    const auto [r1, r2] = model.xi_radii(q);
    const double hx = 1e-3 * std::min(1.0, std::min(r1, r2));
    if (std::abs(q.u - 0.5) < 10 * hx || std::abs(q.u - 1.5) < 10 * hx) continue;
    worst(rep.psi, symplectic_defect(model.jacobian_psi(pt, h)));
    worst(rep.xi, symplectic_defect(model.jacobian_xi(q, hx)));
    ++rep.jacobian_points;
  }

  for (; rep.containment_points < config.containment_points; ++rep.containment_points) {
    const auto [r1, r2] = model.xi_radii(model.psi(model.sample(rng)));
    rep.r1_max = std::max(rep.r1_max, r1);
    rep.r2_max = std::max(rep.r2_max, r2);
    if (!(r1 < rep.z_disc) || !(r2 < rep.w_disc)) ++rep.outside;
  }
  rep.sigma_limit = model.sigma_limit();
  rep.injectivity = injectivity_probe(model, config.injectivity_pairs, config.seed);
  return rep;
}

}  // namespace echlab
