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

#include "echlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "echlab/errors.hpp"

namespace echlab {
namespace {

constexpr double kPi = std::numbers::pi;

// \int_0^x (1+t)^{-p} dt for finite x.
double power_area_to(double p, double x) {
  if (p == 1.0) return std::log1p(x);
  return -std::expm1((1.0 - p) * std::log1p(x)) / (p - 1.0);
}

// \int over a segment from (x0, y0) to (x1, y1) of sqrt(y), y linear.
double sqrt_linear_integral(double x0, double y0, double x1, double y1) {
  const double w = x1 - x0;
  if (w <= 0.0) return 0.0;
  const double s0 = std::sqrt(std::max(y0, 0.0));
  const double s1 = std::sqrt(std::max(y1, 0.0));
  // (2/3) w (y1^{3/2} - y0^{3/2}) / (y1 - y0), written to stay stable as y1 -> y0.
  const double denom = s0 + s1;
  if (denom == 0.0) return 0.0;
  return (2.0 / 3.0) * w * (s0 * s0 + s0 * s1 + s1 * s1) / denom;
}

}  // namespace

Profile Profile::power_law(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw DomainError("power-law profile needs a finite exponent p > 0, got " + std::to_string(p));
  }
  Profile prof;
  prof.kind_ = Kind::kPowerLaw;
  prof.p_ = p;
  return prof;
}

Profile Profile::piecewise_linear(std::vector<Point2> points) {
  if (points.size() < 2) throw DomainError("piecewise-linear profile needs at least two points");
  for (const auto& pt : points) {
    if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) {
      throw DomainError("piecewise-linear profile has a non-finite coordinate");
    }
  }
  if (points.front().x != 0.0) throw DomainError("piecewise-linear profile must start at x = 0");
  if (!(points.front().y > 0.0)) throw DomainError("piecewise-linear profile needs f(0) > 0");
  if (points.back().y != 0.0) throw DomainError("piecewise-linear profile must end on the x-axis");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].x < points[i - 1].x) {
      throw DomainError("piecewise-linear breakpoints must have nondecreasing x");
    }
    if (points[i].y > points[i - 1].y) {
      throw DomainError("piecewise-linear profile must be nonincreasing");
    }
  }
  if (points[1].x == 0.0) throw DomainError("piecewise-linear profile has a vertical edge at x = 0");
  // Drop exact duplicates; they carry no information.
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.back().x <= 0.0) throw DomainError("piecewise-linear profile has empty support");
  Profile prof;
  prof.kind_ = Kind::kPiecewiseLinear;
  prof.pts_ = std::move(points);
  return prof;
}

double Profile::exponent() const {
  if (kind_ != Kind::kPowerLaw) throw DomainError("exponent() requires a power-law profile");
  return p_;
}

const std::vector<Point2>& Profile::points() const {
  if (kind_ != Kind::kPiecewiseLinear) {
    throw DomainError("points() requires a piecewise-linear profile");
  }
  return pts_;
}

double Profile::value(double x) const {
  if (x < 0.0) throw DomainError("profile evaluated at negative x");
  if (kind_ == Kind::kPowerLaw) return std::pow(1.0 + x, -p_);
  if (x >= pts_.back().x) return 0.0;
  // Last breakpoint with pts.x <= x; right-continuous at vertical drops.
  auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                             [](double v, const Point2& p) { return v < p.x; });
  const Point2& lo = *(it - 1);
  const Point2& hi = *it;
  if (hi.x == lo.x) return lo.y;
  const double t = (x - lo.x) / (hi.x - lo.x);
  return lo.y + t * (hi.y - lo.y);
}

double Profile::support_end() const {
  return kind_ == Kind::kPowerLaw ? kInfinity : pts_.back().x;
}

bool Profile::is_convex() const {
  if (kind_ == Kind::kPowerLaw) return true;
  // Slopes nondecreasing, compared by cross products; vertical drops are only
  // convex at the very start, which the constructor rules out.
  for (std::size_t i = 1; i + 1 < pts_.size(); ++i) {
    const double dx1 = pts_[i].x - pts_[i - 1].x, dy1 = pts_[i].y - pts_[i - 1].y;
    const double dx2 = pts_[i + 1].x - pts_[i].x, dy2 = pts_[i + 1].y - pts_[i].y;
    if (dx2 == 0.0) return false;
    if (dx1 == 0.0) return false;
    const double cross = dx1 * dy2 - dy1 * dx2;
    const double scale = std::abs(dx1 * dy2) + std::abs(dy1 * dx2);
    if (cross < -1e-12 * scale) return false;
  }
  return true;
}

double Profile::area_to(double x) const {
  if (x <= 0.0) return 0.0;
  if (kind_ == Kind::kPowerLaw) {
    if (std::isinf(x)) {
      if (p_ <= 1.0) {
        throw InfiniteVolumeError("power-law profile with p = " + std::to_string(p_) +
                                  " has infinite area");
      }
      return 1.0 / (p_ - 1.0);
    }
    return power_area_to(p_, x);
  }
  double total = 0.0;
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    const Point2& a = pts_[i - 1];
    const Point2& b = pts_[i];
    if (a.x >= x) break;
    if (b.x <= x) {
      total += 0.5 * (b.x - a.x) * (a.y + b.y);
    } else {
      const double yx = value(x);
      total += 0.5 * (x - a.x) * (a.y + yx);
      break;
    }
  }
  return total;
}

double Profile::area_between(double x0, double x1) const {
  if (x1 <= x0) return 0.0;
  if (kind_ == Kind::kPowerLaw) {
    if (std::isinf(x1)) {
      if (p_ <= 1.0) throw InfiniteVolumeError("divergent power-law tail");
      return std::pow(1.0 + x0, 1.0 - p_) / (p_ - 1.0);
    }
    // (1+x0)^{1-p} (1 - ((1+x1)/(1+x0))^{1-p}) / (p-1), stable for nearby x0, x1.
    if (p_ == 1.0) return std::log1p(x1) - std::log1p(x0);
    const double ratio_log = std::log1p((x1 - x0) / (1.0 + x0));
    return std::pow(1.0 + x0, 1.0 - p_) * -std::expm1((1.0 - p_) * ratio_log) / (p_ - 1.0);
  }
  return area_to(x1) - area_to(x0);
}

double Profile::level_crossing(double level) const {
  if (level <= 0.0) return support_end();
  if (kind_ == Kind::kPowerLaw) {
    const double r = std::pow(level, -1.0 / p_) - 1.0;
    return r > 0.0 ? r : 0.0;
  }
  if (pts_.front().y < level) return 0.0;
  // Scan from the right for the last point with y >= level.
  for (std::size_t i = pts_.size() - 1; i > 0; --i) {
    const Point2& lo = pts_[i - 1];
    const Point2& hi = pts_[i];
    if (lo.y >= level) {
      if (hi.y >= level) return hi.x;
      if (hi.x == lo.x) return lo.x;
      const double t = (lo.y - level) / (lo.y - hi.y);
      return lo.x + t * (hi.x - lo.x);
    }
  }
  return 0.0;
}

double Profile::support_value(double a, double b) const {
  if (a < 0.0 || b < 0.0 || (a == 0.0 && b == 0.0)) {
    throw DomainError("support_value needs a nonzero normal with a, b >= 0");
  }
  if (a == 0.0 || b == 0.0) return 0.0;
  if (kind_ == Kind::kPowerLaw) {
    const double x = support_point(a, b);
    return a * x + b * value(x);
  }
  double best = kInfinity;
  for (const auto& pt : pts_) best = std::min(best, a * pt.x + b * pt.y);
  return best;
}

double Profile::support_point(double a, double b) const {
  if (a < 0.0 || b < 0.0 || (a == 0.0 && b == 0.0)) {
    throw DomainError("support_point needs a nonzero normal with a, b >= 0");
  }
  if (b == 0.0) return 0.0;
  if (a == 0.0) return support_end();
  if (kind_ == Kind::kPowerLaw) {
    // p (1+x)^{-p-1} = a/b
    const double x = std::pow(p_ * b / a, 1.0 / (p_ + 1.0)) - 1.0;
    return x > 0.0 ? x : 0.0;
  }
  double best = kInfinity;
  double where = 0.0;
  for (const auto& pt : pts_) {
    const double v = a * pt.x + b * pt.y;
    if (v < best) {
      best = v;
      where = pt.x;
    }
  }
  return where;
}

std::optional<TangentPoint> tangent_triangle(const Profile& profile, std::int64_t inverse_slope) {
  if (inverse_slope < 1) throw DomainError("tangent_triangle needs i >= 1");
  const double slope = -1.0 / static_cast<double>(inverse_slope);
  if (profile.is_power_law()) {
    const double p = profile.exponent();
    // p (1+x)^{-p-1} = 1/i  =>  1 + x = (p i)^{1/(p+1)}
    const double base = p * static_cast<double>(inverse_slope);
    if (base < 1.0) return std::nullopt;
    const double x = std::pow(base, 1.0 / (p + 1.0)) - 1.0;
    return TangentPoint{x, profile.value(x)};
  }
  const auto& pts = profile.points();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double dx = pts[i].x - pts[i - 1].x;
    if (dx <= 0.0) continue;
    const double dy = pts[i].y - pts[i - 1].y;
    if (std::abs(dy - slope * dx) <= 1e-12 * (std::abs(dy) + std::abs(dx))) {
      return TangentPoint{pts[i - 1].x, pts[i - 1].y};
    }
  }
  return std::nullopt;
}

std::vector<Rational> default_slope_schedule(int level) {
  if (level < 1) throw DomainError("slope schedule level must be >= 1");
  std::vector<Rational> out;
  for (int i = level; i >= 1; --i) out.push_back({-i, 1});
  for (int i = 2; i <= level; ++i) out.push_back({-1, i});
  return out;
}

Profile pl_inner_approx(const Profile& profile, const std::vector<Rational>& slopes) {
  if (!profile.is_power_law()) throw DomainError("pl_inner_approx expects a power-law profile");
  if (slopes.empty()) throw DomainError("pl_inner_approx needs a nonempty slope schedule");
  struct Line {
    double slope;
    double intercept;  // value at x = 0
  };
  std::vector<Line> lines;
  lines.reserve(slopes.size() + 1);
  for (const auto& s : slopes) {
    if (s.den <= 0 || s.num >= 0) throw DomainError("schedule slopes must be negative rationals");
    const double a = static_cast<double>(-s.num);
    const double b = static_cast<double>(s.den);
    const double x = profile.support_point(a, b);
    const double slope = -a / b;
    lines.push_back({slope, profile.value(x) - slope * x});
  }
  // The x-axis closes the envelope.
  lines.push_back({0.0, 0.0});
  std::sort(lines.begin(), lines.end(), [](const Line& l, const Line& r) {
    return l.slope != r.slope ? l.slope < r.slope : l.intercept > r.intercept;
  });
  lines.erase(std::unique(lines.begin(), lines.end(),
                          [](const Line& l, const Line& r) { return l.slope == r.slope; }),
              lines.end());

  // Upper envelope (max of lines) for x >= 0, slopes increasing.
  auto cross_x = [](const Line& l, const Line& r) {
    return (l.intercept - r.intercept) / (r.slope - l.slope);
  };
  std::vector<Line> hull;
  for (const auto& ln : lines) {
    while (!hull.empty()) {
      // A line whose whole domain is at x <= 0 never shows on [0, inf).
      if (hull.size() == 1) {
        if (cross_x(hull.back(), ln) <= 0.0) {
          hull.pop_back();
          continue;
        }
        break;
      }
      const Line& a = hull[hull.size() - 2];
      const Line& b = hull.back();
      if (cross_x(a, ln) <= cross_x(a, b)) {
        hull.pop_back();
        continue;
      }
      break;
    }
    hull.push_back(ln);
  }
  std::vector<Point2> pts;
  pts.push_back({0.0, hull.front().intercept});
  for (std::size_t i = 1; i < hull.size(); ++i) {
    const double x = cross_x(hull[i - 1], hull[i]);
    const double y = std::max(0.0, hull[i].intercept + hull[i].slope * x);
    if (x <= pts.back().x) continue;
    pts.push_back({x, i + 1 == hull.size() ? 0.0 : y});
  }
  pts.back().y = 0.0;
  return Profile::piecewise_linear(std::move(pts));
}

double volume_decay(const Profile& profile, double d, QuadratureTolerance tol) {
  if (!(d > 0.0)) throw DomainError("volume_decay needs d > 0");
  const double total = profile.area();
  const double level = kPi * d * d;
  const double r_inf = profile.level_crossing(level);
  if (r_inf <= 0.0) return total;
  const double sqrt_pi_d = std::sqrt(kPi) * d;
  double collar = 0.0;
  if (profile.is_power_law()) {
    // Substitute r = e^t - 1 so the integrand is smooth on a short interval.
    const double p = profile.exponent();
    auto integrand = [&](double t) {
      const double w = std::exp(t);
      return (2.0 * sqrt_pi_d * std::exp(-0.5 * p * t) - level) * w;
    };
    collar = adaptive_simpson(integrand, 0.0, std::log1p(r_inf), tol);
  } else {
    const auto& pts = profile.points();
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const Point2& a = pts[i - 1];
      if (a.x >= r_inf) break;
      Point2 b = pts[i];
      if (b.x > r_inf) b = {r_inf, profile.value(r_inf)};
      collar += 2.0 * sqrt_pi_d * sqrt_linear_integral(a.x, a.y, b.x, b.y) - level * (b.x - a.x);
    }
  }
  const double tail = profile.area_between(r_inf, profile.support_end());
  return std::min(total, collar + tail);
}

}  // namespace echlab
