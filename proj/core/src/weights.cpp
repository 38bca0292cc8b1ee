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

#include "echlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "echlab/errors.hpp"

namespace echlab {
namespace {

using Polygon = std::vector<Point2>;  // graph of a convex nonincreasing function

double polygon_area(const Polygon& pts) {
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    total += 0.5 * (pts[i].x - pts[i - 1].x) * (pts[i].y + pts[i - 1].y);
  }
  return total;
}

// Enforces the normal form after a floating-point transform: y >= 0, x
// nondecreasing, no repeated points, nothing after the first zero.
Polygon tidy(Polygon pts) {
  Polygon out;
  out.reserve(pts.size());
  for (auto pt : pts) {
    pt.y = std::max(pt.y, 0.0);
    if (!out.empty()) {
      pt.x = std::max(pt.x, out.back().x);
      pt.y = std::min(pt.y, out.back().y);
      if (pt == out.back()) continue;
    }
    out.push_back(pt);
    if (pt.y == 0.0) break;
  }
  return out;
}

bool degenerate(const Polygon& pts, double area_floor) {
  return pts.size() < 2 || pts.front().y <= 0.0 || pts.back().x <= 0.0 ||
         polygon_area(pts) <= area_floor;
}

// min over vertices of x + y with the smallest x among ties.
std::pair<double, std::size_t> inscribed(const Polygon& pts) {
  double best = pts[0].x + pts[0].y;
  std::size_t idx = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double v = pts[i].x + pts[i].y;
    if (v < best) {
      best = v;
      idx = i;
    }
  }
  return {best, idx};
}

double line_integral(double m, std::int64_t a, std::int64_t b, double u, double v) {
  // \int_u^v (m - a x) / b dx
  const double bd = static_cast<double>(b);
  const double ad = static_cast<double>(a);
  const double lu = (m - ad * u) / bd;
  const double lv = (m - ad * v) / bd;
  return 0.5 * (v - u) * (lu + lv);
}

}  // namespace

double WeightSequence::head_volume() const {
  double s = 0.0;
  for (double a : head) s += a * a;
  return 0.5 * s;
}

WeightSequence weight_expansion(const Profile& region, ExpansionLimits limits) {
  if (region.is_power_law()) {
    throw DomainError("weight_expansion needs a piecewise-linear region with finite support");
  }
  if (!region.is_convex()) throw DomainError("weight_expansion needs a convex profile");
  if (limits.max_count < 1) throw DomainError("max_count must be >= 1");
  const double eps = limits.min_weight < 0.0 ? 1e-6 * region.f0() : limits.min_weight;
  const double total_area = region.area();

  WeightSequence out;
  if (total_area <= 0.0) return out;
  const double area_floor = 1e-15 * total_area;

  std::vector<Polygon> stack;
  stack.push_back(tidy(region.points()));
  double pruned_area = 0.0;
  double dropped_area = 0.0;
  while (!stack.empty()) {
    Polygon pts = std::move(stack.back());
    stack.pop_back();
    const auto [r, idx] = inscribed(pts);
    if (r < eps || static_cast<std::int64_t>(out.head.size()) >= limits.max_count) {
      const double a = polygon_area(pts);
      out.residues.push_back({r, a});
      out.tail_cap = std::max(out.tail_cap, r);
      pruned_area += a;
      continue;
    }
    out.head.push_back(r);

    // y-axis piece: translate by (0, -r), shear (x, y) -> (x, x + y).
    Polygon left;
    for (std::size_t j = 0; j <= idx; ++j) left.push_back({pts[j].x, pts[j].x + pts[j].y - r});
    left.back().y = 0.0;
    // x-axis piece: translate by (-r, 0), shear (x, y) -> (x + y, y).
    Polygon right;
    right.push_back({0.0, pts[idx].y});
    for (std::size_t j = idx + 1; j < pts.size(); ++j) {
      right.push_back({pts[j].x + pts[j].y - r, pts[j].y});
    }
    right.back().y = 0.0;

    left = tidy(std::move(left));
    right = tidy(std::move(right));
    // y-axis residue is explored first, so it is pushed last.
    for (Polygon* piece : {&right, &left}) {
      if (degenerate(*piece, area_floor)) {
        if (piece->size() >= 2) dropped_area += std::max(0.0, polygon_area(*piece));
        continue;
      }
      stack.push_back(std::move(*piece));
    }
  }

  std::sort(out.head.begin(), out.head.end(), std::greater<>());
  const double head_volume = out.head_volume();
  const double balance = head_volume + pruned_area + dropped_area;
  if (std::abs(balance - total_area) > 1e-9 * total_area) {
    throw DomainError("weight expansion lost area: expected " + std::to_string(total_area) +
                      ", accounted " + std::to_string(balance));
  }
  out.tail_volume = out.residues.empty() ? 0.0 : std::max(0.0, total_area - head_volume);
  return out;
}

WeightEngine::WeightEngine(Profile profile, int max_depth)
    : profile_(std::move(profile)), max_depth_(max_depth) {
  if (!profile_.is_convex()) throw DomainError("weight engine needs a convex profile");
  area_ = profile_.area();
  const double end = profile_.support_end();
  scale_ = profile_.f0() + (std::isfinite(end) ? end : 1.0);
  Node root;
  // Root residue is the whole region, bounded by the normals (1,0) and (0,1).
  if (make_node(1, 0, 0.0, 0.0, 0, 1, 0.0, end, 1, root)) {
    frontier_.push_back(root);
  }
}

bool WeightEngine::make_node(std::int64_t a1, std::int64_t b1, double m1, double x1,
                             std::int64_t a2, std::int64_t b2, double m2, double x2, int depth,
                             Node& out) const {
  const double a = static_cast<double>(a1 + a2);
  const double b = static_cast<double>(b1 + b2);
  const double w = profile_.support_value(a, b) - m1 - m2;
  // Area between the graph and the two parent lines over the window [x1, x2].
  double area = 0.0;
  if (x2 > x1) {
    area = profile_.area_between(x1, x2);
    if (b1 == 0) {
      if (a2 > 0) area -= line_integral(m2, a2, b2, x1, x2);
    } else {
      const double det = static_cast<double>(a1 * b2 - a2 * b1);
      double xc = (m1 * static_cast<double>(b2) - m2 * static_cast<double>(b1)) / det;
      xc = std::max(xc, x1);
      if (std::isfinite(x2)) xc = std::min(xc, x2);
      area -= line_integral(m1, a1, b1, x1, xc);
      if (a2 > 0 && std::isfinite(x2)) area -= line_integral(m2, a2, b2, xc, x2);
    }
  }
  area = std::max(area, 0.0);
  if (w <= 1e-14 * scale_ || area <= 1e-28 * scale_ * scale_) return false;
  out = Node{a1, b1, a2, b2, m1, m2, x1, x2, w, area, depth};
  return true;
}

void WeightEngine::expand(std::int64_t count, double min_weight) {
  while (static_cast<std::int64_t>(head_.size()) < count && !frontier_.empty()) {
    if (frontier_.front().weight < min_weight) break;
    std::pop_heap(frontier_.begin(), frontier_.end(), ByWeight{});
    const Node n = frontier_.back();
    frontier_.pop_back();
    head_.push_back(n.weight);

    const std::int64_t a = n.a1 + n.a2;
    const std::int64_t b = n.b1 + n.b2;
    const double ad = static_cast<double>(a), bd = static_cast<double>(b);
    const double m = profile_.support_value(ad, bd);
    const double x = profile_.support_point(ad, bd);
    Node child;
    const int depth = n.depth + 1;
    auto place = [&](const Node& c) {
      if (max_depth_ > 0 && c.depth > max_depth_) {
        capped_.push_back(c);
      } else {
        frontier_.push_back(c);
        std::push_heap(frontier_.begin(), frontier_.end(), ByWeight{});
      }
    };
    if (make_node(n.a1, n.b1, n.m1, n.x1, a, b, m, x, depth, child)) place(child);
    if (make_node(a, b, m, x, n.a2, n.b2, n.m2, n.x2, depth, child)) place(child);
  }
}

WeightSequence WeightEngine::snapshot(std::int64_t count) const {
  const std::size_t n =
      count < 0 ? head_.size() : std::min(head_.size(), static_cast<std::size_t>(count));
  WeightSequence out;
  out.head.assign(head_.begin(), head_.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t i = n; i < head_.size(); ++i) out.residues.push_back({head_[i], 0.5 * head_[i] * head_[i]});
  for (const auto& node : frontier_) out.residues.push_back({node.weight, node.area});
  for (const auto& node : capped_) out.residues.push_back({node.weight, node.area});
  std::sort(out.residues.begin(), out.residues.end(),
            [](const TailResidue& l, const TailResidue& r) { return l.cap > r.cap; });
  out.tail_cap = out.residues.empty() ? 0.0 : out.residues.front().cap;
  const double hv = out.head_volume();
  if (out.residues.empty()) {
    if (std::abs(hv - area_) > 1e-9 * area_) {
      throw DomainError("exhausted weight expansion does not conserve area");
    }
    out.tail_volume = 0.0;
  } else {
    out.tail_volume = std::max(0.0, area_ - hv);
  }
  return out;
}

WeightSequence weight_expansion_unbounded(const Profile& profile, int level,
                                          ExpansionLimits limits) {
  if (!profile.is_power_law() || profile.exponent() <= 1.0) {
    throw DomainError("weight_expansion_unbounded needs a power-law profile with p > 1");
  }
  if (level < 1) throw DomainError("level must be >= 1");
  if (limits.max_count < 1) throw DomainError("max_count must be >= 1");
  const double eps = limits.min_weight < 0.0 ? 1e-6 * profile.f0() : limits.min_weight;
  WeightEngine engine(profile, level);
  engine.expand(limits.max_count, eps);
  return engine.snapshot();
}

}  // namespace echlab
