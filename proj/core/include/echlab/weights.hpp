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

// A piece of a concave region that has not been expanded further. Every
// weight it would still produce is at most `cap`, and the squares of those
// weights sum to 2 * area.
struct TailResidue {
  double cap = 0.0;
  double area = 0.0;
};

// Weights a_1 >= a_2 >= ... >= a_N of a concave toric region plus certified
// data about everything that was not expanded.
struct WeightSequence {
  std::vector<double> head;
  double tail_volume = 0.0;  // region area minus half the sum of squared head weights
  double tail_cap = 0.0;     // upper bound for every weight beyond the head
  std::vector<TailResidue> residues;

  bool finite() const { return residues.empty() && tail_volume == 0.0; }
  double head_volume() const;  // half the sum of squares
};

struct ExpansionLimits {
  double min_weight = -1.0;  // negative: 1e-6 * f(0)
  std::int64_t max_count = 10000;
};

// Canonical expansion of a finite piecewise-linear convex region by repeated
// inscribed triangles and determinant-one normalisation of the two residues.
// Branches are explored depth first, the y-axis residue before the x-axis
// one. Throws if area conservation fails beyond 1e-9 relative.
WeightSequence weight_expansion(const Profile& region, ExpansionLimits limits = {});

// Best-first expansion of any convex profile, driven by its support function.
//
// A residue is the part of the region cut off by two consecutive supporting
// lines in the Stern-Brocot ordering of rational normals; the next weight of
// a residue with parent normals n1, n2 is m(n1 + n2) - m(n1) - m(n2), where m
// is the support function. A residue's weight dominates every weight inside
// it, so popping residues by weight yields the exact largest weights in
// order and the remaining frontier is a certified tail.
class WeightEngine {
 public:
  explicit WeightEngine(Profile profile, int max_depth = 0);

  // Expands until `count` weights are emitted or nothing above `min_weight`
  // remains on the frontier. Repeated calls never shrink the head.
  void expand(std::int64_t count, double min_weight = 0.0);

  const std::vector<double>& head() const { return head_; }
  bool exhausted() const { return frontier_.empty(); }
  double region_area() const { return area_; }

  // Snapshot of the first `count` weights (or all emitted) with the rest of
  // the expansion turned into tail residues.
  WeightSequence snapshot(std::int64_t count = -1) const;

 private:
  struct Node {
    std::int64_t a1, b1, a2, b2;  // parent normals
    double m1, m2;                // support values of the parents
    double x1, x2;                // support points (window of the residue)
    double weight;
    double area;
    int depth;
  };
  struct ByWeight {
    bool operator()(const Node& l, const Node& r) const { return l.weight < r.weight; }
  };

  bool make_node(std::int64_t a1, std::int64_t b1, double m1, double x1, std::int64_t a2,
                 std::int64_t b2, double m2, double x2, int depth, Node& out) const;

  Profile profile_;
  int max_depth_;
  double area_;
  double scale_;
  std::vector<double> head_;
  std::vector<Node> frontier_;  // max-heap by weight
  std::vector<Node> capped_;    // nodes beyond max_depth, never expanded
};

// Expansion of an unbounded power-law region: the support-function engine
// limited to Stern-Brocot depth `level` (the normal (1, m) sits at depth m).
// tail_volume uses the exact region area, so it accounts for everything the
// truncated expansion leaves out.
WeightSequence weight_expansion_unbounded(const Profile& profile, int level,
                                          ExpansionLimits limits = {});

}  // namespace echlab
