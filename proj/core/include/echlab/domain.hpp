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
#include <optional>
#include <string>
#include <vector>

#include "echlab/profile.hpp"

namespace echlab {

// Algebraic description of a four-dimensional domain. Leaves are the balls,
// ellipsoids and polydiscs B(a), E(a,b), P(a,b) (parameters in area units) and
// concave toric domains X_f; inner nodes rescale areas, take disjoint unions
// or repeat a child n times. Values are immutable once built.
class DomainSpec {
 public:
  enum class Op { kBall, kEllipsoid, kPolydisc, kConcaveToric, kScale, kDisjointUnion, kCopies };

  static DomainSpec ball(double a);
  static DomainSpec ellipsoid(double a, double b);
  static DomainSpec polydisc(double a, double b);
  // The profile must be convex; non-convex profiles do not bound a concave
  // toric domain and have no weight expansion.
  static DomainSpec concave_toric(Profile profile);
  static DomainSpec scale(double factor, DomainSpec child);
  static DomainSpec disjoint_union(std::vector<DomainSpec> children);
  static DomainSpec copies(std::int64_t n, DomainSpec child);

  Op op() const { return op_; }
  double a() const { return a_; }            // ball, ellipsoid, polydisc
  double b() const { return b_; }            // ellipsoid, polydisc (ball: equals a)
  double factor() const { return a_; }       // scale
  std::int64_t count() const { return n_; }  // copies
  const Profile& profile() const;            // concave toric
  const DomainSpec& child() const;           // scale, copies
  const std::vector<DomainSpec>& children() const { return children_; }

  bool is_leaf() const { return op_ <= Op::kConcaveToric; }

  // Human-readable form in the inline grammar accepted by the command line
  // (for example "copies:3:ball:1").
  std::string describe() const;

 private:
  DomainSpec() = default;
  Op op_ = Op::kBall;
  double a_ = 0.0;
  double b_ = 0.0;
  std::int64_t n_ = 0;
  std::optional<Profile> profile_;
  std::vector<DomainSpec> children_;
};

// 4-volume; throws InfiniteVolumeError for divergent profiles.
double volume(const DomainSpec& spec);

}  // namespace echlab
