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

#include "echlab/domain.hpp"

#include <charconv>
#include <cmath>
#include <utility>

#include "echlab/errors.hpp"

namespace echlab {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be a finite positive number");
  }
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

DomainSpec DomainSpec::ball(double a) {
  require_positive(a, "ball area");
  DomainSpec s;
  s.op_ = Op::kBall;
  s.a_ = s.b_ = a;
  return s;
}

DomainSpec DomainSpec::ellipsoid(double a, double b) {
  require_positive(a, "ellipsoid parameter a");
  require_positive(b, "ellipsoid parameter b");
  DomainSpec s;
  s.op_ = Op::kEllipsoid;
  s.a_ = a;
  s.b_ = b;
  return s;
}

DomainSpec DomainSpec::polydisc(double a, double b) {
  require_positive(a, "polydisc parameter a");
  require_positive(b, "polydisc parameter b");
  DomainSpec s;
  s.op_ = Op::kPolydisc;
  s.a_ = a;
  s.b_ = b;
  return s;
}

DomainSpec DomainSpec::concave_toric(Profile profile) {
  if (!profile.is_convex()) {
    throw DomainError("concave toric domain needs a convex profile");
  }
  DomainSpec s;
  s.op_ = Op::kConcaveToric;
  s.profile_ = std::move(profile);
  return s;
}

DomainSpec DomainSpec::scale(double factor, DomainSpec child) {
  require_positive(factor, "scale factor");
  DomainSpec s;
  s.op_ = Op::kScale;
  s.a_ = factor;
  s.children_.push_back(std::move(child));
  return s;
}

DomainSpec DomainSpec::disjoint_union(std::vector<DomainSpec> children) {
  if (children.empty()) throw DomainError("disjoint union needs at least one child");
  DomainSpec s;
  s.op_ = Op::kDisjointUnion;
  s.children_ = std::move(children);
  return s;
}

DomainSpec DomainSpec::copies(std::int64_t n, DomainSpec child) {
  if (n < 1) throw DomainError("copies needs n >= 1");
  DomainSpec s;
  s.op_ = Op::kCopies;
  s.n_ = n;
  s.children_.push_back(std::move(child));
  return s;
}

const Profile& DomainSpec::profile() const {
  if (op_ != Op::kConcaveToric) throw DomainError("profile() requires a concave toric leaf");
  return *profile_;
}

const DomainSpec& DomainSpec::child() const {
  if (op_ != Op::kScale && op_ != Op::kCopies) {
    throw DomainError("child() requires a scale or copies node");
  }
  return children_.front();
}

std::string DomainSpec::describe() const {
  switch (op_) {
    case Op::kBall:
      return "ball:" + shortest(a_);
    case Op::kEllipsoid:
      return "ellipsoid:" + shortest(a_) + ":" + shortest(b_);
    case Op::kPolydisc:
      return "polydisc:" + shortest(a_) + ":" + shortest(b_);
    case Op::kConcaveToric: {
      if (profile_->is_power_law()) return "power:" + shortest(profile_->exponent());
      std::string out = "pl";
      for (const auto& pt : profile_->points()) out += ":" + shortest(pt.x) + "," + shortest(pt.y);
      return out;
    }
    case Op::kScale:
      return "scale:" + shortest(a_) + ":" + children_.front().describe();
    case Op::kCopies:
      return "copies:" + std::to_string(n_) + ":" + children_.front().describe();
    case Op::kDisjointUnion: {
      std::string out = "union(";
      for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) out += ";";
        out += children_[i].describe();
      }
      return out + ")";
    }
  }
  return "?";
}

double volume(const DomainSpec& spec) {
  switch (spec.op()) {
    case DomainSpec::Op::kBall:
      return 0.5 * spec.a() * spec.a();
    case DomainSpec::Op::kEllipsoid:
      return 0.5 * spec.a() * spec.b();
    case DomainSpec::Op::kPolydisc:
      return spec.a() * spec.b();
    case DomainSpec::Op::kConcaveToric:
      return spec.profile().area();
    case DomainSpec::Op::kScale:
      return spec.factor() * spec.factor() * volume(spec.child());
    case DomainSpec::Op::kCopies:
      return static_cast<double>(spec.count()) * volume(spec.child());
    case DomainSpec::Op::kDisjointUnion: {
      double total = 0.0;
      for (const auto& c : spec.children()) total += volume(c);
      return total;
    }
  }
  return 0.0;
}

}  // namespace echlab
