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

#include "echlab/capacities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

#include "echlab/errors.hpp"
#include "echlab/parallel.hpp"

namespace echlab {
namespace {

std::int64_t triangular(std::int64_t t) { return t * (t + 1) / 2; }

// Smallest d with (d+1)(d+2)/2 >= k+1.
std::int64_t ball_level(std::int64_t k) {
  const double est = (std::sqrt(8.0 * static_cast<double>(k + 1) + 1.0) - 3.0) / 2.0;
  std::int64_t d = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(est)) - 1);
  while (triangular(d + 1) < k + 1) ++d;
  return d;
}

// Lattice points (m, n) >= 0 with m*a + n*b <= t, where a >= b. The sum is
// evaluated exactly as written so that callers enumerating the multiset
// directly see the same values. Stops counting once `cap` is reached.
std::int64_t lattice_count(double a, double b, double t, std::int64_t cap) {
  if (t < 0.0) return 0;
  std::int64_t total = 0;
  for (std::int64_t m = 0;; ++m) {
    const double base = static_cast<double>(m) * a;
    if (base > t) break;
    auto n = static_cast<std::int64_t>(std::floor((t - base) / b));
    while (n >= 0 && base + static_cast<double>(n) * b > t) --n;
    while (base + static_cast<double>(n + 1) * b <= t) ++n;
    total += n + 1;
    if (total >= cap) break;
  }
  return total;
}

double lattice_max_below(double a, double b, double t) {
  double best = -kInfinity;
  for (std::int64_t m = 0;; ++m) {
    const double base = static_cast<double>(m) * a;
    if (base > t) break;
    auto n = static_cast<std::int64_t>(std::floor((t - base) / b));
    while (n >= 0 && base + static_cast<double>(n) * b > t) --n;
    while (base + static_cast<double>(n + 1) * b <= t) ++n;
    best = std::max(best, base + static_cast<double>(n) * b);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Knapsack with convex costs

struct DpResult {
  std::vector<double> values;                      // best value per budget
  std::vector<std::vector<std::uint32_t>> choice;  // per item, per budget
};

DpResult run_dp(const std::vector<double>& w, std::int64_t kmax, bool keep_choices) {
  const auto width = static_cast<std::size_t>(kmax + 1);
  DpResult res;
  res.values.assign(width, 0.0);
  std::vector<double> next(width);
  for (double a : w) {
    next = res.values;
    std::vector<std::uint32_t> ch;
    if (keep_choices) ch.assign(width, 0);
    for (std::int64_t t = 1; triangular(t) <= kmax; ++t) {
      const auto cost = static_cast<std::size_t>(triangular(t));
      const double gain = static_cast<double>(t) * a;
      for (std::size_t b = cost; b < width; ++b) {
        const double v = res.values[b - cost] + gain;
        if (v > next[b]) {
          next[b] = v;
          if (keep_choices) ch[b] = static_cast<std::uint32_t>(t);
        }
      }
    }
    res.values.swap(next);
    if (keep_choices) res.choice.push_back(std::move(ch));
  }
  return res;
}

void check_exact_limits(std::size_t items, std::int64_t k, const ExactLimits& limits) {
  if (k > limits.max_k || items > limits.max_items) {
    throw LimitExceeded("exact union capacity limited to k <= " + std::to_string(limits.max_k) +
                        " and " + std::to_string(limits.max_items) +
                        " weights; use cap_union_bracket instead");
  }
}

double value_of(const std::vector<double>& w, const std::vector<std::int64_t>& d) {
  double total = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) total += static_cast<double>(d[i]) * w[i];
  return total;
}

std::int64_t budget_of(const std::vector<std::int64_t>& d) {
  std::int64_t total = 0;
  for (auto x : d) total += x * x + x;
  return total;
}

// g(a) = max_d (d a - lambda (d^2 + d)); d0 is the rounded continuous optimum.
double lagrange_gain(double a, double lambda) {
  const double d0 = std::max(0.0, std::floor((a / lambda - 1.0) / 2.0));
  const double d1 = d0 + 1.0;
  return std::max({0.0, d0 * a - lambda * (d0 * d0 + d0), d1 * a - lambda * (d1 * d1 + d1)});
}

struct TailItem {
  double cap;
  double area;
};

class DualBound {
 public:
  DualBound(const std::vector<double>& head, const std::vector<TailItem>& tail, std::int64_t k)
      : head_(head), tail_(tail), k_(k) {}

  double operator()(double lambda) const {
    double total = 2.0 * lambda * static_cast<double>(k_);
    for (double a : head_) {
      if (a <= 2.0 * lambda) break;
      total += lagrange_gain(a, lambda);
    }
    for (const auto& t : tail_) {
      if (t.cap <= 2.0 * lambda) break;
      total += 2.0 * t.area * lagrange_gain(t.cap, lambda) / (t.cap * t.cap);
    }
    return total;
  }

 private:
  const std::vector<double>& head_;
  const std::vector<TailItem>& tail_;
  std::int64_t k_;
};

double minimize_dual(const DualBound& dual, double hi, std::int64_t k) {
  // The dual is convex in lambda, hence unimodal in log(lambda).
  double lo_s = std::log(hi / (1e3 * static_cast<double>(k + 1)));
  double hi_s = std::log(hi);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi_s - phi * (hi_s - lo_s);
  double d = lo_s + phi * (hi_s - lo_s);
  double fc = dual(std::exp(c));
  double fd = dual(std::exp(d));
  double best = std::min({fc, fd, dual(hi)});
  for (int it = 0; it < 120; ++it) {
    if (fc <= fd) {
      hi_s = d;
      d = c;
      fd = fc;
      c = hi_s - phi * (hi_s - lo_s);
      fc = dual(std::exp(c));
      best = std::min(best, fc);
    } else {
      lo_s = c;
      c = d;
      fc = fd;
      d = lo_s + phi * (hi_s - lo_s);
      fd = dual(std::exp(d));
      best = std::min(best, fd);
    }
  }
  return best;
}

// Exact maximiser of d a - lambda (d^2 + d): d + 1 pays off while d + 1 <= a / (2 lambda).
std::int64_t exact_response(double a, double lambda) {
  return static_cast<std::int64_t>(std::floor(a / (2.0 * lambda)));
}

// Completes d greedily by marginal ratio a_i / (d_i + 1) (gain per budget
// unit of the next increment). Returns the unused budget.
std::int64_t greedy_fill(const std::vector<double>& w, std::vector<std::int64_t>& d,
                         std::int64_t remaining) {
  const std::size_t n = w.size();
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> heap;
  std::size_t next_idle = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0) heap.push({w[i] / static_cast<double>(d[i] + 1), i});
  }
  while (next_idle < n && d[next_idle] > 0) ++next_idle;
  while (remaining > 0) {
    const bool heap_ok = !heap.empty();
    const bool idle_ok = next_idle < n;
    if (!heap_ok && !idle_ok) break;
    const bool take_idle = idle_ok && (!heap_ok || w[next_idle] >= heap.top().first);
    std::size_t i;
    if (take_idle) {
      i = next_idle;
      do {
        ++next_idle;
      } while (next_idle < n && d[next_idle] > 0);
    } else {
      i = heap.top().second;
      heap.pop();
    }
    const std::int64_t cost = d[i] + 1;
    if (cost > remaining) continue;  // later increments of i cost even more
    remaining -= cost;
    ++d[i];
    heap.push({w[i] / static_cast<double>(d[i] + 1), i});
  }
  return remaining;
}

// Feasible multiplicities (budget in triangular units, sum of d(d+1)/2 <= k):
// Lagrangian rounding at several multipliers just above the smallest feasible
// one, greedy completion, then one-for-one exchanges on the best candidate.
std::vector<std::int64_t> rounded_multiplicities(const std::vector<double>& w, std::int64_t k) {
  const std::size_t n = w.size();
  std::vector<std::int64_t> best(n, 0);
  if (n == 0 || k <= 0) return best;

  auto units_at = [&](double lambda) {
    std::int64_t total = 0;
    for (double a : w) {
      const std::int64_t t = exact_response(a, lambda);
      if (t == 0) break;
      total += triangular(t);
      if (total > k) break;
    }
    return total;
  };
  double hi = w.front();  // every response is zero here
  double lo = w.front() / (4.0 * static_cast<double>(k + 1) + 4.0);
  while (units_at(lo) <= k && lo > 1e-300) lo *= 0.5;
  for (int it = 0; it < 100; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    (units_at(mid) <= k ? hi : lo) = mid;
  }

  double best_value = -1.0;
  std::int64_t best_remaining = 0;
  std::vector<std::int64_t> d(n);
  for (double stretch : {0.0, 0.002, 0.005, 0.01, 0.02, 0.035, 0.05}) {
    const double lambda = hi * (1.0 + stretch);
    std::int64_t used = 0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = exact_response(w[i], lambda);
      used += triangular(d[i]);
    }
    if (used > k) continue;
    const std::int64_t rem = greedy_fill(w, d, k - used);
    const double v = value_of(w, d);
    if (v > best_value) {
      best_value = v;
      best = d;
      best_remaining = rem;
    }
  }

  // Exchanges: drop the last unit of a weak item, add a unit elsewhere.
  d = best;
  std::int64_t remaining = best_remaining;
  constexpr std::size_t kCandidates = 48;
  for (int round = 0; round < 6; ++round) {
    std::vector<std::size_t> drop;
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i] > 0) drop.push_back(i);
    }
    auto weak = [&](std::size_t l, std::size_t r) {
      return w[l] / static_cast<double>(d[l]) < w[r] / static_cast<double>(d[r]);
    };
    if (drop.size() > kCandidates) {
      std::partial_sort(drop.begin(), drop.begin() + kCandidates, drop.end(), weak);
      drop.resize(kCandidates);
    }
    std::vector<std::size_t> add(n);
    std::iota(add.begin(), add.end(), 0);
    auto strong = [&](std::size_t l, std::size_t r) {
      return w[l] / static_cast<double>(d[l] + 1) > w[r] / static_cast<double>(d[r] + 1);
    };
    const std::size_t take = std::min(kCandidates, n);
    std::partial_sort(add.begin(), add.begin() + static_cast<std::ptrdiff_t>(take), add.end(),
                      strong);
    add.resize(take);

    double best_gain = 0.0;
    std::size_t best_i = n, best_j = n;
    for (std::size_t i : drop) {
      for (std::size_t j : add) {
        if (i == j || d[j] + 1 > remaining + d[i]) continue;
        const double gain = w[j] - w[i];
        if (gain > best_gain) {
          best_gain = gain;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_i == n) break;
    remaining += d[best_i];
    --d[best_i];
    ++d[best_j];
    remaining -= d[best_j];
    remaining = greedy_fill(w, d, remaining);
  }
  return value_of(w, d) >= best_value ? d : best;
}

}  // namespace

double cap_ball(double a, std::int64_t k) {
  if (!(a > 0.0)) throw DomainError("cap_ball needs a > 0");
  if (k < 0) throw DomainError("capacity index must be >= 0");
  return a * static_cast<double>(ball_level(k));
}

double cap_ellipsoid(double a, double b, std::int64_t k) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("cap_ellipsoid needs a, b > 0");
  if (k < 0) throw DomainError("capacity index must be >= 0");
  if (k == 0) return 0.0;
  if (a < b) std::swap(a, b);  // iterate over the coarser direction
  const std::int64_t target = k + 1;
  double lo = -1.0;
  double hi = std::sqrt(2.0 * a * b * static_cast<double>(target)) + a + b;
  while (lattice_count(a, b, hi, target) < target) hi *= 2.0;
  for (int it = 0; it < 2000; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (lattice_count(a, b, mid, target) >= target ? hi : lo) = mid;
  }
  return lattice_max_below(a, b, hi);
}

double cap_polydisc(double a, double b, std::int64_t k) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("cap_polydisc needs a, b > 0");
  if (k < 0) throw DomainError("capacity index must be >= 0");
  const std::int64_t big_k = k + 1;
  auto s = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(big_k))));
  while (s * s < big_k) ++s;
  double best = kInfinity;
  for (std::int64_t m1 = 1; m1 <= s; ++m1) {
    const std::int64_t n1 = (big_k + m1 - 1) / m1;
    best = std::min(best, a * static_cast<double>(m1 - 1) + b * static_cast<double>(n1 - 1));
    best = std::min(best, a * static_cast<double>(n1 - 1) + b * static_cast<double>(m1 - 1));
  }
  return best;
}

CapacityBracket cap_union_exact(const WeightSequence& weights, std::int64_t k,
                                ExactLimits limits) {
  if (k < 0) throw DomainError("capacity index must be >= 0");
  if (!weights.finite()) {
    throw DomainError("cap_union_exact needs a finite weight sequence; use cap_union_bracket");
  }
  check_exact_limits(weights.head.size(), k, limits);
  CapacityBracket out;
  out.k = k;
  out.exact = true;
  const auto& w = weights.head;
  out.multiplicities.assign(w.size(), 0);
  if (k > 0 && !w.empty()) {
    const DpResult dp = run_dp(w, k, true);
    auto b = static_cast<std::size_t>(k);
    for (std::size_t i = w.size(); i-- > 0;) {
      const std::uint32_t t = dp.choice[i][b];
      out.multiplicities[i] = t;
      b -= static_cast<std::size_t>(triangular(t));
    }
  }
  out.lower = out.upper = value_of(w, out.multiplicities);
  out.exhausted_budget = budget_of(out.multiplicities);
  return out;
}

std::vector<double> cap_union_exact_sequence(const std::vector<double>& weights,
                                             std::int64_t kmax, ExactLimits limits) {
  if (kmax < 0) throw DomainError("capacity index must be >= 0");
  check_exact_limits(weights.size(), kmax, limits);
  std::vector<double> w = weights;
  std::sort(w.begin(), w.end(), std::greater<>());
  return run_dp(w, kmax, false).values;
}

CapacityBracket cap_union_bracket(const WeightSequence& weights, std::int64_t k,
                                  std::int64_t head_cut, ExactLimits limits) {
  if (k < 0) throw DomainError("capacity index must be >= 0");
  const std::size_t total_head = weights.head.size();
  const std::size_t n =
      head_cut < 0 ? total_head : std::min(total_head, static_cast<std::size_t>(head_cut));
  CapacityBracket out;
  out.k = k;
  std::vector<double> head(weights.head.begin(),
                           weights.head.begin() + static_cast<std::ptrdiff_t>(n));

  std::vector<TailItem> tail;
  tail.reserve(weights.residues.size() + (total_head - n));
  double tail_area = 0.0;
  for (std::size_t i = n; i < total_head; ++i) {
    const double a = weights.head[i];
    tail.push_back({a, 0.5 * a * a});
    tail_area += 0.5 * a * a;
  }
  for (const auto& r : weights.residues) {
    if (r.cap <= 0.0 || r.area <= 0.0) continue;
    tail.push_back({r.cap, r.area});
    tail_area += r.area;
  }
  std::sort(tail.begin(), tail.end(),
            [](const TailItem& l, const TailItem& r) { return l.cap > r.cap; });
  double cut_volume = 0.0;
  for (std::size_t i = n; i < total_head; ++i) cut_volume += 0.5 * weights.head[i] * weights.head[i];
  const double tail_volume = std::max(tail_area, weights.tail_volume + cut_volume);
  const bool has_tail = !tail.empty() || tail_volume > 0.0;

  out.multiplicities.assign(n, 0);
  if (k == 0 || (head.empty() && !has_tail)) {
    out.exact = true;
    return out;
  }

  // Lower bound: a feasible vector on the head.
  std::vector<std::int64_t> d = rounded_multiplicities(head, k);
  double lower = value_of(head, d);

  // Upper bound: Lagrangian dual over head and tail residues.
  const double top = std::max(head.empty() ? 0.0 : head.front(), tail.empty() ? 0.0 : tail.front().cap);
  const DualBound dual(head, tail, k);
  double upper = top > 0.0 ? minimize_dual(dual, top, k) : 0.0;

  const bool exact_head = !head.empty() && k <= limits.max_k && n <= limits.max_items;
  if (exact_head) {
    WeightSequence finite_head;
    finite_head.head = head;
    const CapacityBracket ex = cap_union_exact(finite_head, k, limits);
    if (ex.lower >= lower) {
      lower = ex.lower;
      d = ex.multiplicities;
    }
    upper = std::min(upper, ex.upper + 2.0 * std::sqrt(tail_volume * static_cast<double>(k)));
  }
  if (upper < lower) upper = lower;  // only rounding can cause this
  out.lower = lower;
  out.upper = upper;
  out.multiplicities = std::move(d);
  out.exhausted_budget = budget_of(out.multiplicities);
  out.exact = upper == lower;
  return out;
}

// ---------------------------------------------------------------------------
// CapacitySolver

namespace {

bool mergeable(const DomainSpec& s) {
  switch (s.op()) {
    case DomainSpec::Op::kBall:
    case DomainSpec::Op::kConcaveToric:
      return true;
    case DomainSpec::Op::kEllipsoid:
    case DomainSpec::Op::kPolydisc:
      return false;
    default:
      for (const auto& c : s.children()) {
        if (!mergeable(c)) return false;
      }
      return true;
  }
}

struct Piece {
  std::unique_ptr<WeightEngine> engine;
  double scale;
  std::int64_t mult;
};

constexpr std::size_t kMaxMergedHead = std::size_t{1} << 24;

}  // namespace

struct CapacitySolver::Impl {
  enum class Mode { kClosed, kScale, kWeights, kConvolution };

  DomainSpec spec;
  CapacityOptions opt;
  double vol = 0.0;
  Mode mode = Mode::kClosed;

  // kScale
  std::unique_ptr<CapacitySolver> child;
  double factor = 1.0;

  // kWeights
  std::vector<Piece> pieces;
  std::vector<std::pair<double, std::int64_t>> balls;
  std::int64_t n_current = 0;
  WeightSequence merged;
  bool finite = false;
  std::vector<double> exact_values;  // cached c_0.. for small finite unions

  // kConvolution
  std::vector<std::pair<std::unique_ptr<CapacitySolver>, std::int64_t>> parts;
  std::vector<double> conv_lower, conv_upper;
  std::vector<char> conv_converged;

  Impl(DomainSpec s, CapacityOptions o) : spec(std::move(s)), opt(o) {
    vol = echlab::volume(spec);
    if (spec.op() == DomainSpec::Op::kBall || spec.op() == DomainSpec::Op::kEllipsoid ||
        spec.op() == DomainSpec::Op::kPolydisc) {
      mode = Mode::kClosed;
    } else if (mergeable(spec)) {
      mode = Mode::kWeights;
      collect(spec, 1.0, 1);
      n_current = std::max<std::int64_t>(1, opt.initial_weights);
      rebuild();
    } else if (spec.op() == DomainSpec::Op::kScale) {
      mode = Mode::kScale;
      factor = spec.factor();
      child = std::make_unique<CapacitySolver>(spec.child(), opt);
    } else {
      mode = Mode::kConvolution;
      if (spec.op() == DomainSpec::Op::kCopies) {
        parts.emplace_back(std::make_unique<CapacitySolver>(spec.child(), opt), spec.count());
      } else {
        for (const auto& c : spec.children()) {
          parts.emplace_back(std::make_unique<CapacitySolver>(c, opt), 1);
        }
      }
    }
  }

  void collect(const DomainSpec& s, double scale, std::int64_t mult) {
    switch (s.op()) {
      case DomainSpec::Op::kBall:
        balls.emplace_back(s.a() * scale, mult);
        break;
      case DomainSpec::Op::kConcaveToric:
        pieces.push_back({std::make_unique<WeightEngine>(s.profile()), scale, mult});
        break;
      case DomainSpec::Op::kScale:
        collect(s.child(), scale * s.factor(), mult);
        break;
      case DomainSpec::Op::kCopies:
        collect(s.child(), scale, mult * s.count());
        break;
      case DomainSpec::Op::kDisjointUnion:
        for (const auto& c : s.children()) collect(c, scale, mult);
        break;
      default:
        throw DomainError("internal: unexpected leaf in weight union");
    }
  }

  void rebuild() {
    WeightSequence out;
    finite = true;
    std::size_t head_size = 0;
    for (const auto& [a, m] : balls) head_size += static_cast<std::size_t>(m);
    for (auto& piece : pieces) {
      piece.engine->expand(n_current);
      const WeightSequence snap = piece.engine->snapshot(n_current);
      head_size += snap.head.size() * static_cast<std::size_t>(piece.mult);
      if (head_size > kMaxMergedHead) {
        throw LimitExceeded("merged weight sequence too long; reduce the number of copies");
      }
      const double c = piece.scale;
      for (std::int64_t r = 0; r < piece.mult; ++r) {
        for (double a : snap.head) out.head.push_back(a * c);
        for (const auto& res : snap.residues) out.residues.push_back({res.cap * c, res.area * c * c});
      }
      out.tail_volume += snap.tail_volume * c * c * static_cast<double>(piece.mult);
      if (!snap.residues.empty()) finite = false;
    }
    for (const auto& [a, m] : balls) {
      if (head_size > kMaxMergedHead) throw LimitExceeded("merged weight sequence too long");
      out.head.insert(out.head.end(), static_cast<std::size_t>(m), a);
    }
    std::sort(out.head.begin(), out.head.end(), std::greater<>());
    std::sort(out.residues.begin(), out.residues.end(),
              [](const TailResidue& l, const TailResidue& r) { return l.cap > r.cap; });
    out.tail_cap = out.residues.empty() ? 0.0 : out.residues.front().cap;
    if (finite) out.tail_volume = 0.0;
    merged = std::move(out);
    exact_values.clear();
  }

  bool can_refine() const {
    if (finite) return false;
    return n_current < opt.max_weights;
  }

  void refine() {
    n_current = std::min(opt.max_weights, 2 * n_current);
    rebuild();
  }

  bool exact_feasible(std::int64_t k) const {
    return finite && k <= opt.exact.max_k && merged.head.size() <= opt.exact.max_items;
  }

  bool good_enough(const CapacityBracket& b) const {
    const double width = b.width();
    if (width <= 1e-12 * std::max(1.0, std::abs(b.upper))) return true;
    const double e = b.midpoint() - 2.0 * std::sqrt(vol * static_cast<double>(b.k));
    return width <= opt.tolerance * std::abs(e);
  }

  CapacityBracket closed(std::int64_t k) const {
    CapacityBracket b;
    b.k = k;
    b.exact = true;
    switch (spec.op()) {
      case DomainSpec::Op::kBall:
        b.lower = cap_ball(spec.a(), k);
        break;
      case DomainSpec::Op::kEllipsoid:
        b.lower = cap_ellipsoid(spec.a(), spec.b(), k);
        break;
      default:
        b.lower = cap_polydisc(spec.a(), spec.b(), k);
        break;
    }
    b.upper = b.lower;
    return b;
  }

  CapacityBracket weights_eval(std::int64_t k) const {
    CapacityBracket b;
    if (finite && merged.head.size() == 1) {
      // A single weight is a ball; its closed form has no budget limit.
      b.k = k;
      b.lower = b.upper = cap_ball(merged.head.front(), k);
      b.exact = true;
    } else if (exact_feasible(k)) {
      b = cap_union_exact(merged, k, opt.exact);
    } else {
      b = cap_union_bracket(merged, k, -1, opt.exact);
    }
    b.converged = good_enough(b);
    return b;
  }

  void ensure_convolution(std::int64_t kmax) {
    if (static_cast<std::int64_t>(conv_lower.size()) > kmax) return;
    if (kmax > opt.convolution_limit) {
      throw LimitExceeded("disjoint-union capacities limited to k <= " +
                          std::to_string(opt.convolution_limit));
    }
    const std::int64_t target =
        std::min(opt.convolution_limit,
                 std::max(kmax, 2 * static_cast<std::int64_t>(conv_lower.size())));
    std::vector<std::int64_t> ks(static_cast<std::size_t>(target + 1));
    std::iota(ks.begin(), ks.end(), 0);
    const auto len = ks.size();
    std::vector<double> lo(len, 0.0), hi(len, 0.0);
    std::vector<char> ok(len, 1);
    bool first = true;
    auto convolve = [&](std::vector<double>& acc, const std::vector<double>& other) {
      std::vector<double> res(len, -kInfinity);
      for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t j = 0; i + j < len; ++j) {
          res[i + j] = std::max(res[i + j], acc[i] + other[j]);
        }
      }
      acc.swap(res);
    };
    auto absorb = [&](const std::vector<double>& l, const std::vector<double>& u,
                      const std::vector<char>& c) {
      if (first) {
        lo = l;
        hi = u;
        ok = c;
        first = false;
        return;
      }
      convolve(lo, l);
      convolve(hi, u);
      // A union entry is unconverged if any entry it could depend on is.
      char all_ok = 1;
      for (std::size_t i = 0; i < len; ++i) {
        all_ok = static_cast<char>(all_ok && c[i] && ok[i]);
        ok[i] = all_ok;
      }
    };
    for (auto& [solver, mult] : parts) {
      const auto brackets = solver->sequence(ks);
      std::vector<double> l(len), u(len);
      std::vector<char> c(len);
      for (std::size_t i = 0; i < len; ++i) {
        l[i] = brackets[i].lower;
        u[i] = brackets[i].upper;
        c[i] = brackets[i].converged ? 1 : 0;
      }
      // Max-plus power by repeated squaring.
      std::vector<double> pl = l, pu = u, rl, ru;
      bool have = false;
      for (std::int64_t e = mult; e > 0; e >>= 1) {
        if (e & 1) {
          if (!have) {
            rl = pl;
            ru = pu;
            have = true;
          } else {
            convolve(rl, pl);
            convolve(ru, pu);
          }
        }
        if (e > 1) {
          std::vector<double> sl = pl, su = pu;
          convolve(pl, sl);
          convolve(pu, su);
        }
      }
      absorb(rl, ru, c);
    }
    conv_lower = std::move(lo);
    conv_upper = std::move(hi);
    conv_converged = std::move(ok);
  }

  CapacityBracket convolution_eval(std::int64_t k) const {
    CapacityBracket b;
    b.k = k;
    const auto i = static_cast<std::size_t>(k);
    b.lower = conv_lower[i];
    b.upper = conv_upper[i];
    b.exact = b.lower == b.upper;
    b.converged = conv_converged[i] != 0;
    return b;
  }

  CapacityBracket bracket(std::int64_t k) {
    if (k < 0) throw DomainError("capacity index must be >= 0");
    switch (mode) {
      case Mode::kClosed:
        return closed(k);
      case Mode::kScale: {
        CapacityBracket b = child->bracket(k);
        b.lower *= factor;
        b.upper *= factor;
        return b;
      }
      case Mode::kWeights: {
        for (;;) {
          CapacityBracket b = weights_eval(k);
          if (b.converged || !can_refine()) return b;
          refine();
        }
      }
      case Mode::kConvolution:
        ensure_convolution(k);
        return convolution_eval(k);
    }
    return {};
  }

  CapacityBracket evaluate(std::int64_t k) const {
    switch (mode) {
      case Mode::kClosed:
        return closed(k);
      case Mode::kScale: {
        CapacityBracket b = child->impl_->evaluate(k);
        b.lower *= factor;
        b.upper *= factor;
        return b;
      }
      case Mode::kWeights:
        return weights_eval(k);
      case Mode::kConvolution:
        return convolution_eval(k);
    }
    return {};
  }

  std::vector<CapacityBracket> sequence(const std::vector<std::int64_t>& ks) {
    std::vector<CapacityBracket> out(ks.size());
    if (ks.empty()) return out;
    for (auto k : ks) {
      if (k < 0) throw DomainError("capacity index must be >= 0");
    }
    const std::int64_t kmax = *std::max_element(ks.begin(), ks.end());
    const unsigned threads = opt.threads == 0 ? default_thread_count() : opt.threads;
    switch (mode) {
      case Mode::kClosed:
        return parallel_map<CapacityBracket>(ks.size(), threads,
                                             [&](std::size_t i) { return closed(ks[i]); });
      case Mode::kScale: {
        out = child->sequence(ks);
        for (auto& b : out) {
          b.lower *= factor;
          b.upper *= factor;
        }
        return out;
      }
      case Mode::kConvolution:
        ensure_convolution(kmax);
        for (std::size_t i = 0; i < ks.size(); ++i) out[i] = convolution_eval(ks[i]);
        return out;
      case Mode::kWeights:
        break;
    }
    if (exact_feasible(kmax)) {
      if (static_cast<std::int64_t>(exact_values.size()) <= kmax) {
        exact_values = cap_union_exact_sequence(merged.head, kmax, opt.exact);
      }
      for (std::size_t i = 0; i < ks.size(); ++i) {
        CapacityBracket& b = out[i];
        b.k = ks[i];
        b.lower = b.upper = exact_values[static_cast<std::size_t>(ks[i])];
        b.exact = true;
      }
      return out;
    }
    // Refine against the largest index first; smaller ones usually follow.
    bracket(kmax);
    out = parallel_map<CapacityBracket>(ks.size(), threads,
                                        [&](std::size_t i) { return weights_eval(ks[i]); });
    std::vector<std::size_t> order(ks.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return ks[l] > ks[r]; });
    for (std::size_t i : order) {
      if (!out[i].converged && can_refine()) out[i] = bracket(ks[i]);
    }
    return out;
  }
};

CapacitySolver::CapacitySolver(DomainSpec spec, CapacityOptions options)
    : impl_(std::make_unique<Impl>(std::move(spec), options)) {}
CapacitySolver::~CapacitySolver() = default;
CapacitySolver::CapacitySolver(CapacitySolver&&) noexcept = default;
CapacitySolver& CapacitySolver::operator=(CapacitySolver&&) noexcept = default;

const DomainSpec& CapacitySolver::spec() const { return impl_->spec; }
double CapacitySolver::volume() const { return impl_->vol; }
CapacityBracket CapacitySolver::bracket(std::int64_t k) { return impl_->bracket(k); }
std::vector<CapacityBracket> CapacitySolver::sequence(const std::vector<std::int64_t>& ks) {
  return impl_->sequence(ks);
}
WeightSequence CapacitySolver::weights() const {
  if (impl_->mode != Impl::Mode::kWeights) {
    throw DomainError("weights() needs a domain built from balls and concave toric pieces");
  }
  return impl_->merged;
}

CapacityBracket cap_spec(const DomainSpec& spec, std::int64_t k, double tolerance) {
  CapacityOptions opt;
  opt.tolerance = tolerance;
  CapacitySolver solver(spec, opt);
  return solver.bracket(k);
}

std::vector<CapacityBracket> cap_sequence(const DomainSpec& spec,
                                          const std::vector<std::int64_t>& ks,
                                          CapacityOptions options) {
  CapacitySolver solver(spec, options);
  return solver.sequence(ks);
}

}  // namespace echlab
