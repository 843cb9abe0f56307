// Copyright 2026 The shiftspec Authors
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

#include "shiftspec/weights.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "shiftspec/errors.hpp"

namespace shiftspec {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_weight(double v) {
  if (!std::isfinite(v) || v <= 0) {
    throw InvalidArgument("weights must be finite and positive");
  }
}

double log_geomean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += std::log(x);
  return s / static_cast<double>(v.size());
}

// Scans log window sums for starts k in [1, last] with a sliding window and
// reduces them with `pick`.
template <class Pick>
double scan_log_windows(const WeightSequence& w, std::size_t n, std::size_t last,
                        double init, Pick pick) {
  if (last == 0) return init;
  double acc = init;
  double s = log_window_product(w, 1, n);
  acc = pick(acc, s);
  for (std::size_t k = 2; k <= last; ++k) {
    s += std::log(w(k + n - 1)) - std::log(w(k - 1));
    // Re-anchor periodically so sliding round-off cannot accumulate.
    if (k % 1024 == 0) s = log_window_product(w, k, n);
    acc = pick(acc, s);
  }
  return acc;
}

double log_tail_extreme(const WeightSequence& w, std::size_t n, bool wantMin) {
  const std::size_t p = w.prefix().size();
  const auto pick = [wantMin](double a, double b) {
    return wantMin ? std::min(a, b) : std::max(a, b);
  };
  const double init = wantMin ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
  // Windows that touch the prefix.
  double acc = scan_log_windows(w, n, p, init, pick);
  // Pure-tail windows.
  return std::visit(
      Overloaded{
          [&](const ConstantTail& t) { return pick(acc, n * std::log(t.value)); },
          [&](const PeriodicTail& t) {
            double best = init;
            for (std::size_t j = 0; j < t.values.size(); ++j) {
              best = pick(best, log_window_product(w, p + 1 + j, n));
            }
            return pick(acc, best);
          },
          [&](const DoublingBlocksTail& t) {
            // Blocks grow without bound, so a window of n equal values exists
            // for both a and b; those are the pure-tail extremes.
            const double v = wantMin ? std::min(t.a, t.b) : std::max(t.a, t.b);
            return pick(acc, n * std::log(v));
          },
      },
      w.tail());
}

}  // namespace

WeightSequence::WeightSequence(std::vector<double> prefix, WeightTail tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  for (double v : prefix_) check_weight(v);
  std::visit(Overloaded{
                 [](const ConstantTail& t) { check_weight(t.value); },
                 [](const PeriodicTail& t) {
                   if (t.values.empty()) {
                     throw InvalidArgument("periodic tail needs at least one value");
                   }
                   for (double v : t.values) check_weight(v);
                 },
                 [](const DoublingBlocksTail& t) {
                   check_weight(t.a);
                   check_weight(t.b);
                 },
             },
             tail_);
}

double WeightSequence::operator()(std::size_t k) const {
  if (k == 0) throw InvalidArgument("weight index starts at 1");
  if (k <= prefix_.size()) return prefix_[k - 1];
  const std::size_t j = k - prefix_.size();
  return std::visit(Overloaded{
                        [](const ConstantTail& t) { return t.value; },
                        [j](const PeriodicTail& t) {
                          return t.values[(j - 1) % t.values.size()];
                        },
                        [j](const DoublingBlocksTail& t) {
                          // Block i covers tail positions [2^i, 2^{i+1}).
                          const auto block = std::bit_width(j) - 1;
                          return block % 2 == 0 ? t.a : t.b;
                        },
                    },
                    tail_);
}

double WeightSequence::sup() const {
  double s = std::visit(Overloaded{
                            [](const ConstantTail& t) { return t.value; },
                            [](const PeriodicTail& t) {
                              return *std::max_element(t.values.begin(), t.values.end());
                            },
                            [](const DoublingBlocksTail& t) { return std::max(t.a, t.b); },
                        },
                        tail_);
  for (double v : prefix_) s = std::max(s, v);
  return s;
}

double WeightSequence::inf() const {
  double s = std::visit(Overloaded{
                            [](const ConstantTail& t) { return t.value; },
                            [](const PeriodicTail& t) {
                              return *std::min_element(t.values.begin(), t.values.end());
                            },
                            [](const DoublingBlocksTail& t) { return std::min(t.a, t.b); },
                        },
                        tail_);
  for (double v : prefix_) s = std::min(s, v);
  return s;
}

WeightSequence WeightSequence::scaled(double t) const {
  std::vector<double> p = prefix_;
  for (double& v : p) v *= t;
  WeightTail tail = std::visit(
      Overloaded{
          [t](const ConstantTail& c) -> WeightTail { return ConstantTail{c.value * t}; },
          [t](const PeriodicTail& c) -> WeightTail {
            auto v = c.values;
            for (double& x : v) x *= t;
            return PeriodicTail{std::move(v)};
          },
          [t](const DoublingBlocksTail& c) -> WeightTail {
            return DoublingBlocksTail{c.a * t, c.b * t};
          },
      },
      tail_);
  return {std::move(p), std::move(tail)};
}

double log_window_product(const WeightSequence& w, std::size_t k, std::size_t n) {
  if (k == 0 || n == 0) throw InvalidArgument("window_product needs k >= 1 and n >= 1");
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += std::log(w(k + i));
  return s;
}

double window_product(const WeightSequence& w, std::size_t k, std::size_t n) {
  return std::exp(log_window_product(w, k, n));
}

SpectralProfile spectral_profile(const WeightSequence& w) {
  // A finite prefix drops out of every n-th root limit, so only the tail
  // matters here.
  return std::visit(
      Overloaded{
          [](const ConstantTail& t) {
            return SpectralProfile{t.value, t.value, t.value, Exactness::Exact, 0, 0};
          },
          [](const PeriodicTail& t) {
            const double g = std::exp(log_geomean(t.values));
            return SpectralProfile{g, g, g, Exactness::Exact, 0, 0};
          },
          [](const DoublingBlocksTail& t) {
            const double hi = std::max(t.a, t.b);
            const double lo = std::min(t.a, t.b);
            // Running log-means oscillate between (2 lo + hi)/3 and
            // (lo + 2 hi)/3 at block ends; the liminf is the smaller one.
            const double r3 = std::exp((std::log(hi) + 2 * std::log(lo)) / 3);
            return SpectralProfile{hi, lo, r3, Exactness::Exact, 0, 0};
          },
      },
      w.tail());
}

SpectralProfile estimate_spectral_profile(const WeightSequence& w,
                                          const SweepBudget& budget) {
  const std::size_t nMax = std::max<std::size_t>(budget.maxWindow, 2);
  const std::size_t kMax = std::max<std::size_t>(budget.maxStart, 4);
  const std::size_t len = std::max(kMax + nMax, kMax);
  // Finitely many leading weights change every window product by a bounded
  // factor, so only starts in the upper half of the range are swept.
  const std::size_t kMin = kMax / 2 + 1;

  std::vector<double> logSum(len + 1, 0.0);
  for (std::size_t j = 1; j <= len; ++j) logSum[j] = logSum[j - 1] + std::log(w(j));

  // sup_k P(k,n) is submultiplicative and inf_k P(k,n) supermultiplicative
  // in n, so their n-th roots converge to inf_n and sup_n respectively.
  auto outer = [&](std::size_t nLimit) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= nLimit; ++n) {
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t k = kMin; k <= kMax; ++k) {
        hi = std::max(hi, logSum[k + n - 1] - logSum[k - 1]);
      }
      best = std::min(best, hi / static_cast<double>(n));
    }
    return std::exp(best);
  };
  auto inner = [&](std::size_t nLimit) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= nLimit; ++n) {
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t k = kMin; k <= kMax; ++k) {
        lo = std::min(lo, logSum[k + n - 1] - logSum[k - 1]);
      }
      best = std::max(best, lo / static_cast<double>(n));
    }
    return std::exp(best);
  };
  // liminf of prefix means, read off the last half of the available range.
  auto prefixLiminf = [&](std::size_t m) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t n = m / 2; n <= m; ++n) {
      lo = std::min(lo, logSum[n] / static_cast<double>(n));
    }
    return std::exp(lo);
  };

  SpectralProfile p;
  p.exactness = Exactness::Estimated;
  p.windowSize = nMax;
  p.r1 = outer(nMax);
  p.r2 = inner(nMax);
  p.r3 = prefixLiminf(kMax);
  const double r1Half = outer(nMax / 2);
  const double r2Half = inner(nMax / 2);
  const double r3Half = prefixLiminf(kMax / 2);
  p.spread = std::max({std::abs(p.r1 - r1Half), std::abs(p.r2 - r2Half),
                       std::abs(p.r3 - r3Half)});
  return p;
}

double kappa_forward_power(const WeightSequence& w, std::size_t n) {
  if (n == 0) throw InvalidArgument("kappa_forward_power needs n >= 1");
  return std::exp(log_tail_extreme(w, n, true));
}

double norm_forward_power(const WeightSequence& w, std::size_t n) {
  if (n == 0) throw InvalidArgument("norm_forward_power needs n >= 1");
  return std::exp(log_tail_extreme(w, n, false));
}

double kappa_forward_power_scan(const WeightSequence& w, std::size_t n,
                                std::size_t maxStart) {
  if (n == 0 || maxStart == 0) {
    throw InvalidArgument("kappa_forward_power_scan needs n >= 1 and maxStart >= 1");
  }
  const double lo =
      scan_log_windows(w, n, maxStart, std::numeric_limits<double>::infinity(),
                       [](double a, double b) { return std::min(a, b); });
  return std::exp(lo);
}

}  // namespace shiftspec
