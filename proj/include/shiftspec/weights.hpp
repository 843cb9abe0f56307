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

#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace shiftspec {

struct ConstantTail {
  double value;
  bool operator==(const ConstantTail&) const = default;
};

struct PeriodicTail {
  std::vector<double> values;
  bool operator==(const PeriodicTail&) const = default;
};

// Alternating blocks a, b, a, b, ... of lengths 1, 2, 4, 8, ...; the first
// block holds `a`.
struct DoublingBlocksTail {
  double a;
  double b;
  bool operator==(const DoublingBlocksTail&) const = default;
};

using WeightTail = std::variant<ConstantTail, PeriodicTail, DoublingBlocksTail>;

/// Positive bounded weight sequence w_1, w_2, ...: a finite prefix followed
/// by a structured tail. Immutable once constructed.
class WeightSequence {
 public:
  /// Throws InvalidArgument if any weight is not a finite positive number.
  WeightSequence(std::vector<double> prefix, WeightTail tail);

  static WeightSequence constant(double c) { return {{}, ConstantTail{c}}; }
  static WeightSequence periodic(std::vector<double> values) {
    return {{}, PeriodicTail{std::move(values)}};
  }
  static WeightSequence blocks(double a, double b) {
    return {{}, DoublingBlocksTail{a, b}};
  }

  /// w_k for k >= 1.
  double operator()(std::size_t k) const;

  const std::vector<double>& prefix() const { return prefix_; }
  const WeightTail& tail() const { return tail_; }

  double sup() const;
  double inf() const;

  /// Same structure with every weight multiplied by t > 0.
  WeightSequence scaled(double t) const;

  bool operator==(const WeightSequence&) const = default;

 private:
  std::vector<double> prefix_;
  WeightTail tail_;
};

/// log(w_k * ... * w_{k+n-1}).
double log_window_product(const WeightSequence& w, std::size_t k, std::size_t n);

/// w_k * ... * w_{k+n-1}, accumulated in log space.
double window_product(const WeightSequence& w, std::size_t k, std::size_t n);

enum class Exactness { Exact, Estimated };

struct SpectralProfile {
  double r1 = 0;  // limsup of windowed geometric means (spectral radius)
  double r2 = 0;  // liminf over windows (surjectivity radius)
  double r3 = 0;  // liminf of prefix geometric means (point-spectrum radius)
  Exactness exactness = Exactness::Exact;
  std::size_t windowSize = 0;  // Estimated only
  double spread = 0;           // Estimated only
};

/// Closed-form radii for the structured tails. Always Exact.
SpectralProfile spectral_profile(const WeightSequence& w);

struct SweepBudget {
  std::size_t maxWindow = 128;   // N_max
  std::size_t maxStart = 4096;   // K_max
  double tolerance = 1e-3;
};

/// Numeric window sweep, independent of the closed forms. `spread` is the
/// change between the half-budget and full-budget values; a spread above
/// `budget.tolerance` means the sweep has not converged.
SpectralProfile estimate_spectral_profile(const WeightSequence& w,
                                          const SweepBudget& budget = {});

inline bool converged(const SpectralProfile& p, const SweepBudget& budget = {}) {
  return p.exactness == Exactness::Exact || p.spread <= budget.tolerance;
}

/// kappa(S_w^n) = inf_k window_product(w, k, n), exact for structured tails.
double kappa_forward_power(const WeightSequence& w, std::size_t n);

/// Same quantity restricted to k <= maxStart; an estimate for arbitrary tails.
double kappa_forward_power_scan(const WeightSequence& w, std::size_t n,
                                std::size_t maxStart);

/// ||S_w^n|| = sup_k window_product(w, k, n), exact for structured tails.
double norm_forward_power(const WeightSequence& w, std::size_t n);

}  // namespace shiftspec
