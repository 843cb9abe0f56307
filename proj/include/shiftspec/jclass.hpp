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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftspec/spectra.hpp"

namespace shiftspec {

enum class Decision { JClass, NotJClass, Undecided };
enum class Route { Geometric, Moduli, ClosedForm };

const char* to_string(Decision d);
const char* to_string(Route r);

/// Outcome of a J-class decision for f(B_w) together with its certificates.
///
/// Condition A is the minimum of |f| over the annulus [r2, r1] compared with
/// 1. Condition B is the winding number of f on |z| = r2 around 0, evaluated
/// only once A holds. The margin is the distance to the nearest threshold
/// (0 when undecided).
struct Verdict {
  Decision decision = Decision::Undecided;
  Route route = Route::Geometric;
  SpectralProfile profile;
  CertifiedBound conditionA;
  bool conditionBEvaluated = false;
  WindingResult conditionB;
  std::optional<KernelCheck> kernel;  // moduli route only
  double margin = 0;
  std::string reason;
};

/// Decides f(B_w) through the annulus and coverage conditions. The identity
/// map is decided in closed form (r2 > 1).
Verdict decide_geometric(const OperatorSpec& op, const GridBudget& budget = {});

/// Decides through i(f(S_w)) > 1 and a nontrivial kernel of f(B_w).
/// Polynomial maps only (Unsupported otherwise).
Verdict decide_moduli(const OperatorSpec& op, const GridBudget& budget = {});

/// The unweighted shift: r1 = r2 = 1.
Verdict decide_unweighted(const HoloMap& f, const GridBudget& budget = {});

/// True when a JCLASS verdict carries both certificates: a certified bound
/// above 1 on the annulus and a valid winding number >= 1 (or the closed
/// form r2 > 1 for the identity map).
bool certificates_complete(const Verdict& v);

struct ConsistencyReport {
  bool pass = false;
  Verdict geometric;
  Verdict moduli;
  std::string detail;
};

/// Runs both routes. Passes when they agree, or when one abstains and the
/// other decided within twice the decision width of a threshold.
ConsistencyReport cross_check(const OperatorSpec& op, const GridBudget& budget = {});

/// Relative weight perturbation that keeps min |f| on the annulus within a
/// quarter of the verdict margin: margin / (4 * Lip(f, 2 r1) * r1).
double openness_radius(const OperatorSpec& op, const Verdict& v);

/// Multiplies every free weight parameter (prefix entries, constant, period
/// values, block values) by its own factor in [1 - relDelta, 1 + relDelta].
WeightSequence perturb_weights(const WeightSequence& w, double relDelta, std::uint64_t seed,
                               std::vector<double>* factors = nullptr);

struct StabilityTrial {
  std::vector<double> factors;
  Decision decision = Decision::Undecided;
  bool flipped = false;
};

struct StabilityReport {
  Verdict base;
  double relDelta = 0;
  std::vector<StabilityTrial> trials;
  std::size_t flips = 0;
  bool stable() const { return flips == 0; }
};

/// Re-decides `trials` perturbed copies (seeded per trial) and reports every
/// verdict that differs from the unperturbed one.
StabilityReport perturbation_stability(const OperatorSpec& op, double relDelta,
                                       std::size_t trials, std::uint64_t seed,
                                       const GridBudget& budget = {});

struct ProductReport {
  Verdict first;
  Verdict second;
  Verdict product;
  CertifiedBound iFirst;
  CertifiedBound iSecond;
  CertifiedBound iProduct;
  bool productJClass = false;
  bool submultiplicative = false;  // i(fg) >= i(f) i(g) up to certification slack
  bool pass() const { return productJClass && submultiplicative; }
};

/// For two J-class images of the same B_w, decides (fg)(B_w) and checks
/// i((fg)(S_w)) >= i(f(S_w)) i(g(S_w)). Throws PreconditionFailed unless
/// both factors are J-class and the weights agree.
ProductReport product_preserves_jclass(const OperatorSpec& first, const OperatorSpec& second,
                                       const GridBudget& budget = {});

}  // namespace shiftspec
