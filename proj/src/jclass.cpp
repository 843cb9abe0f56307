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

#include "shiftspec/jclass.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <type_traits>

#include "shiftspec/errors.hpp"

namespace shiftspec {

const char* to_string(Decision d) {
  switch (d) {
    case Decision::JClass: return "JCLASS";
    case Decision::NotJClass: return "NOT_JCLASS";
    case Decision::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

const char* to_string(Route r) {
  switch (r) {
    case Route::Geometric: return "GEOMETRIC";
    case Route::Moduli: return "MODULI";
    case Route::ClosedForm: return "CLOSED_FORM";
  }
  return "GEOMETRIC";
}

namespace {

// For f = z the annulus minimum is r2 itself and z winds once around 0 on
// every circle, so both conditions collapse to r2 > 1.
Verdict closed_form_identity(const SpectralProfile& prof) {
  Verdict v;
  v.route = Route::ClosedForm;
  v.profile = prof;
  v.conditionA.lowerBound = v.conditionA.minSampled = prof.r2;
  v.conditionA.witnessPoint = prof.r2;
  v.conditionA.lipschitzBound = 1;
  v.conditionA.status = CertStatus::Certified;
  if (prof.r2 > 1) {
    v.conditionA.relation = ThresholdRelation::Above;
    v.conditionBEvaluated = true;
    v.conditionB.winding = 1;
    v.conditionB.valid = true;
    v.conditionB.minDistance = v.conditionB.distanceLowerBound = prof.r2;
    v.decision = Decision::JClass;
    v.margin = prof.r2 - 1;
    v.reason = "r2 > 1";
  } else {
    v.conditionA.relation = ThresholdRelation::AtOrBelow;
    v.decision = Decision::NotJClass;
    v.margin = 1 - prof.r2;
    v.reason = "r2 <= 1: |z| = r2 lies in the closed unit disk";
  }
  return v;
}

// Shared outcome of condition A. Returns true when the caller should go on
// to the second condition.
bool apply_condition_a(Verdict& v) {
  const CertifiedBound& a = v.conditionA;
  switch (a.relation) {
    case ThresholdRelation::AtOrBelow:
      v.decision = Decision::NotJClass;
      v.margin = 1 - std::max(0.0, a.zeroInside ? 0.0 : a.minSampled);
      v.reason = a.zeroInside ? "f has a zero in the annulus [r2, r1]"
                              : "witness point in the annulus with |f| <= 1";
      return false;
    case ThresholdRelation::Above:
      return true;
    default:
      v.decision = Decision::Undecided;
      v.margin = 0;
      v.reason = "min |f| on the annulus is within the decision width of 1";
      return false;
  }
}

double map_radius_limit(const HoloMap& f, double r1) {
  if (f.is_polynomial()) return 2 * r1;
  return std::min(2 * r1, 0.5 * (r1 + f.validity_radius()));
}

}  // namespace

Verdict decide_geometric(const OperatorSpec& op, const GridBudget& budget) {
  validate(op);
  const SpectralProfile prof = spectral_profile(op.weights);
  if (op.map.is_identity()) return closed_form_identity(prof);

  Verdict v;
  v.route = Route::Geometric;
  v.profile = prof;
  v.conditionA = min_modulus_on_annulus(op.map, {prof.r2, prof.r1}, budget, 1.0);
  if (!apply_condition_a(v)) return v;

  const Coverage cov = covers_closed_unit_disk(op.map, prof.r2, v.conditionA, budget);
  v.conditionBEvaluated = true;
  v.conditionB = cov.winding;
  if (!cov.valid) {
    v.decision = Decision::Undecided;
    v.reason = "winding number not certified within budget";
    return v;
  }
  const double distance = std::max(v.conditionA.lowerBound, cov.winding.distanceLowerBound);
  v.margin = std::min(v.conditionA.lowerBound, distance) - 1;
  if (cov.covered) {
    v.decision = Decision::JClass;
    v.reason = "min |f| > 1 on the annulus and f(K_r2) covers the closed unit disk";
  } else {
    v.decision = Decision::NotJClass;
    v.reason = "winding number 0: f has no zero in K_r2, so 0 is not covered";
  }
  return v;
}

Verdict decide_moduli(const OperatorSpec& op, const GridBudget& budget) {
  if (!op.map.is_polynomial()) throw Unsupported("the moduli route needs a polynomial map");
  validate(op);
  Verdict v;
  v.route = Route::Moduli;
  v.profile = spectral_profile(op.weights);
  v.conditionA = i_of_adjoint(op, budget, 1.0);
  if (!apply_condition_a(v)) {
    if (v.decision == Decision::NotJClass) v.reason = "i(T*) <= 1: " + v.reason;
    return v;
  }
  v.kernel = kernel_nontrivial(op);
  v.margin = v.conditionA.lowerBound - 1;
  switch (v.kernel->result) {
    case Tri::True:
      v.decision = Decision::JClass;
      v.reason = "i(T*) > 1 and f has a root in K_r3";
      break;
    case Tri::False:
      // Every factor B_w - zeta with |zeta| > r1 is invertible, so f(B_w) is injective.
      v.decision = Decision::NotJClass;
      v.reason = "i(T*) > 1 but every root of f lies outside the closed disk of radius r1";
      break;
    case Tri::Inconclusive:
      v.decision = Decision::Undecided;
      v.margin = 0;
      v.reason = "a root of f lies in [r3, r1]; the kernel test is inconclusive";
      break;
  }
  return v;
}

Verdict decide_unweighted(const HoloMap& f, const GridBudget& budget) {
  return decide_geometric({WeightSequence::constant(1.0), f}, budget);
}

bool certificates_complete(const Verdict& v) {
  if (v.decision != Decision::JClass) return false;
  const bool a = v.conditionA.status == CertStatus::Certified && v.conditionA.lowerBound > 1;
  const bool b = v.route == Route::Moduli
                     ? v.kernel && v.kernel->result == Tri::True
                     : v.conditionBEvaluated && v.conditionB.valid && v.conditionB.winding >= 1;
  return a && b;
}

ConsistencyReport cross_check(const OperatorSpec& op, const GridBudget& budget) {
  ConsistencyReport r;
  r.geometric = decide_geometric(op, budget);
  r.moduli = decide_moduli(op, budget);
  const Decision g = r.geometric.decision;
  const Decision m = r.moduli.decision;
  const double near = 2 * budget.width;
  if (g == m) {
    r.pass = true;
    r.detail = std::string("both routes: ") + to_string(g);
  } else if (g == Decision::Undecided || m == Decision::Undecided) {
    const Verdict& decided = g == Decision::Undecided ? r.moduli : r.geometric;
    r.pass = decided.margin < near;
    r.detail = std::string("one route abstained; the other decided ") +
               to_string(decided.decision) + (r.pass ? " near the threshold" : " with a wide margin");
  } else {
    r.pass = false;
    r.detail = std::string("contradiction: geometric ") + to_string(g) + ", moduli " + to_string(m);
  }
  return r;
}

double openness_radius(const OperatorSpec& op, const Verdict& v) {
  const double r1 = v.profile.r1;
  const double radius = map_radius_limit(op.map, r1);
  const double lip = std::max(lipschitz_bound(op.map, radius), 1e-300);
  const double cap = radius / r1 - 1;
  return std::min(v.margin / (4 * lip * r1), cap);
}

WeightSequence perturb_weights(const WeightSequence& w, double relDelta, std::uint64_t seed,
                               std::vector<double>* factors) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(1 - relDelta, 1 + relDelta);
  std::vector<double> used;
  auto next = [&] {
    used.push_back(u(rng));
    return used.back();
  };
  std::vector<double> prefix = w.prefix();
  for (double& x : prefix) x *= next();
  WeightTail tail = std::visit(
      [&](const auto& t) -> WeightTail {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ConstantTail>) {
          return ConstantTail{t.value * next()};
        } else if constexpr (std::is_same_v<T, PeriodicTail>) {
          PeriodicTail p = t;
          for (double& x : p.values) x *= next();
          return p;
        } else {
          const double a = t.a * next();
          return DoublingBlocksTail{a, t.b * next()};
        }
      },
      w.tail());
  if (factors) *factors = std::move(used);
  return WeightSequence(std::move(prefix), std::move(tail));
}

StabilityReport perturbation_stability(const OperatorSpec& op, double relDelta, std::size_t trials,
                                       std::uint64_t seed, const GridBudget& budget) {
  if (!(relDelta > 0) || relDelta >= 1) throw InvalidArgument("relDelta must lie in (0, 1)");
  StabilityReport rep;
  rep.base = decide_geometric(op, budget);
  rep.relDelta = relDelta;
  for (std::size_t t = 0; t < trials; ++t) {
    StabilityTrial trial;
    const WeightSequence w =
        perturb_weights(op.weights, relDelta, seed * 0x9E3779B97F4A7C15ULL + t, &trial.factors);
    trial.decision = decide_geometric({w, op.map}, budget).decision;
    trial.flipped = trial.decision != rep.base.decision;
    rep.flips += trial.flipped ? 1 : 0;
    rep.trials.push_back(std::move(trial));
  }
  return rep;
}

ProductReport product_preserves_jclass(const OperatorSpec& first, const OperatorSpec& second,
                                       const GridBudget& budget) {
  if (!(first.weights == second.weights)) {
    throw PreconditionFailed("product check needs both maps applied to the same weights");
  }
  if (!first.map.is_polynomial() || !second.map.is_polynomial()) {
    throw Unsupported("product check needs polynomial maps");
  }
  ProductReport r;
  r.first = decide_geometric(first, budget);
  r.second = decide_geometric(second, budget);
  if (r.first.decision != Decision::JClass || r.second.decision != Decision::JClass) {
    throw PreconditionFailed("product check needs two J-class factors");
  }
  const OperatorSpec prod{first.weights, multiply(first.map, second.map)};
  r.product = decide_geometric(prod, budget);
  r.productJClass = r.product.decision == Decision::JClass;

  // Plain-mode bounds are tight to the certification width, unlike the
  // early-stopping threshold mode used by the decision.
  r.iFirst = i_of_adjoint(first, budget);
  r.iSecond = i_of_adjoint(second, budget);
  r.iProduct = i_of_adjoint(prod, budget);
  // min|fg| >= min|f| min|g| >= L_f L_g, and the sampled minimum of fg sits
  // above the true one.
  r.submultiplicative = r.iProduct.minSampled >= r.iFirst.lowerBound * r.iSecond.lowerBound;
  return r;
}

}  // namespace shiftspec
