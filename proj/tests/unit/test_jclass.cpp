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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "shiftspec/errors.hpp"
#include "shiftspec/jclass.hpp"

using namespace shiftspec;

namespace {

OperatorSpec op_of(WeightSequence w, std::vector<Complex> coeffs) {
  return {std::move(w), HoloMap::polynomial(std::move(coeffs))};
}

std::vector<Complex> one_plus_zm(int m) {
  std::vector<Complex> c(static_cast<std::size_t>(m) + 1, 0.0);
  c[0] = 1;
  c.back() = 1;
  return c;
}

// Decision from a dense polar sample of |f| on the annulus and a root count
// inside K_{r2}. Near-threshold instances report Undecided.
Decision grid_oracle(const HoloMap& f, double r2, double r1, double band) {
  double minMod = INFINITY;
  const int nr = r1 > r2 ? 400 : 1, nt = 4000;
  for (int i = 0; i < nr; ++i) {
    const double r = nr == 1 ? r2 : r2 + (r1 - r2) * i / (nr - 1);
    for (int j = 0; j < nt; ++j) {
      minMod = std::min(minMod, std::abs(eval(f, std::polar(r, 2 * std::numbers::pi * j / nt))));
    }
  }
  if (std::abs(minMod - 1) < band) return Decision::Undecided;
  if (minMod < 1) return Decision::NotJClass;
  int inside = 0;
  for (auto z : roots(f)) inside += std::abs(z) < r2;
  return inside >= 1 ? Decision::JClass : Decision::NotJClass;
}

WeightSequence random_weights(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.4, 2.5);
  std::uniform_int_distribution<int> kind(0, 2), per(1, 3);
  switch (kind(rng)) {
    case 0: return WeightSequence::constant(u(rng));
    case 1: {
      std::vector<double> v(static_cast<std::size_t>(per(rng)));
      for (double& x : v) x = u(rng);
      return WeightSequence::periodic(v);
    }
    default: return WeightSequence::blocks(u(rng), u(rng));
  }
}

HoloMap random_map(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> deg(1, 4);
  std::normal_distribution<double> n(0, 1.2);
  std::vector<Complex> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& x : c) x = {n(rng), n(rng)};
  return HoloMap::polynomial(c);
}

}  // namespace

TEST_CASE("names") {
  CHECK(std::string(to_string(Decision::JClass)) == "JCLASS");
  CHECK(std::string(to_string(Decision::NotJClass)) == "NOT_JCLASS");
  CHECK(std::string(to_string(Decision::Undecided)) == "UNDECIDED");
  CHECK(std::string(to_string(Route::ClosedForm)) == "CLOSED_FORM");
}

TEST_CASE("geometric route examples") {
  const auto a = decide_geometric({WeightSequence::constant(2)});
  CHECK(a.decision == Decision::JClass);
  CHECK(certificates_complete(a));
  CHECK(decide_geometric({WeightSequence::constant(1)}).decision == Decision::NotJClass);
  CHECK(decide_geometric(op_of(WeightSequence::constant(1.5), one_plus_zm(2))).decision == Decision::JClass);
  CHECK(decide_geometric(op_of(WeightSequence::constant(1.4), one_plus_zm(2))).decision == Decision::NotJClass);
  const auto scaled = decide_geometric(op_of(WeightSequence::constant(1), {0, 2}));
  CHECK(scaled.decision == Decision::JClass);
  CHECK(scaled.route == Route::Geometric);
  CHECK(scaled.conditionBEvaluated);
  CHECK(scaled.conditionB.winding == 1);
  CHECK(scaled.margin > 0.9);
}

TEST_CASE("moduli route examples") {
  const auto a = decide_moduli({WeightSequence::constant(2)});
  CHECK(a.decision == Decision::JClass);
  REQUIRE(a.kernel.has_value());
  CHECK(a.kernel->result == Tri::True);
  CHECK(decide_moduli(op_of(WeightSequence::constant(2), {4, 1})).decision == Decision::NotJClass);
  CHECK(decide_geometric(op_of(WeightSequence::constant(2), {4, 1})).decision == Decision::NotJClass);
  CHECK(decide_moduli({WeightSequence::constant(1)}).decision == Decision::NotJClass);
  CHECK_THROWS_AS(decide_moduli({WeightSequence::constant(1), HoloMap::series({0, 2}, 1, 0.25, 3)}), Unsupported);
}

TEST_CASE("near-threshold instances abstain") {
  // min |z + 3| on |z| = 2 is exactly 1.
  const auto g = decide_geometric(op_of(WeightSequence::constant(2), {3, 1}));
  CHECK(g.decision == Decision::Undecided);
  CHECK(decide_moduli(op_of(WeightSequence::constant(2), {3, 1})).decision == Decision::Undecided);
  for (int m : {1, 2, 3}) {
    const auto op = op_of(WeightSequence::constant(std::pow(2.0, 1.0 / m)), one_plus_zm(m));
    CHECK(decide_geometric(op).decision == Decision::Undecided);
    CHECK(decide_moduli(op).decision == Decision::Undecided);
  }
}

TEST_CASE("unweighted shift") {
  CHECK(decide_unweighted(HoloMap::polynomial({0, 2})).decision == Decision::JClass);
  const auto b = decide_unweighted(HoloMap::polynomial({3, 1}));
  CHECK(b.decision == Decision::NotJClass);
  CHECK(b.conditionBEvaluated);
  CHECK(b.conditionB.winding == 0);
  const auto c = decide_unweighted(HoloMap::polynomial({0, 0, 2}));
  CHECK(c.decision == Decision::JClass);
  CHECK(c.conditionB.winding == 2);
}

TEST_CASE("cross-check examples") {
  const auto a = cross_check(op_of(WeightSequence::constant(2), one_plus_zm(2)));
  CHECK(a.pass);
  CHECK(a.geometric.decision == Decision::JClass);
  CHECK(a.moduli.decision == Decision::JClass);
  const auto b = cross_check(op_of(WeightSequence::constant(1.2), {1, 1}));
  CHECK(b.pass);
  CHECK(b.geometric.decision == Decision::NotJClass);
  CHECK(b.moduli.decision == Decision::NotJClass);
  CHECK(b.moduli.conditionA.lowerBound <= 0.2 + 1e-12);
}

TEST_CASE("routes agree on random instances") {
  std::mt19937_64 rng(101);
  int decided = 0;
  for (int i = 0; i < 50; ++i) {
    const OperatorSpec op{random_weights(rng), random_map(rng)};
    const auto r = cross_check(op);
    CHECK_MESSAGE(r.pass, r.detail);
    if (r.geometric.decision != Decision::Undecided && r.moduli.decision != Decision::Undecided) {
      CHECK(r.geometric.decision == r.moduli.decision);
      ++decided;
    }
  }
  CHECK(decided >= 40);
}

TEST_CASE("geometric decisions match a dense-grid oracle") {
  std::mt19937_64 rng(202);
  int compared = 0;
  for (int i = 0; i < 60; ++i) {
    const OperatorSpec op{random_weights(rng), random_map(rng)};
    const auto v = decide_geometric(op);
    const auto prof = spectral_profile(op.weights);
    const Decision oracle = grid_oracle(op.map, prof.r2, prof.r1, 1e-2);
    if (oracle == Decision::Undecided) continue;
    CHECK(v.decision == oracle);
    ++compared;
  }
  CHECK(compared >= 40);
}

TEST_CASE("closed-form thresholds for 1 + z^m") {
  for (int m : {1, 2, 3}) {
    const double c = std::pow(2.0, 1.0 / m);
    CHECK(decide_geometric(op_of(WeightSequence::constant(c - 0.05), one_plus_zm(m))).decision == Decision::NotJClass);
    CHECK(decide_geometric(op_of(WeightSequence::constant(c + 0.05), one_plus_zm(m))).decision == Decision::JClass);
  }
}

TEST_CASE("J-class verdicts carry both certificates") {
  std::mt19937_64 rng(303);
  for (int i = 0; i < 40; ++i) {
    const OperatorSpec op{random_weights(rng), random_map(rng)};
    const auto v = decide_geometric(op);
    if (v.decision != Decision::JClass) continue;
    CHECK(certificates_complete(v));
    CHECK(v.conditionA.lowerBound > 1);
    CHECK(v.conditionA.status == CertStatus::Certified);
    CHECK(v.conditionBEvaluated);
    CHECK(v.conditionB.valid);
    CHECK(v.conditionB.winding >= 1);
  }
}

TEST_CASE("scaling the weights up keeps J-class") {
  std::mt19937_64 rng(404);
  for (int i = 0; i < 30; ++i) {
    const WeightSequence w = random_weights(rng);
    if (decide_geometric({w}).decision != Decision::JClass) continue;
    for (double t : {1.0, 1.01, 1.5, 3.0}) CHECK(decide_geometric({w.scaled(t)}).decision != Decision::NotJClass);
  }
}

TEST_CASE("perturbation stability") {
  const auto a = perturbation_stability({WeightSequence::constant(2)}, 0.05, 20, 1);
  CHECK(a.base.decision == Decision::JClass);
  CHECK(a.trials.size() == 20);
  CHECK(a.stable());

  const auto b = perturbation_stability(op_of(WeightSequence::constant(1.45), one_plus_zm(2)), 0.01, 20, 2);
  CHECK(b.base.decision == Decision::JClass);
  CHECK(b.stable());

  const auto c = perturbation_stability({WeightSequence::constant(2)}, 0.6, 40, 3);
  CHECK(c.flips > 0);
  std::size_t flagged = 0;
  for (const auto& t : c.trials) {
    flagged += t.flipped;
    if (t.flipped) CHECK(t.decision != Decision::JClass);
    CHECK(t.factors.size() == 1);
  }
  CHECK(flagged == c.flips);

  CHECK_THROWS_AS(perturbation_stability({WeightSequence::constant(2)}, 1.5, 2, 1), InvalidArgument);
}

TEST_CASE("perturbations inside the openness radius never flip") {
  std::mt19937_64 rng(505);
  int checked = 0;
  for (int i = 0; i < 40 && checked < 12; ++i) {
    const OperatorSpec op{random_weights(rng), random_map(rng)};
    const auto v = decide_geometric(op);
    if (v.decision != Decision::JClass) continue;
    const double delta = openness_radius(op, v);
    REQUIRE(delta > 0);
    const auto rep = perturbation_stability(op, delta, 10, rng());
    CHECK(rep.stable());
    ++checked;
  }
  CHECK(checked >= 5);
}

TEST_CASE("perturbed weights stay within the requested factors") {
  std::vector<double> f;
  const WeightSequence w({1, 2}, PeriodicTail{{3, 4}});
  const WeightSequence p = perturb_weights(w, 0.1, 9, &f);
  REQUIRE(f.size() == 4);
  for (double x : f) {
    CHECK(x >= 0.9);
    CHECK(x <= 1.1);
  }
  CHECK(p(1) == doctest::Approx(1 * f[0]));
  CHECK(p(4) == doctest::Approx(4 * f[3]));
  CHECK(perturb_weights(w, 0.1, 9) == p);
}

TEST_CASE("products of J-class images") {
  const auto a = product_preserves_jclass(op_of(WeightSequence::constant(1), {0, 2}),
                                          op_of(WeightSequence::constant(1), {0, 2}));
  CHECK(a.pass());
  CHECK(a.iProduct.minSampled >= 4 - 1e-9);
  const auto b = product_preserves_jclass(op_of(WeightSequence::constant(1.5), {0, 2}),
                                          op_of(WeightSequence::constant(1.5), one_plus_zm(2)));
  CHECK(b.pass());
  const auto c = product_preserves_jclass(op_of(WeightSequence::constant(1), {0, 3}),
                                          op_of(WeightSequence::constant(1), {0, 3}));
  CHECK(c.pass());
  CHECK(c.product.decision == Decision::JClass);

  CHECK_THROWS_AS(product_preserves_jclass(op_of(WeightSequence::constant(1), {0, 2}),
                                           op_of(WeightSequence::constant(2), {0, 2})),
                  PreconditionFailed);
  CHECK_THROWS_AS(product_preserves_jclass(op_of(WeightSequence::constant(1), {0, 2}),
                                           op_of(WeightSequence::constant(1), {3, 1})),
                  PreconditionFailed);
}
