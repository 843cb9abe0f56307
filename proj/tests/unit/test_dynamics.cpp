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
#include <random>

#include "doctest.h"
#include "shiftspec/errors.hpp"
#include "shiftspec/dynamics.hpp"

using namespace shiftspec;
using doctest::Approx;

namespace {

OperatorSpec op_of(WeightSequence w, std::vector<Complex> coeffs) {
  return {std::move(w), HoloMap::polynomial(std::move(coeffs))};
}

TruncatedVector from(std::vector<Complex> c, std::size_t exact) { return {std::move(c), exact}; }

// Coordinate-wise (B_w x)_k = w_k x_{k+1}, written independently of apply().
TruncatedVector shift_once(const WeightSequence& w, const TruncatedVector& x) {
  TruncatedVector r = TruncatedVector::zero(x.size());
  for (std::size_t k = 1; k < x.size(); ++k) r.coords[k - 1] = w(k) * x.at(k + 1);
  r.exactPrefix = x.exactPrefix == 0 ? 0 : x.exactPrefix - 1;
  return r;
}

WeightSequence random_weights(std::mt19937_64& rng, double lo = 0.5, double hi = 2.5) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::uniform_int_distribution<int> kind(0, 2), per(1, 3), pre(0, 2);
  std::vector<double> prefix(static_cast<std::size_t>(pre(rng)));
  for (double& x : prefix) x = u(rng);
  switch (kind(rng)) {
    case 0: return {prefix, ConstantTail{u(rng)}};
    case 1: {
      std::vector<double> v(static_cast<std::size_t>(per(rng)));
      for (double& x : v) x = u(rng);
      return {prefix, PeriodicTail{v}};
    }
    default: return {prefix, DoublingBlocksTail{u(rng), u(rng)}};
  }
}

HoloMap random_map(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> deg(1, 3);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<Complex> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& x : c) x = {u(rng), u(rng)};
  return HoloMap::polynomial(c);
}

TruncatedVector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1, 1);
  TruncatedVector v = TruncatedVector::zero(n);
  for (auto& c : v.coords) c = {u(rng), u(rng)};
  v.exactPrefix = n;
  return v;
}

}  // namespace

TEST_CASE("apply examples") {
  const auto a = apply({WeightSequence::constant(1)}, from({1, 2, 3, 4}, 4), 1);
  CHECK(a.exactPrefix == 3);
  CHECK(a.at(1) == Complex(2));
  CHECK(a.at(2) == Complex(3));
  CHECK(a.at(3) == Complex(4));
  const auto b = apply({WeightSequence::constant(2)}, TruncatedVector::basis(8, 1), 1);
  CHECK(b.sup_exact() == 0);
  const auto c = apply(op_of(WeightSequence::constant(1), {1, 0, 1}), TruncatedVector::basis(8, 3), 1);
  CHECK(c.at(1) == Complex(1));
  CHECK(c.at(3) == Complex(1));
  CHECK(c.at(2) == Complex(0));
  CHECK(c.exactPrefix == 6);

  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const WeightSequence w = random_weights(rng);
    const TruncatedVector x = random_vector(rng, 40);
    auto expected = shift_once(w, shift_once(w, shift_once(w, x)));
    const auto got = apply({w}, x, 3);
    CHECK(got.exactPrefix == expected.exactPrefix);
    CHECK(sup_distance(got, expected, got.exactPrefix) <= 1e-12 * (1 + expected.sup_exact()));
  }
}

TEST_CASE("preimages of shift powers") {
  const auto a = preimage_power(WeightSequence::constant(2), TruncatedVector::constant(8, 1), 1);
  CHECK(a.at(1) == Complex(0));
  for (std::size_t k = 2; k <= 9; ++k) CHECK(a.at(k) == Complex(0.5));
  const auto b = preimage_power(WeightSequence::constant(2), TruncatedVector::basis(8, 1), 2);
  CHECK(b.at(3) == Complex(0.25));
  CHECK(b.sup_buffer() == 0.25);
  const auto c = preimage_power(WeightSequence::periodic({4, 1}), TruncatedVector::constant(8, 1), 2);
  for (std::size_t k = 3; k <= 10; ++k) CHECK(c.at(k) == Complex(0.25));

  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const WeightSequence w = random_weights(rng);
    const TruncatedVector z = random_vector(rng, 30);
    const std::size_t n0 = 1 + i % 4;
    const auto x = preimage_power(w, z, n0);
    const auto back = apply({w}, x, n0);
    CHECK(sup_distance(back, z, z.exactPrefix) <= 1e-12 * z.sup_exact());
    CHECK(x.sup_exact() <= z.sup_exact() / kappa_forward_power(w, n0) * (1 + 1e-12));
  }
}

TEST_CASE("inner factor solves") {
  const WeightSequence w2 = WeightSequence::constant(2);
  const auto a = solve_factor_inner(w2, 1, TruncatedVector::basis(16, 1));
  CHECK(a.at(1) == Complex(0));
  CHECK(a.at(2) == Complex(0.5));
  CHECK(a.at(3) == Complex(0.25));
  CHECK(a.at(4) == Complex(0.125));
  const auto b = solve_factor_inner(w2, 1, TruncatedVector::constant(64, 1));
  CHECK(b.sup_exact() <= 1);
  CHECK(std::abs(b.at(60) - 1.0) < 1e-12);
  const auto c = solve_factor_inner(w2, 0, TruncatedVector::constant(8, 1));
  CHECK(c == preimage_power(w2, TruncatedVector::constant(8, 1), 1));
}

TEST_CASE("outer factor solves") {
  const WeightSequence w1 = WeightSequence::constant(1);
  const auto a = solve_factor_outer(w1, 3, TruncatedVector::basis(8, 1));
  CHECK(std::abs(a.at(1) + 1.0 / 3) < 1e-15);
  CHECK(a.sup_exact() == Approx(1.0 / 3));
  const auto b = solve_factor_outer(w1, 2, TruncatedVector::basis(8, 2));
  CHECK(std::abs(b.at(2) + 0.5) < 1e-15);
  CHECK(std::abs(b.at(1) + 0.25) < 1e-15);
  const auto c = solve_factor_outer(WeightSequence::constant(2), 5, TruncatedVector::constant(256, 1));
  CHECK(c.sup_exact() <= 1.0 / 3 + 1e-9);
  CHECK(c.sup_exact() == Approx(1.0 / 3).epsilon(1e-6));
}

TEST_CASE("polynomial solves") {
  {
    const auto x = solve_poly({WeightSequence::constant(2)}, TruncatedVector::constant(8, 1));
    CHECK(x == preimage_power(WeightSequence::constant(2), TruncatedVector::constant(8, 1), 1));
  }
  {
    const OperatorSpec op = op_of(WeightSequence::constant(2), {1, 0, 1});
    const auto y = TruncatedVector::basis(64, 1);
    const auto x = solve_poly(op, y);
    const auto back = apply(op, x, 1);
    CHECK(sup_distance(back, y, back.exactPrefix) <= 1e-10);
  }
  {
    const OperatorSpec op = op_of(WeightSequence::constant(1), {0, -3, 1});
    const auto y = TruncatedVector::basis(128, 1);
    const auto x = solve_poly(op, y);
    const auto back = apply(op, x, 1);
    CHECK(sup_distance(back, y, back.exactPrefix) <= 1e-9);
  }
  CHECK_THROWS_AS(solve_poly(op_of(WeightSequence::blocks(2, 1), {-1.5, 1}), TruncatedVector::constant(64, 1)),
                  DomainError);
}

TEST_CASE("round trips for J-class operators") {
  std::mt19937_64 rng(3);
  int tested = 0, attempts = 0;
  while (tested < 100 && attempts < 2000) {
    ++attempts;
    const OperatorSpec op{random_weights(rng), random_map(rng)};
    if (decide_geometric(op).decision != Decision::JClass) continue;
    const auto y = random_vector(rng, 256);
    TruncatedVector x;
    try {
      x = solve_poly(op, y);
    } catch (const NumericalFailure&) {
      continue;  // outer root too close to r1 for the truncation length
    }
    const auto back = apply(op, x, 1);
    REQUIRE(back.exactPrefix >= 1);
    CHECK(sup_distance(back, y, back.exactPrefix) <= 1e-9 * y.sup_exact());
    ++tested;
  }
  CHECK(tested == 100);
}

TEST_CASE("mixing witness examples") {
  const auto a = mixing_witness({WeightSequence::constant(2)}, TruncatedVector::constant(64, 1), 5);
  CHECK(a.ok);
  CHECK(a.n0 == 1);
  CHECK(a.epsilon == 1);
  REQUIRE(a.stages.size() == 5);
  for (const auto& s : a.stages) {
    CHECK(s.xNorm == std::ldexp(1.0, -static_cast<int>(s.m)));
    CHECK(s.residual == 0);
    CHECK(s.residualZ == 0);
    CHECK(s.withinBound);
  }

  const auto b = mixing_witness(op_of(WeightSequence::constant(1), {0, 2}), TruncatedVector::basis(64, 1), 6);
  CHECK(b.ok);
  REQUIRE(b.stages.size() == 6);
  for (const auto& s : b.stages) CHECK(s.xNorm == Approx(std::ldexp(1.0, -static_cast<int>(s.m))).epsilon(1e-9));

  const auto c = mixing_witness({WeightSequence::constant(2)}, TruncatedVector::zero(64), 4);
  CHECK(c.ok);
  for (const auto& s : c.stages) CHECK(s.xNorm == 0);

  CHECK_THROWS_AS(mixing_witness({WeightSequence::constant(1)}, TruncatedVector::constant(64, 1), 3), PreconditionFailed);
  // z (z - 3) on the unweighted shift needs Neumann solves that eat the prefix.
  CHECK_THROWS_AS(mixing_witness(op_of(WeightSequence::constant(1), {0, -3, 1}), TruncatedVector::constant(16, 1), 20),
                  NumericalFailure);
}

TEST_CASE("the z-index identity of the witness") {
  const auto w = mixing_witness(op_of(WeightSequence::constant(1.5), {0.2, 2}), TruncatedVector::constant(200, 1), 4);
  CHECK(w.ok);
  for (const auto& s : w.stages) {
    CHECK(s.residualZ <= 1e-8);
    CHECK(s.zNorm <= s.xNorm * 10);
  }
}

TEST_CASE("witness norms decay at the certified rate") {
  std::mt19937_64 rng(4);
  int tested = 0, attempts = 0;
  while (tested < 60 && attempts < 3000) {
    ++attempts;
    const OperatorSpec op{random_weights(rng, 0.8, 3.0), random_map(rng)};
    if (decide_geometric(op).decision != Decision::JClass) continue;
    MixingWitness mw;
    try {
      mw = mixing_witness(op, random_vector(rng, 256), 4);
    } catch (const NumericalFailure&) {
      continue;
    }
    ++tested;
    CHECK(mw.epsilon > 0);
    for (const auto& s : mw.stages) {
      CHECK_MESSAGE(s.xNorm <= mw.constant * std::pow(1 + mw.epsilon, -static_cast<double>(s.m * mw.n0)) * (1 + 1e-9),
                    "stage ", s.m, " n0 ", mw.n0);
      CHECK(s.stepResidual <= 1e-9 * 1.0001 * std::max(1.0, s.xNorm) * 10);
    }
  }
  CHECK(tested >= 40);
}

TEST_CASE("eigenvectors") {
  const auto a = eigenvector(WeightSequence::constant(2), 1, 6);
  CHECK(a.at(1) == Complex(1));
  CHECK(a.at(2) == Complex(0.5));
  CHECK(a.at(3) == Complex(0.25));
  const auto b = eigenvector(WeightSequence::periodic({4, 1}), 1, 6);
  const std::vector<double> expected{1, 0.25, 0.25, 0.0625, 0.0625, 0.015625};
  for (std::size_t k = 1; k <= 6; ++k) CHECK(b.at(k) == Complex(expected[k - 1]));
  const auto z = eigenvector(WeightSequence::constant(2), 0, 6);
  CHECK(z == TruncatedVector::basis(6, 1));
  CHECK_THROWS_AS(eigenvector(WeightSequence::constant(2), 2, 6), PreconditionFailed);
}

TEST_CASE("eigenvector residual, decay and transport") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 50; ++i) {
    const WeightSequence w = random_weights(rng);
    const double r3 = spectral_profile(w).r3;
    const Complex lambda = std::polar(0.9 * r3 * u(rng), 6.283185307179586 * u(rng));
    const auto e = eigenvector(w, lambda, 128);
    const auto be = apply({w}, e, 1);
    double res = 0;
    for (std::size_t k = 1; k <= be.exactPrefix; ++k) res = std::max(res, std::abs(be.at(k) - lambda * e.at(k)));
    CHECK(res <= 1e-12 * std::max(1.0, e.sup_exact()));

    const OperatorSpec op{w, random_map(rng)};
    const auto fe = apply(op, e, 1);
    const Complex fl = eval(op.map, lambda);
    double tr = 0;
    for (std::size_t k = 1; k <= fe.exactPrefix; ++k) tr = std::max(tr, std::abs(fe.at(k) - fl * e.at(k)));
    CHECK(tr <= 1e-10 * std::max(1.0, e.sup_exact()));

    // Coordinates eventually shrink: the tail sup is below the head sup.
    double head = 0, tail = 0;
    for (std::size_t k = 1; k <= 64; ++k) head = std::max(head, std::abs(e.at(k)));
    for (std::size_t k = 100; k <= 128; ++k) tail = std::max(tail, std::abs(e.at(k)));
    CHECK(tail <= head);
  }
}

TEST_CASE("eigenvectors span the unit vectors") {
  const WeightSequence w = WeightSequence::constant(2);
  const auto grid = circle_grid(0, 0.5 * 2, 20);
  CHECK(grid.size() == 20);
  CHECK(std::abs(std::abs(grid[3]) - 1) < 1e-15);
  const auto a = span_approximate(w, TruncatedVector::basis(32, 1), grid, 32);
  CHECK(a.residual <= 1e-6);
  auto target = TruncatedVector::basis(32, 1);
  target.coords[1] = -1;
  const auto b = span_approximate(w, target, grid, 32);
  CHECK(b.residual <= 1e-5);
  CHECK(b.condition > 1);

  const Complex l0{0.3, 0.1};
  auto g = circle_grid(0, 0.5, 8);
  g.push_back(l0);
  const auto c = span_approximate(w, eigenvector(w, l0, 32), g, 32);
  CHECK(c.residual <= 1e-12);
  CHECK(std::abs(c.coefficients(8) - 1.0) <= 1e-8);
}

TEST_CASE("J-set experiments") {
  const OperatorSpec op{WeightSequence::constant(2)};
  const auto ones = TruncatedVector::constant(256, 1);
  const auto a = jset_experiment(op, eigenvector(op.weights, 0.5, 256), {ones});
  CHECK(a.verdict == JSetVerdict::MemberCertified);
  CHECK(a.decaying);
  REQUIRE(a.memberships.size() == 1);
  CHECK(a.memberships[0].certified);
  CHECK(a.memberships[0].finalError <= 1e-6);
  CHECK(a.memberships[0].perturbationNorm <= std::ldexp(1.0, -static_cast<int>(a.memberships[0].steps)) + 1e-12);

  const auto b = jset_experiment(op, TruncatedVector::zero(256), {ones, TruncatedVector::basis(256, 3)});
  CHECK(b.verdict == JSetVerdict::MemberCertified);
  for (const auto& m : b.memberships) CHECK(m.certified);

  const auto c = jset_experiment(op, ones, {ones});
  CHECK(c.verdict == JSetVerdict::HeuristicNonmember);
  CHECK_FALSE(c.decaying);
  REQUIRE(c.growth.has_value());
  CHECK(c.growth->rate == Approx(2).epsilon(0.1));
  CHECK(c.growth->bound == Approx(2).epsilon(1e-3));
  CHECK_FALSE(c.growth->envelope.empty());

  CHECK(std::string(to_string(JSetVerdict::HeuristicNonmember)) == "HEURISTIC_NONMEMBER");
  CHECK_THROWS_AS(jset_experiment({WeightSequence::constant(1)}, ones, {ones}), PreconditionFailed);
}

TEST_CASE("J-set experiments are deterministic") {
  const OperatorSpec op = op_of(WeightSequence::periodic({4, 1}), {0, 1.5});
  JSetOptions opt;
  opt.seed = 42;
  const auto a = jset_experiment(op, TruncatedVector::constant(256, 1), {}, opt);
  const auto b = jset_experiment(op, TruncatedVector::constant(256, 1), {}, opt);
  REQUIRE(a.growth.has_value());
  CHECK(a.growth->minRate == b.growth->minRate);
  CHECK(a.growth->maxRate == b.growth->maxRate);
}
