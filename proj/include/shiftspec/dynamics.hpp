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

#include <Eigen/Dense>

#include "shiftspec/jclass.hpp"

namespace shiftspec {

/// Finite window onto an l^inf vector. Coordinates 1..exactPrefix are exact
/// values of the intended infinite vector; the rest of the buffer is
/// truncation-affected and only carried along.
struct TruncatedVector {
  std::vector<Complex> coords;
  std::size_t exactPrefix = 0;

  std::size_t size() const { return coords.size(); }
  /// Coordinate k (1-based); zero beyond the buffer.
  Complex at(std::size_t k) const { return k >= 1 && k <= coords.size() ? coords[k - 1] : 0.0; }
  /// Sup norm over the exact prefix.
  double sup_exact() const;
  /// Sup norm over the whole buffer.
  double sup_buffer() const;

  static TruncatedVector zero(std::size_t n);
  static TruncatedVector constant(std::size_t n, Complex value);
  /// The k-th unit vector (1-based), fully exact.
  static TruncatedVector basis(std::size_t n, std::size_t k);

  bool operator==(const TruncatedVector&) const = default;
};

/// Sup norm of a - b over the first `count` coordinates.
double sup_distance(const TruncatedVector& a, const TruncatedVector& b, std::size_t count);

/// f(B_w)^n x for a polynomial map. The buffer length is kept; each
/// application consumes deg f exact coordinates (an exhausted prefix is
/// reported as exactPrefix 0, not as an error).
TruncatedVector apply(const OperatorSpec& op, const TruncatedVector& x, std::size_t n);

/// The preimage of z under B_w^{n0} with zero leading block:
/// x_{k+n0} = z_k / (w_k ... w_{k+n0-1}). Buffer and exact prefix grow by n0.
TruncatedVector preimage_power(const WeightSequence& w, const TruncatedVector& z,
                               std::size_t n0);

/// Solves (B_w - zeta) x = y for |zeta| < r2 by forward recurrence with
/// x_1 = 0. Throws NumericalFailure if the iterates exceed 1e6 ||y||.
TruncatedVector solve_factor_inner(const WeightSequence& w, Complex zeta,
                                   const TruncatedVector& y, double tol = 1e-9);

/// Solves (B_w - zeta) x = y for |zeta| > r1 with the Neumann series
/// -sum_j zeta^{-(j+1)} B_w^j y, stopped once the residual |zeta| ||next
/// term|| drops to tol ||y||. Throws NumericalFailure on slow convergence or when
/// the exact prefix runs out first.
TruncatedVector solve_factor_outer(const WeightSequence& w, Complex zeta,
                                   const TruncatedVector& y, double tol = 1e-9);

/// Solves f(B_w) x = y by factoring f = a prod (z - zeta_i). Roots outside
/// the closed r1 disk are inverted first, then the roots inside K_{r2}.
/// Throws DomainError if a root lies in the annulus (within tol).
TruncatedVector solve_poly(const OperatorSpec& op, const TruncatedVector& y, double tol = 1e-9);

struct WitnessStage {
  std::size_t m = 0;
  TruncatedVector x;         // T^{m n0} x = y
  TruncatedVector z;         // z = T^{n0} x, so T^{(m-1) n0} z = y
  double xNorm = 0;
  double zNorm = 0;
  double normBound = 0;      // C (1+eps)^{-m n0}
  double residual = 0;       // ||T^{m n0} x - y|| on the surviving exact prefix
  double residualZ = 0;      // ||T^{(m-1) n0} z - y|| on the surviving exact prefix
  double stepResidual = 0;   // ||T^{n0} x_m - x_{m-1}||, with x_0 = y
  std::size_t checkedPrefix = 0;
  bool withinBound = false;
};

struct MixingWitness {
  std::size_t n0 = 1;
  double epsilon = 0;
  double constant = 0;  // C
  std::vector<WitnessStage> stages;
  bool ok = false;      // every stage within its norm bound, step residuals <= tol relative
  std::string failure;
};

/// Builds x_m with T^{m n0} x_m = y and ||x_m|| <= C (1+eps)^{-m n0} for
/// T = f(B_w), stages m = 1..mMax. For f = z, n0 is the first power whose
/// kappa(S_w^n)^{1/n} reaches r2 and C = ||y||; otherwise 1 + eps is the
/// certified annulus bound, n0 is the tail period (1 for non-periodic tails)
/// and C = ||x_1|| (1+eps)^{n0}. Throws PreconditionFailed unless the
/// geometric route decides JCLASS, Unsupported for series maps and
/// NumericalFailure when the exact prefix is exhausted.
MixingWitness mixing_witness(const OperatorSpec& op, const TruncatedVector& y,
                             std::size_t mMax, double tol = 1e-9,
                             const GridBudget& budget = {});

/// e_lambda = (1, lambda/w_1, lambda^2/(w_1 w_2), ...), first N coordinates.
/// B_w e_lambda = lambda e_lambda. Requires |lambda| < r3.
TruncatedVector eigenvector(const WeightSequence& w, Complex lambda, std::size_t n);

struct SpanFit {
  Eigen::VectorXcd coefficients;
  double residual = 0;     // sup norm of target - sum c_i e_{lambda_i}, first N coordinates
  double residualL2 = 0;
  double condition = 0;    // ratio of extreme singular values
  bool illConditioned = false;
};

/// Least-squares fit of the target by eigenvectors e_lambda, lambda in the
/// given grid (all inside K_{r3}), on the first N coordinates.
SpanFit span_approximate(const WeightSequence& w, const TruncatedVector& target,
                         const std::vector<Complex>& lambdas, std::size_t n);

/// n equally spaced points on the circle |lambda - center| = radius.
std::vector<Complex> circle_grid(Complex center, double radius, std::size_t n);

enum class JSetVerdict { MemberCertified, HeuristicNonmember, Inconclusive };
const char* to_string(JSetVerdict v);

struct JSetOptions {
  double tol = 1e-6;                 // membership error target
  std::size_t maxSteps = 64;         // largest n tried for x_n
  double decayThreshold = 1e-6;      // relative sup of the last quarter for "decaying"
  std::size_t growthSteps = 16;
  std::size_t perturbationRuns = 4;
  double perturbation = 1e-3;
  std::uint64_t seed = 0;
  double solveTol = 1e-12;
  GridBudget budget;
};

struct MembershipCertificate {
  std::size_t target = 0;
  bool certified = false;
  std::size_t steps = 0;          // n with ||T^n x_n - y|| <= tol
  double finalError = 0;
  double perturbationNorm = 0;    // ||x_n - x||
  double orbitNorm = 0;           // ||T^n x||
  std::size_t checkedPrefix = 0;
};

struct EnvelopeRow {
  std::size_t n = 0;
  double prefixSup = 0;
  double tailSup = 0;
};

struct GrowthDiagnostic {
  double bound = 0;               // certified min |f| on the annulus
  double rate = 0;                // unperturbed tail growth rate
  double minRate = 0;             // over the perturbed runs (and the unperturbed one)
  double maxRate = 0;
  std::vector<EnvelopeRow> envelope;
};

struct JSetReport {
  JSetVerdict verdict = JSetVerdict::Inconclusive;
  bool decaying = false;
  std::vector<MembershipCertificate> memberships;
  std::optional<GrowthDiagnostic> growth;
};

/// For a decaying x, certifies y in J_T(x) for each target by x_n = x + u_n
/// with T^n u_n = y. For a non-decaying x, measures how fast the tail of
/// T^n x grows; a rate near the annulus bound is heuristic evidence that x is
/// not in A_T, never a proof. Requires a JCLASS decision.
JSetReport jset_experiment(const OperatorSpec& op, const TruncatedVector& x,
                           const std::vector<TruncatedVector>& targets,
                           const JSetOptions& options = {});

}  // namespace shiftspec
