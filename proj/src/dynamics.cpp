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

#include "shiftspec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <type_traits>
#include <variant>

#include "shiftspec/errors.hpp"

namespace shiftspec {

double TruncatedVector::sup_exact() const {
  double s = 0;
  for (std::size_t k = 0; k < std::min(exactPrefix, coords.size()); ++k) s = std::max(s, std::abs(coords[k]));
  return s;
}

double TruncatedVector::sup_buffer() const {
  double s = 0;
  for (Complex c : coords) s = std::max(s, std::abs(c));
  return s;
}

TruncatedVector TruncatedVector::zero(std::size_t n) { return {std::vector<Complex>(n, 0.0), n}; }

TruncatedVector TruncatedVector::constant(std::size_t n, Complex value) {
  return {std::vector<Complex>(n, value), n};
}

TruncatedVector TruncatedVector::basis(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw InvalidArgument("basis index out of range");
  TruncatedVector v = zero(n);
  v.coords[k - 1] = 1.0;
  return v;
}

double sup_distance(const TruncatedVector& a, const TruncatedVector& b, std::size_t count) {
  double s = 0;
  for (std::size_t k = 1; k <= count; ++k) s = std::max(s, std::abs(a.at(k) - b.at(k)));
  return s;
}

namespace {

void require_polynomial(const OperatorSpec& op, const char* what) {
  if (!op.map.is_polynomial()) throw Unsupported(std::string(what) + " needs a polynomial map");
}

// (B_w v)_k = w_k v_{k+1}; the last buffer slot has no successor and becomes 0.
void shift_in_place(const WeightSequence& w, std::vector<Complex>& v) {
  for (std::size_t k = 0; k + 1 < v.size(); ++k) v[k] = w(k + 1) * v[k + 1];
  if (!v.empty()) v.back() = 0.0;
}

TruncatedVector apply_once(const OperatorSpec& op, const TruncatedVector& x) {
  const auto& a = op.map.coeffs();
  const std::size_t d = op.map.degree();
  // Horner in the operator: f(B)x = a_0 x + B(a_1 x + B(a_2 x + ...)).
  std::vector<Complex> v(x.coords.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[d] * x.coords[k];
  for (std::size_t j = d; j-- > 0;) {
    shift_in_place(op.weights, v);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += a[j] * x.coords[k];
  }
  return {std::move(v), x.exactPrefix > d ? x.exactPrefix - d : 0};
}

TruncatedVector right_inverse(const OperatorSpec& op, const TruncatedVector& y, double tol) {
  if (op.map.is_identity()) return preimage_power(op.weights, y, 1);
  return solve_poly(op, y, tol);
}

TruncatedVector add_padded(const TruncatedVector& x, const TruncatedVector& u) {
  TruncatedVector out;
  out.coords.assign(std::max(x.size(), u.size()), 0.0);
  for (std::size_t k = 1; k <= out.size(); ++k) out.coords[k - 1] = x.at(k) + u.at(k);
  out.exactPrefix = std::min(x.exactPrefix, u.exactPrefix);
  return out;
}

}  // namespace

TruncatedVector apply(const OperatorSpec& op, const TruncatedVector& x, std::size_t n) {
  require_polynomial(op, "apply");
  TruncatedVector out = x;
  for (std::size_t i = 0; i < n; ++i) out = apply_once(op, out);
  return out;
}

TruncatedVector preimage_power(const WeightSequence& w, const TruncatedVector& z, std::size_t n0) {
  if (n0 == 0) throw InvalidArgument("preimage_power needs n0 >= 1");
  TruncatedVector x;
  x.coords.assign(z.size() + n0, 0.0);
  for (std::size_t k = 1; k <= z.size(); ++k) {
    // Direct product keeps exact arithmetic for dyadic weights.
    double p = 1;
    for (std::size_t j = 0; j < n0; ++j) p *= w(k + j);
    x.coords[k + n0 - 1] = z.coords[k - 1] / p;
  }
  x.exactPrefix = z.exactPrefix + n0;
  return x;
}

TruncatedVector solve_factor_inner(const WeightSequence& w, Complex zeta, const TruncatedVector& y,
                                   double tol) {
  const double r2 = spectral_profile(w).r2;
  if (!(std::abs(zeta) < r2 - tol)) {
    throw DomainError("inner factor needs |zeta| < r2 - tol");
  }
  const double limit = 1e6 * std::max(y.sup_buffer(), 1e-300);
  TruncatedVector x;
  x.coords.assign(y.size() + 1, 0.0);
  for (std::size_t k = 1; k <= y.size(); ++k) {
    const Complex next = (y.coords[k - 1] + zeta * x.coords[k - 1]) / w(k);
    if (std::abs(next) > limit) {
      throw NumericalFailure("inner factor solve diverged at coordinate " + std::to_string(k + 1) +
                             ": |x| = " + std::to_string(std::abs(next)) +
                             " exceeds 1e6 ||y||");
    }
    x.coords[k] = next;
  }
  x.exactPrefix = y.exactPrefix + 1;
  return x;
}

TruncatedVector solve_factor_outer(const WeightSequence& w, Complex zeta, const TruncatedVector& y,
                                   double tol) {
  const double r1 = spectral_profile(w).r1;
  if (!(std::abs(zeta) > r1 + tol)) {
    throw DomainError("outer factor needs |zeta| > r1 + tol");
  }
  TruncatedVector x;
  x.coords.resize(y.size());
  std::vector<Complex> term(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) {
    term[k] = y.coords[k] / zeta;
    x.coords[k] = -term[k];
  }
  const double az = std::abs(zeta);
  const double target = tol * y.sup_buffer();
  std::size_t used = 0;  // applications of B_w folded into x
  for (;;) {
    shift_in_place(w, term);
    double s = 0;
    for (Complex& c : term) {
      c /= zeta;
      s = std::max(s, std::abs(c));
    }
    if (az * s <= target) break;
    if (used + 1 >= y.exactPrefix) {
      throw NumericalFailure("Neumann series did not converge before the exact prefix ran out");
    }
    ++used;
    for (std::size_t k = 0; k < term.size(); ++k) x.coords[k] -= term[k];
  }
  x.exactPrefix = y.exactPrefix - used;
  return x;
}

TruncatedVector solve_poly(const OperatorSpec& op, const TruncatedVector& y, double tol) {
  require_polynomial(op, "solve_poly");
  const auto& a = op.map.coeffs();
  const Complex lead = a.back();
  if (lead == Complex(0)) throw DomainError("the zero map has no preimages");
  TruncatedVector x = y;
  if (op.map.degree() >= 1) {
    const SpectralProfile prof = spectral_profile(op.weights);
    std::vector<Complex> inner, outer;
    for (Complex z : roots(op.map)) {
      if (std::abs(z) < prof.r2 - tol) {
        inner.push_back(z);
      } else if (std::abs(z) > prof.r1 + tol) {
        outer.push_back(z);
      } else {
        throw DomainError("root " + std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") +
                          std::to_string(z.imag()) + "i lies in the annulus [r2, r1]");
      }
    }
    // Later factors multiply an earlier factor's residual by up to ||B_w - zeta||,
    // so each factor is solved well below the requested tolerance.
    const double factorTol = tol * 1e-3;
    for (Complex z : outer) x = solve_factor_outer(op.weights, z, x, factorTol);
    for (Complex z : inner) x = solve_factor_inner(op.weights, z, x, factorTol);
  }
  for (Complex& c : x.coords) c /= lead;
  return x;
}

MixingWitness mixing_witness(const OperatorSpec& op, const TruncatedVector& y, std::size_t mMax,
                             double tol, const GridBudget& budget) {
  require_polynomial(op, "mixing_witness");
  const Verdict verdict = decide_geometric(op, budget);
  if (verdict.decision != Decision::JClass) {
    throw PreconditionFailed(std::string("mixing witness needs a J-class operator; decision was ") +
                             to_string(verdict.decision));
  }
  MixingWitness mw;
  const double yNorm = y.sup_exact();
  const bool identity = op.map.is_identity();
  if (identity) {
    // kappa(S_w^n)^{1/n} increases towards r2; take the first n that reaches it.
    const double r2 = verdict.profile.r2;
    double best = 0;
    for (std::size_t n = 1; n <= 64; ++n) {
      const double rate = std::pow(kappa_forward_power(op.weights, n), 1.0 / static_cast<double>(n));
      if (rate > best) {
        best = rate;
        mw.n0 = n;
      }
      if (rate >= r2 * (1 - 1e-12)) break;
    }
    mw.epsilon = best - 1;
    mw.constant = yNorm;
  } else {
    // Whole tail periods per stage, so the stage-1 constant sees every phase.
    mw.n0 = std::visit(
        [](const auto& t) -> std::size_t {
          if constexpr (std::is_same_v<std::decay_t<decltype(t)>, PeriodicTail>) {
            return t.values.size();
          } else {
            return 1;
          }
        },
        op.weights.tail());
    mw.epsilon = i_of_adjoint(op, budget).lowerBound - 1;
  }
  const double growth = std::pow(1 + mw.epsilon, static_cast<double>(mw.n0));

  mw.ok = true;
  TruncatedVector x = y;
  TruncatedVector previous = y;
  for (std::size_t m = 1; m <= mMax; ++m) {
    WitnessStage st;
    st.m = m;
    if (identity) {
      st.x = preimage_power(op.weights, y, m * mw.n0);
    } else {
      for (std::size_t j = 0; j < mw.n0; ++j) x = solve_poly(op, x, tol);
      st.x = x;
    }
    st.xNorm = st.x.sup_exact();
    if (!identity && m == 1) mw.constant = st.xNorm * growth;
    st.normBound = mw.constant / std::pow(growth, static_cast<double>(m));
    st.withinBound = st.xNorm <= st.normBound * (1 + 1e-12);

    st.z = apply(op, st.x, mw.n0);
    st.zNorm = st.z.sup_exact();
    const TruncatedVector back = apply(op, st.x, m * mw.n0);
    const TruncatedVector backZ = apply(op, st.z, (m - 1) * mw.n0);
    st.checkedPrefix = std::min(back.exactPrefix, y.exactPrefix);
    if (st.checkedPrefix == 0 && y.exactPrefix > 0) {
      throw NumericalFailure("exact prefix exhausted at stage " + std::to_string(m));
    }
    st.residual = sup_distance(back, y, st.checkedPrefix);
    st.residualZ = sup_distance(backZ, y, std::min(backZ.exactPrefix, y.exactPrefix));
    // The full round trip amplifies rounding by roughly (||T|| / (1+eps))^{m n0};
    // the stage step T^{n0} x_m = x_{m-1} is the well-conditioned check.
    st.stepResidual = sup_distance(st.z, previous, std::min(st.z.exactPrefix, previous.exactPrefix));
    const bool roundTrip = st.stepResidual <= tol * std::max(previous.sup_exact(), 1e-300) ||
                           st.stepResidual == 0;
    previous = st.x;
    if (mw.ok && !(st.withinBound && roundTrip)) {
      mw.ok = false;
      mw.failure = !st.withinBound ? "norm above the decay bound at stage " + std::to_string(m)
                                   : "round-trip residual above tolerance at stage " +
                                         std::to_string(m);
    }
    mw.stages.push_back(std::move(st));
  }
  return mw;
}

TruncatedVector eigenvector(const WeightSequence& w, Complex lambda, std::size_t n) {
  const double r3 = spectral_profile(w).r3;
  if (!(std::abs(lambda) < r3)) throw PreconditionFailed("eigenvector needs |lambda| < r3");
  TruncatedVector e;
  e.coords.resize(n);
  if (n > 0) e.coords[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) e.coords[k] = e.coords[k - 1] * lambda / w(k);
  e.exactPrefix = n;
  return e;
}

std::vector<Complex> circle_grid(Complex center, double radius, std::size_t n) {
  std::vector<Complex> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(center + std::polar(radius, 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
  }
  return out;
}

SpanFit span_approximate(const WeightSequence& w, const TruncatedVector& target,
                         const std::vector<Complex>& lambdas, std::size_t n) {
  if (n == 0) throw InvalidArgument("span_approximate needs N >= 1");
  // A target that is still nonzero at coordinate N is not finitely supported
  // in the window and is fitted without the support-size check.
  std::size_t support = 0;
  for (std::size_t k = 1; k <= n; ++k) support += target.at(k) != Complex(0) ? 1 : 0;
  if (lambdas.empty()) throw InvalidArgument("span_approximate needs a nonempty lambda grid");
  if (target.at(n) == Complex(0) && lambdas.size() < support) throw InvalidArgument("lambda grid smaller than the target support");
  const long rows = static_cast<long>(n);
  const long cols = static_cast<long>(lambdas.size());
  Eigen::MatrixXcd a(rows, cols);
  for (long i = 0; i < cols; ++i) {
    const TruncatedVector e = eigenvector(w, lambdas[static_cast<std::size_t>(i)], n);
    for (long k = 0; k < rows; ++k) a(k, i) = e.coords[static_cast<std::size_t>(k)];
  }
  Eigen::VectorXcd b(rows);
  for (long k = 0; k < rows; ++k) b(k) = target.at(static_cast<std::size_t>(k) + 1);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SpanFit fit;
  fit.coefficients = svd.solve(b);
  const Eigen::VectorXcd r = b - a * fit.coefficients;
  fit.residual = r.cwiseAbs().maxCoeff();
  fit.residualL2 = r.norm();
  const auto& sv = svd.singularValues();
  fit.condition = sv.size() && sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1)
                                                     : std::numeric_limits<double>::infinity();
  fit.illConditioned = fit.condition > 1e12;
  return fit;
}

const char* to_string(JSetVerdict v) {
  switch (v) {
    case JSetVerdict::MemberCertified: return "MEMBER_CERTIFIED";
    case JSetVerdict::HeuristicNonmember: return "HEURISTIC_NONMEMBER";
    case JSetVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace {

bool is_decaying(const TruncatedVector& x, double threshold) {
  const std::size_t ep = std::min(x.exactPrefix, x.size());
  double tail = 0;
  for (std::size_t k = 3 * ep / 4 + 1; k <= ep; ++k) tail = std::max(tail, std::abs(x.at(k)));
  return tail <= threshold * x.sup_exact();
}

MembershipCertificate certify_member(const OperatorSpec& op, const TruncatedVector& x,
                                     const TruncatedVector& y, const JSetOptions& opt) {
  MembershipCertificate c;
  TruncatedVector u = y;
  double bestError = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= opt.maxSteps; ++n) {
    u = right_inverse(op, u, opt.solveTol);
    const TruncatedVector xn = add_padded(x, u);
    const TruncatedVector image = apply(op, xn, n);
    const std::size_t check = std::min(image.exactPrefix, y.exactPrefix);
    if (check == 0) break;
    const double err = sup_distance(image, y, check);
    if (err < bestError || err <= opt.tol) {
      bestError = err;
      c.steps = n;
      c.finalError = err;
      c.perturbationNorm = u.sup_exact();
      c.orbitNorm = apply(op, x, n).sup_exact();
      c.checkedPrefix = check;
    }
    if (err <= opt.tol) {
      c.certified = true;
      break;
    }
  }
  return c;
}

// Sup over the first half and over the second half of the exact prefix.
EnvelopeRow envelope(const TruncatedVector& v, std::size_t n) {
  EnvelopeRow row;
  row.n = n;
  const std::size_t ep = std::min(v.exactPrefix, v.size());
  for (std::size_t k = 1; k <= ep; ++k) {
    double& slot = k <= ep / 2 ? row.prefixSup : row.tailSup;
    slot = std::max(slot, std::abs(v.at(k)));
  }
  return row;
}

}  // namespace

JSetReport jset_experiment(const OperatorSpec& op, const TruncatedVector& x,
                           const std::vector<TruncatedVector>& targets, const JSetOptions& opt) {
  require_polynomial(op, "jset_experiment");
  const Verdict verdict = decide_geometric(op, opt.budget);
  if (verdict.decision != Decision::JClass) {
    throw PreconditionFailed("J-set experiments need a J-class operator");
  }
  JSetReport rep;
  rep.decaying = is_decaying(x, opt.decayThreshold);
  if (rep.decaying) {
    bool all = !targets.empty();
    for (std::size_t i = 0; i < targets.size(); ++i) {
      MembershipCertificate c = certify_member(op, x, targets[i], opt);
      c.target = i;
      all = all && c.certified;
      rep.memberships.push_back(c);
    }
    rep.verdict = all ? JSetVerdict::MemberCertified : JSetVerdict::Inconclusive;
    return rep;
  }

  const std::size_t d = std::max<std::size_t>(op.map.degree(), 1);
  if (x.exactPrefix < 2 * opt.growthSteps * d + 2) {
    throw PreconditionFailed("exact prefix too short for the growth diagnostic");
  }
  GrowthDiagnostic g;
  g.bound = i_of_adjoint(op, opt.budget).lowerBound;
  g.minRate = std::numeric_limits<double>::infinity();
  g.maxRate = 0;
  const double scale = opt.perturbation * std::max(1.0, x.sup_exact());
  for (std::size_t run = 0; run <= opt.perturbationRuns; ++run) {
    TruncatedVector v = x;
    if (run > 0) {
      std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                        static_cast<std::uint32_t>(run)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (Complex& c : v.coords) c += scale * Complex(u(rng), u(rng)) / std::sqrt(2.0);
    }
    const double start = envelope(v, 0).tailSup;
    if (run == 0) g.envelope.push_back(envelope(v, 0));
    for (std::size_t n = 1; n <= opt.growthSteps; ++n) {
      v = apply(op, v, 1);
      if (run == 0) g.envelope.push_back(envelope(v, n));
    }
    const double end = envelope(v, opt.growthSteps).tailSup;
    const double rate = start > 0 ? std::pow(end / start, 1.0 / static_cast<double>(opt.growthSteps)) : 0;
    if (run == 0) g.rate = rate;
    g.minRate = std::min(g.minRate, rate);
    g.maxRate = std::max(g.maxRate, rate);
  }
  rep.verdict = g.minRate > 1 && g.minRate >= 0.9 * g.bound ? JSetVerdict::HeuristicNonmember
                                                           : JSetVerdict::Inconclusive;
  rep.growth = std::move(g);
  return rep;
}

}  // namespace shiftspec
