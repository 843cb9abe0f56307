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

#include "shiftspec/holo.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "parallel.hpp"
#include "shiftspec/errors.hpp"

namespace shiftspec {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2;
constexpr std::size_t kChunk = 4096;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void check_in_domain(const HoloMap& f, double rho, const char* what) {
  if (!f.is_polynomial() && !(rho < f.validity_radius())) {
    std::ostringstream msg;
    msg << what << ": radius " << rho << " is outside the validity radius "
        << f.validity_radius();
    throw DomainError(msg.str());
  }
}

void check_annulus(const HoloMap& f, const Annulus& ann) {
  if (!(ann.inner >= 0) || !(ann.inner <= ann.outer) || !std::isfinite(ann.outer)) {
    throw InvalidArgument("annulus needs 0 <= inner <= outer < infinity");
  }
  check_in_domain(f, ann.outer, "annulus");
}

struct Sample {
  double modulus = std::numeric_limits<double>::infinity();
  Complex point{};
};

// Minimum of |f| over n equally spaced points of the circle |z| = r (a single
// point when r == 0). Ties go to the lowest angle index.
Sample scan_circle(const HoloMap& f, double r, std::size_t n) {
  if (r == 0) return {std::abs(eval(f, 0.0)), 0.0};
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Sample> best(chunks);
  detail::for_each_chunk(n, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    Sample s;
    for (std::size_t j = begin; j < end; ++j) {
      const Complex z = std::polar(r, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
      const double m = std::abs(eval(f, z));
      if (m < s.modulus) s = {m, z};
    }
    best[c] = s;
  });
  Sample out;
  for (const auto& s : best) {
    if (s.modulus < out.modulus) out = s;
  }
  return out;
}

// Newton iteration from `start`, accepted only while the residual decreases.
Complex polish_root(const HoloMap& f, Complex start, int maxIter = 80) {
  Complex z = start;
  double res = std::abs(eval(f, z));
  for (int it = 0; it < maxIter && res > 0; ++it) {
    const Complex d = eval_derivative(f, z);
    if (d == Complex(0)) break;
    const Complex next = z - eval(f, z) / d;
    if (!finite(next)) break;
    const double nextRes = std::abs(eval(f, next));
    if (!(nextRes < res)) break;
    z = next;
    res = nextRes;
  }
  return z;
}

// Best-effort location of a zero of f inside the annulus, used only to
// report a witness once the argument principle has certified one exists.
std::optional<Complex> locate_zero(const HoloMap& f, const Annulus& ann) {
  const auto inside = [&](Complex z) {
    const double m = std::abs(z);
    return m >= ann.inner * (1 - 1e-12) && m <= ann.outer * (1 + 1e-12);
  };
  if (f.is_polynomial() && f.degree() >= 1) {
    std::optional<Complex> best;
    for (Complex z : roots(f)) {
      if (inside(z) && (!best || std::abs(eval(f, z)) < std::abs(eval(f, *best)))) best = z;
    }
    if (best) return best;
  }
  constexpr int kRad = 64;
  constexpr int kAng = 256;
  Complex start{};
  double bestMod = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kRad; ++i) {
    const double r = ann.inner + (ann.outer - ann.inner) * (i + 0.5) / kRad;
    for (int j = 0; j < kAng; ++j) {
      const Complex z = std::polar(r, kTwoPi * j / kAng);
      const double m = std::abs(eval(f, z));
      if (m < bestMod) {
        bestMod = m;
        start = z;
      }
    }
  }
  const Complex z = polish_root(f, start);
  if (inside(z)) return z;
  return std::nullopt;
}

// Threshold bookkeeping shared by the circle and grid scans.
enum class Round { Continue, Below, Above, Band };

Round classify(double lower, double minSampled, std::optional<double> threshold,
               double slack, double width) {
  if (!threshold) return slack <= width ? Round::Above : Round::Continue;
  const double t = *threshold;
  if (minSampled <= t - width) return Round::Below;
  if (lower >= t + width) return Round::Above;
  if (lower > t - width && minSampled < t + width) return Round::Band;
  return Round::Continue;
}

void finish(CertifiedBound& out, Round round, std::optional<double> threshold) {
  if (!threshold) {
    out.relation = ThresholdRelation::NotRequested;
    out.status = round == Round::Above ? CertStatus::Certified : CertStatus::Undecided;
    return;
  }
  switch (round) {
    case Round::Below:
      out.relation = ThresholdRelation::AtOrBelow;
      out.status = CertStatus::Certified;
      break;
    case Round::Above:
      out.relation = ThresholdRelation::Above;
      out.status = CertStatus::Certified;
      break;
    default:
      out.relation = ThresholdRelation::Undecided;
      out.status = CertStatus::Undecided;
      break;
  }
}

}  // namespace

HoloMap HoloMap::polynomial(std::vector<Complex> coeffs) {
  for (Complex a : coeffs) {
    if (!finite(a)) throw InvalidArgument("polynomial coefficients must be finite");
  }
  while (coeffs.size() > 1 && coeffs.back() == Complex(0)) coeffs.pop_back();
  if (coeffs.empty()) coeffs.push_back(0.0);
  HoloMap f;
  f.kind_ = Kind::Polynomial;
  f.coeffs_ = std::move(coeffs);
  f.validityRadius_ = std::numeric_limits<double>::infinity();
  return f;
}

HoloMap HoloMap::series(std::vector<Complex> coeffs, double tailBound, double tailRatio,
                        double validityRadius) {
  for (Complex a : coeffs) {
    if (!finite(a)) throw InvalidArgument("series coefficients must be finite");
  }
  if (coeffs.empty()) throw InvalidArgument("series needs at least one stored coefficient");
  if (!(tailRatio > 0 && tailRatio < 1)) throw InvalidArgument("series tailRatio must lie in (0,1)");
  if (!(tailBound >= 0) || !std::isfinite(tailBound)) {
    throw InvalidArgument("series tailBound must be finite and non-negative");
  }
  if (!(validityRadius > 0) || validityRadius * tailRatio > 1) {
    throw InvalidArgument("series validity radius must lie in (0, 1/tailRatio]");
  }
  HoloMap f;
  f.kind_ = Kind::Series;
  f.coeffs_ = std::move(coeffs);
  f.tailBound_ = tailBound;
  f.tailRatio_ = tailRatio;
  f.validityRadius_ = validityRadius;
  return f;
}

bool HoloMap::is_identity() const {
  return kind_ == Kind::Polynomial && coeffs_.size() == 2 && coeffs_[0] == Complex(0) &&
         coeffs_[1] == Complex(1);
}

HoloMap HoloMap::truncated(std::size_t count) const {
  if (count == 0) throw InvalidArgument("truncation keeps at least one coefficient");
  if (count >= coeffs_.size()) return *this;
  std::vector<Complex> kept(coeffs_.begin(), coeffs_.begin() + static_cast<long>(count));
  if (kind_ == Kind::Polynomial) {
    throw InvalidArgument("truncating a polynomial changes the map");
  }
  for (std::size_t n = count; n < coeffs_.size(); ++n) {
    if (std::abs(coeffs_[n]) > tailBound_ * std::pow(tailRatio_, static_cast<double>(n))) {
      throw InvalidArgument("dropped coefficient exceeds the tail bound");
    }
  }
  return series(std::move(kept), tailBound_, tailRatio_, validityRadius_);
}

Complex eval(const HoloMap& f, Complex z) {
  check_in_domain(f, std::abs(z), "eval");
  const auto& a = f.coeffs();
  Complex acc = a.back();
  for (std::size_t i = a.size() - 1; i-- > 0;) acc = acc * z + a[i];
  return acc;
}

Complex eval_derivative(const HoloMap& f, Complex z) {
  check_in_domain(f, std::abs(z), "eval_derivative");
  const auto& a = f.coeffs();
  if (a.size() < 2) return 0.0;
  Complex acc = a.back() * static_cast<double>(a.size() - 1);
  for (std::size_t i = a.size() - 1; i-- > 1;) acc = acc * z + a[i] * static_cast<double>(i);
  return acc;
}

double truncation_error_bound(const HoloMap& f, double rho) {
  if (f.is_polynomial()) return 0;
  check_in_domain(f, rho, "truncation_error_bound");
  const double x = f.tail_ratio() * rho;
  const auto next = static_cast<double>(f.coeffs().size());
  return f.tail_bound() * std::pow(x, next) / (1 - x);
}

double lipschitz_bound(const HoloMap& f, double radius) {
  if (!(radius >= 0)) throw InvalidArgument("lipschitz_bound needs radius >= 0");
  check_in_domain(f, radius, "lipschitz_bound");
  const auto& a = f.coeffs();
  double sum = 0;
  double power = 1;  // radius^{n-1}
  for (std::size_t n = 1; n < a.size(); ++n) {
    sum += static_cast<double>(n) * std::abs(a[n]) * power;
    power *= radius;
  }
  if (!f.is_polynomial()) {
    // sum_{n > N} n t q^n rho^{n-1} = t q * ((N+1) x^N - N x^{N+1}) / (1-x)^2
    const double x = f.tail_ratio() * radius;
    const auto big = static_cast<double>(a.size() - 1);
    sum += f.tail_bound() * f.tail_ratio() *
           ((big + 1) * std::pow(x, big) - big * std::pow(x, big + 1)) / ((1 - x) * (1 - x));
  }
  return sum;
}

HoloMap multiply(const HoloMap& f, const HoloMap& g) {
  if (!f.is_polynomial() || !g.is_polynomial()) {
    throw Unsupported("multiply is defined for polynomial maps only");
  }
  std::vector<Complex> c(f.coeffs().size() + g.coeffs().size() - 1, 0.0);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    for (std::size_t j = 0; j < g.coeffs().size(); ++j) c[i + j] += f.coeffs()[i] * g.coeffs()[j];
  }
  return HoloMap::polynomial(std::move(c));
}

std::vector<Complex> roots(const HoloMap& f) {
  if (!f.is_polynomial()) throw Unsupported("roots are available for polynomial maps only");
  const auto& a = f.coeffs();
  const std::size_t d = f.degree();
  if (d < 1) throw InvalidArgument("roots needs a polynomial of degree >= 1");

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<long>(d), static_cast<long>(d));
  for (std::size_t j = 0; j < d; ++j) {
    companion(0, static_cast<long>(j)) = -a[d - 1 - j] / a[d];
  }
  for (std::size_t i = 1; i < d; ++i) companion(static_cast<long>(i), static_cast<long>(i - 1)) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("companion eigenvalue solver failed");

  double scale = 0;
  for (Complex c : a) scale = std::max(scale, std::abs(c));
  const double limit = 1e-10 * (1 + scale);

  std::vector<Complex> out;
  out.reserve(d);
  std::ostringstream bad;
  for (long i = 0; i < solver.eigenvalues().size(); ++i) {
    const Complex z = polish_root(f, solver.eigenvalues()[i]);
    const double res = std::abs(eval(f, z));
    if (!(res <= limit)) bad << " " << z << " (residual " << res << ")";
    out.push_back(z);
  }
  if (!bad.str().empty()) throw NumericalFailure("root polish did not converge:" + bad.str());
  std::sort(out.begin(), out.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

WindingResult winding_number(const HoloMap& f, double radius, Complex target,
                             std::size_t initialSamples, std::size_t maxSamples) {
  if (!(radius > 0) || !std::isfinite(radius)) throw InvalidArgument("winding_number needs radius > 0");
  check_in_domain(f, radius, "winding_number");
  const double lip = lipschitz_bound(f, radius);

  WindingResult out;
  std::size_t n = std::max<std::size_t>(initialSamples, 8);
  std::vector<Complex> v;
  for (;;) {
    v.assign(n, 0.0);
    detail::for_each_chunk(n, kChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j) {
        v[j] = eval(f, std::polar(radius, kTwoPi * static_cast<double>(j) / static_cast<double>(n))) -
               target;
      }
    });
    double minAbs = std::numeric_limits<double>::infinity();
    for (Complex x : v) minAbs = std::min(minAbs, std::abs(x));
    const double arc = radius * kTwoPi / static_cast<double>(n);

    double total = 0;
    bool smallSteps = minAbs > 0;
    if (smallSteps) {
      for (std::size_t j = 0; j < n; ++j) {
        const double inc = std::arg(v[(j + 1) % n] / v[j]);
        if (std::abs(inc) >= std::numbers::pi / 2) smallSteps = false;
        total += inc;
      }
    }
    out.samples = n;
    out.minDistance = minAbs;
    out.distanceLowerBound = minAbs - lip * arc / 2;
    out.winding = static_cast<int>(std::lround(total / kTwoPi));
    if (smallSteps && minAbs > lip * arc) {
      out.valid = true;
      return out;
    }
    if (2 * n > maxSamples) {
      out.valid = false;
      return out;
    }
    n *= 2;
  }
}

CertifiedBound min_modulus_on_annulus_grid(const HoloMap& f, const Annulus& ann,
                                           const GridBudget& budget,
                                           std::optional<double> threshold) {
  check_annulus(f, ann);
  CertifiedBound out;
  out.lipschitzBound = lipschitz_bound(f, ann.outer);
  if (ann.outer == 0) {
    out.minSampled = out.lowerBound = std::abs(eval(f, 0.0));
    out.samples = 1;
    finish(out, classify(out.lowerBound, out.minSampled, threshold, 0, budget.width), threshold);
    return out;
  }

  std::size_t nAng = std::max<std::size_t>(budget.initialSamples, 8);
  Round round = Round::Continue;
  for (;;) {
    const double dTheta = kTwoPi / static_cast<double>(nAng);
    const double arcStep = ann.outer * dTheta;
    std::size_t nRad = 1;
    double dR = 0;
    if (ann.inner < ann.outer) {
      nRad = static_cast<std::size_t>(std::ceil((ann.outer - ann.inner) / arcStep)) + 1;
      dR = (ann.outer - ann.inner) / static_cast<double>(nRad - 1);
    }
    Sample best;
    for (std::size_t i = 0; i < nRad; ++i) {
      const double r = nRad == 1 ? ann.outer : ann.inner + dR * static_cast<double>(i);
      const Sample s = scan_circle(f, r, nAng);
      if (s.modulus < best.modulus) best = s;
    }
    out.samples += nRad * nAng;
    out.gridStep = std::max(dR, arcStep);
    out.minSampled = best.modulus;
    out.witnessPoint = best.point;
    const double slack = out.lipschitzBound * out.gridStep * kHalfSqrt2;
    out.lowerBound = out.minSampled - slack;
    round = classify(out.lowerBound, out.minSampled, threshold, slack, budget.width);
    if (round != Round::Continue) break;
    const std::size_t nextAng = 2 * nAng;
    const std::size_t nextRad =
        ann.inner < ann.outer
            ? static_cast<std::size_t>(std::ceil((ann.outer - ann.inner) / (arcStep / 2))) + 1
            : 1;
    if (nextAng * nextRad > budget.maxPoints) break;
    nAng = nextAng;
  }
  finish(out, round, threshold);
  return out;
}

CertifiedBound min_modulus_on_annulus(const HoloMap& f, const Annulus& ann,
                                      const GridBudget& budget, std::optional<double> threshold) {
  check_annulus(f, ann);
  if (ann.outer == 0) return min_modulus_on_annulus_grid(f, ann, budget, threshold);

  const bool proper = ann.inner < ann.outer;
  const std::size_t circles = proper ? 2 : 1;
  CertifiedBound out;
  out.lipschitzBound = lipschitz_bound(f, ann.outer);

  std::size_t n = std::max<std::size_t>(budget.initialSamples, 8);
  Round round = Round::Continue;
  double slack = 0;
  for (;;) {
    Sample best = scan_circle(f, ann.outer, n);
    out.samples += n;
    if (proper) {
      const Sample s = scan_circle(f, ann.inner, n);
      out.samples += ann.inner == 0 ? 1 : n;
      if (s.modulus < best.modulus) best = s;
    }
    out.gridStep = ann.outer * kTwoPi / static_cast<double>(n);
    out.minSampled = best.modulus;
    out.witnessPoint = best.point;
    slack = out.lipschitzBound * out.gridStep * kHalfSqrt2;
    out.lowerBound = out.minSampled - slack;
    round = classify(out.lowerBound, out.minSampled, threshold, slack, budget.width);
    if (round != Round::Continue) break;
    if (2 * n * circles > budget.maxPoints) break;
    n *= 2;
  }

  // The circle bound extends to the annulus only if f has no zero inside.
  if (proper && round != Round::Below && out.lowerBound > 0) {
    const WindingResult outer = winding_number(f, ann.outer, 0.0, 256, budget.windingMax);
    WindingResult inner;
    inner.valid = true;  // the inner "circle" of a disk is the point 0
    if (ann.inner > 0) inner = winding_number(f, ann.inner, 0.0, 256, budget.windingMax);
    if (!outer.valid || !inner.valid) {
      return min_modulus_on_annulus_grid(f, ann, budget, threshold);
    }
    if (outer.winding != inner.winding) {
      out.zeroInside = true;
      if (auto z = locate_zero(f, ann)) {
        const double m = std::abs(eval(f, *z));
        if (m < out.minSampled) {
          out.minSampled = m;
          out.witnessPoint = *z;
        }
      }
      out.lowerBound = std::min(0.0, out.minSampled - slack);
      out.status = CertStatus::Certified;
      out.relation = !threshold ? ThresholdRelation::NotRequested
                     : *threshold - budget.width >= 0 ? ThresholdRelation::AtOrBelow
                                                      : ThresholdRelation::Undecided;
      return out;
    }
  }
  finish(out, round, threshold);
  return out;
}

Coverage covers_closed_unit_disk(const HoloMap& f, double r2, const CertifiedBound& annulusCert,
                                 const GridBudget& budget) {
  if (annulusCert.status != CertStatus::Certified || !(annulusCert.lowerBound > 1)) {
    throw PreconditionFailed("coverage needs a certified bound > 1 on the annulus");
  }
  Coverage out;
  if (r2 == 0) {
    // K_0 is empty, so nothing is covered.
    out.winding.valid = true;
    out.winding.samples = 1;
    out.winding.minDistance = out.winding.distanceLowerBound = std::abs(eval(f, 0.0));
    out.valid = true;
    return out;
  }
  out.winding = winding_number(f, r2, 0.0, 256, budget.windingMax);
  out.valid = out.winding.valid;
  out.covered = out.valid && out.winding.winding >= 1;
  return out;
}

}  // namespace shiftspec
