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

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace shiftspec {

using Complex = std::complex<double>;

/// Holomorphic map given by its power series around 0: either a polynomial
/// or a series whose unstored coefficients obey |a_n| <= tailBound *
/// tailRatio^n. Coefficients are stored in ascending degree.
class HoloMap {
 public:
  enum class Kind { Polynomial, Series };

  /// Trailing zero coefficients are dropped; the zero map keeps one
  /// coefficient.
  static HoloMap polynomial(std::vector<Complex> coeffs);
  /// Requires 0 < tailRatio < 1, tailBound >= 0 and
  /// 0 < validityRadius <= 1 / tailRatio.
  static HoloMap series(std::vector<Complex> coeffs, double tailBound, double tailRatio,
                        double validityRadius);
  static HoloMap identity() { return polynomial({0.0, 1.0}); }

  Kind kind() const { return kind_; }
  bool is_polynomial() const { return kind_ == Kind::Polynomial; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  double tail_bound() const { return tailBound_; }
  double tail_ratio() const { return tailRatio_; }
  /// Infinity for polynomials.
  double validity_radius() const { return validityRadius_; }

  /// Degree of the stored coefficient list.
  std::size_t degree() const { return coeffs_.size() - 1; }
  bool is_identity() const;

  /// Same map with only the first `count` coefficients stored. Throws if a
  /// dropped coefficient violates the tail bound.
  HoloMap truncated(std::size_t count) const;

  bool operator==(const HoloMap&) const = default;

 private:
  HoloMap() = default;

  Kind kind_ = Kind::Polynomial;
  std::vector<Complex> coeffs_;
  double tailBound_ = 0;
  double tailRatio_ = 0;
  double validityRadius_ = 0;
};

/// Horner evaluation of the stored coefficients. Series maps throw
/// DomainError for |z| >= validity radius.
Complex eval(const HoloMap& f, Complex z);
Complex eval_derivative(const HoloMap& f, Complex z);

/// Upper bound on |f(z) - eval(f, z)| for |z| <= rho (0 for polynomials).
double truncation_error_bound(const HoloMap& f, double rho);

/// Upper bound for |f'| on the closed disk of the given radius.
double lipschitz_bound(const HoloMap& f, double radius);

/// Product of two polynomial maps (coefficient convolution).
HoloMap multiply(const HoloMap& f, const HoloMap& g);

/// All roots with multiplicity, Newton-polished. Polynomial maps of degree
/// >= 1 only.
std::vector<Complex> roots(const HoloMap& f);

/// Closed annulus {z : inner <= |z| <= outer} centred at 0.
struct Annulus {
  double inner = 0;
  double outer = 0;
};

enum class CertStatus { Certified, Undecided };

/// Position of the true minimum relative to a requested threshold.
enum class ThresholdRelation {
  NotRequested,
  Above,      // min >= threshold + width, certified
  AtOrBelow,  // witness with |f| <= threshold - width, or a zero inside
  Undecided,  // within the abstention band or budget exhausted
};

struct CertifiedBound {
  double lowerBound = 0;  // true minimum >= lowerBound (may be negative: vacuous)
  double minSampled = 0;
  Complex witnessPoint{};
  double gridStep = 0;
  double lipschitzBound = 0;
  CertStatus status = CertStatus::Undecided;
  ThresholdRelation relation = ThresholdRelation::NotRequested;
  std::size_t samples = 0;
  bool zeroInside = false;
};

struct GridBudget {
  std::size_t maxPoints = std::size_t{1} << 18;
  std::size_t initialSamples = 256;
  std::size_t windingMax = std::size_t{1} << 20;
  // Plain mode: target certification width. Threshold mode: half-width of
  // the abstention band around the threshold.
  double width = 1e-3;
};

/// Certified lower bound for min |f| over the annulus.
///
/// The boundary circles are sampled on a uniform angular grid, doubling per
/// round. With lipschitz bound L on the outer disk and step h = outer * dtheta,
/// every boundary point is within h*sqrt(2)/2 of a sample, so
///   lowerBound = minSampled - L * h * sqrt(2)/2.
/// That bound covers the whole annulus once the winding numbers of f on both
/// circles agree: then f has no zero inside and 1/f attains its maximum on
/// the boundary. Unequal winding numbers certify a zero inside (minimum 0).
///
/// With a threshold, refinement stops as soon as the relation to the
/// threshold is settled, and the band (threshold - width, threshold + width)
/// is reported as Undecided.
CertifiedBound min_modulus_on_annulus(const HoloMap& f, const Annulus& ann,
                                      const GridBudget& budget = {},
                                      std::optional<double> threshold = {});

/// Same contract, computed on a full polar grid over the annulus (radial and
/// angular steps matched). Costs O(1/h^2) samples; used as a fallback and as
/// an independent check.
CertifiedBound min_modulus_on_annulus_grid(const HoloMap& f, const Annulus& ann,
                                           const GridBudget& budget = {},
                                           std::optional<double> threshold = {});

struct WindingResult {
  int winding = 0;
  bool valid = false;
  std::size_t samples = 0;
  double minDistance = 0;            // min sampled |f - target|
  double distanceLowerBound = 0;     // certified distance of the curve to target
};

/// Winding number of f(radius * e^{i theta}) around `target`. Refines until
/// every sample satisfies |f - target| > L * radius * dtheta (the image of
/// each arc then stays in a disk missing the target) and every increment is
/// below pi/2.
WindingResult winding_number(const HoloMap& f, double radius, Complex target,
                             std::size_t initialSamples = 256,
                             std::size_t maxSamples = std::size_t{1} << 20);

struct Coverage {
  bool covered = false;
  bool valid = false;
  WindingResult winding;
};

/// Decides whether the closed unit disk lies inside f(K_{r2}).
///
/// Requires a certified bound > 1 on an annulus containing |z| = r2. Then the
/// curve f(r2 e^{it}) misses the closed unit disk, which is connected, so the
/// winding number (the number of preimages in K_{r2}) is the same for every
/// target in it. Coverage therefore reduces to winding(f, r2, 0) >= 1.
Coverage covers_closed_unit_disk(const HoloMap& f, double r2,
                                 const CertifiedBound& annulusCert,
                                 const GridBudget& budget = {});

}  // namespace shiftspec
