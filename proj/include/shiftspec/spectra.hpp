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

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "shiftspec/holo.hpp"
#include "shiftspec/weights.hpp"

namespace shiftspec {

/// f(B_w): a weighted backward shift on l^inf composed with a holomorphic map.
struct OperatorSpec {
  WeightSequence weights;
  HoloMap map = HoloMap::identity();

  bool operator==(const OperatorSpec&) const = default;
};

/// Throws InvalidArgument unless a series map is valid beyond r1.
void validate(const OperatorSpec& op);

/// Spectral sets of f(B_w) as images of parameter regions under f:
///  - full spectrum           f(closed disk of radius r1)
///  - adjoint approx. point   f(annulus [r2, r1]); also the surjectivity spectrum
///  - point spectrum (part)   f(open disk of radius r3)
struct SpectralPicture {
  SpectralProfile profile;
  HoloMap map = HoloMap::identity();
  double fullRadius = 0;
  Annulus approxPointAnnulus;
  double pointDiskRadius = 0;
};

SpectralPicture spectral_picture(const OperatorSpec& op);

enum class SpectralSet { Full, ApproxPointAdjoint, PointInnerDisk };
enum class Membership { Inside, Outside, Unknown };

/// Whether mu lies in the image region, decided by counting zeros of f - mu
/// with winding numbers. Unknown when the boundary curve passes through mu
/// at the available resolution.
Membership image_membership(const SpectralPicture& picture, SpectralSet set, Complex mu,
                            const GridBudget& budget = {});

/// Certified lower bound for i(f(S_w)) = min |f| over [r2, r1]. The identity
/// map returns r2 exactly.
CertifiedBound i_of_adjoint(const OperatorSpec& op, const GridBudget& budget = {},
                            std::optional<double> threshold = {});

enum class Tri { True, False, Inconclusive };

struct KernelCheck {
  Tri result = Tri::Inconclusive;
  std::optional<Complex> lambda;  // root of f inside K_{r3}; e_lambda spans a kernel direction
  std::vector<Complex> roots;
};

/// 0 in sigma_p(f(B_w))? True when f has a root in K_{r3}; False when every
/// root lies outside the closed disk of radius r1 (f(B_w) is then a product of
/// invertible factors); Inconclusive otherwise. Polynomial maps only.
KernelCheck kernel_nontrivial(const OperatorSpec& op);

enum class NormKind { One, Sup };

struct ModulusEstimate {
  double kappa = 0;  // upper estimate of the injectivity modulus
  double s = 0;      // kappa of the transpose in the dual norm
  bool degenerate = false;
};

/// Sampling oracle for the injectivity and surjectivity moduli of a small
/// square matrix (dimension <= 12, samples >= 10^4). Reproducible for a given
/// seed independent of the worker count.
ModulusEstimate brute_force_modulus(const Eigen::MatrixXcd& matrix, NormKind norm,
                                    std::size_t samples, std::uint64_t seed);

/// 1 / ||M^{-1}|| in the induced norm: the exact surjectivity modulus of an
/// invertible matrix.
double surjectivity_modulus_via_inverse(const Eigen::MatrixXcd& matrix, NormKind norm);

/// Naive N x N truncation of S_w^n (coordinates pushed past N are lost).
Eigen::MatrixXcd truncated_forward_shift_power(const WeightSequence& w, std::size_t dim,
                                               std::size_t n);

/// S_w^n restricted to span(e_1..e_N) with the rows that only receive
/// out-of-range coordinates compressed away: rows n+1..n+N re-indexed to 1..N.
Eigen::MatrixXcd compressed_forward_shift_power(const WeightSequence& w, std::size_t dim,
                                                std::size_t n);

}  // namespace shiftspec
