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

#include "shiftspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "parallel.hpp"
#include "shiftspec/errors.hpp"

namespace shiftspec {

namespace {

constexpr double kRootSlack = 1e-9;

HoloMap minus_constant(const HoloMap& f, Complex mu) {
  auto c = f.coeffs();
  c[0] -= mu;
  if (f.is_polynomial()) return HoloMap::polynomial(std::move(c));
  return HoloMap::series(std::move(c), f.tail_bound(), f.tail_ratio(), f.validity_radius());
}

// Zeros of g in the open disk of radius rho, if countable at this budget.
std::optional<int> zero_count(const HoloMap& g, double rho, const GridBudget& budget) {
  if (rho == 0) return 0;
  const WindingResult w = winding_number(g, rho, 0.0, 256, budget.windingMax);
  if (!w.valid) return std::nullopt;
  return w.winding;
}

double norm_of(const Eigen::VectorXcd& v, NormKind kind) {
  if (kind == NormKind::One) return v.cwiseAbs().sum();
  return v.cwiseAbs().maxCoeff();
}

NormKind dual(NormKind kind) { return kind == NormKind::One ? NormKind::Sup : NormKind::One; }

struct Candidate {
  double ratio = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
  Eigen::VectorXcd x;
};

Eigen::VectorXcd random_unit(std::mt19937_64& rng, long dim, NormKind kind) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<long> support(static_cast<std::size_t>(dim));
  std::iota(support.begin(), support.end(), 0);
  long used = dim;
  if (unit(rng) < 0.5) {
    std::shuffle(support.begin(), support.end(), rng);
    used = 1 + static_cast<long>(unit(rng) * static_cast<double>(dim));
    used = std::min(used, dim);
  }
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
  for (long i = 0; i < used; ++i) {
    const double phase = 2 * std::numbers::pi * unit(rng);
    const double modulus = kind == NormKind::One ? -std::log(1.0 - unit(rng)) : unit(rng);
    x(support[static_cast<std::size_t>(i)]) = std::polar(modulus, phase);
  }
  if (kind == NormKind::Sup) {
    const long pick = support[static_cast<std::size_t>(unit(rng) * static_cast<double>(used)) %
                              static_cast<std::size_t>(used)];
    x(pick) = std::polar(1.0, std::arg(x(pick)));
  }
  const double n = norm_of(x, kind);
  if (n > 0) x /= n;
  return x;
}

// Compass search on ||Mx|| / ||x|| over the real and imaginary directions.
double polish(const Eigen::MatrixXcd& m, Eigen::VectorXcd x, NormKind kind) {
  auto ratio = [&](const Eigen::VectorXcd& v) {
    const double n = norm_of(v, kind);
    return n > 0 ? norm_of(m * v, kind) / n : std::numeric_limits<double>::infinity();
  };
  double best = ratio(x);
  for (double step = 0.5; step > 1e-9;) {
    bool improved = false;
    for (long j = 0; j < x.size() && !improved; ++j) {
      for (Complex dir : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
        Eigen::VectorXcd y = x;
        y(j) += step * dir;
        const double r = ratio(y);
        if (r < best) {
          best = r;
          x = y / norm_of(y, kind);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step /= 2;
  }
  return best;
}

double sample_kappa(const Eigen::MatrixXcd& m, NormKind kind, std::size_t samples,
                    std::uint64_t seed, std::uint64_t salt) {
  constexpr std::size_t kChunk = 1024;
  constexpr std::size_t kKeep = 4;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::vector<Candidate>> kept(chunks);
  detail::for_each_chunk(samples, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(salt)};
    std::mt19937_64 rng(seq);
    std::vector<Candidate> local;
    for (std::size_t i = begin; i < end; ++i) {
      Candidate cand;
      cand.index = i;
      cand.x = random_unit(rng, m.cols(), kind);
      cand.ratio = norm_of(m * cand.x, kind);
      local.push_back(std::move(cand));
    }
    std::partial_sort(local.begin(), local.begin() + static_cast<long>(std::min(kKeep, local.size())),
                      local.end(), [](const Candidate& a, const Candidate& b) {
                        return a.ratio != b.ratio ? a.ratio < b.ratio : a.index < b.index;
                      });
    local.resize(std::min(kKeep, local.size()));
    kept[c] = std::move(local);
  });
  std::vector<Candidate> all;
  for (auto& v : kept) {
    for (auto& cand : v) all.push_back(std::move(cand));
  }
  std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
    return a.ratio != b.ratio ? a.ratio < b.ratio : a.index < b.index;
  });
  double best = all.empty() ? std::numeric_limits<double>::infinity() : all.front().ratio;
  for (std::size_t i = 0; i < std::min<std::size_t>(8, all.size()); ++i) {
    best = std::min(best, polish(m, all[i].x, kind));
  }
  return best;
}

}  // namespace

void validate(const OperatorSpec& op) {
  if (!op.map.is_polynomial()) {
    const double r1 = spectral_profile(op.weights).r1;
    if (!(op.map.validity_radius() > r1)) {
      throw InvalidArgument("series validity radius must exceed the spectral radius r1");
    }
  }
}

SpectralPicture spectral_picture(const OperatorSpec& op) {
  validate(op);
  SpectralPicture p;
  p.profile = spectral_profile(op.weights);
  p.map = op.map;
  p.fullRadius = p.profile.r1;
  p.approxPointAnnulus = {p.profile.r2, p.profile.r1};
  p.pointDiskRadius = p.profile.r3;
  return p;
}

Membership image_membership(const SpectralPicture& picture, SpectralSet set, Complex mu,
                            const GridBudget& budget) {
  const HoloMap g = minus_constant(picture.map, mu);
  switch (set) {
    case SpectralSet::Full: {
      // The closed disk adds the boundary curve, which winding counts cannot
      // see; a curve passing through mu shows up as an invalid count.
      const auto n = zero_count(g, picture.fullRadius, budget);
      if (!n) return Membership::Unknown;
      return *n >= 1 ? Membership::Inside : Membership::Outside;
    }
    case SpectralSet::ApproxPointAdjoint: {
      const auto outer = zero_count(g, picture.approxPointAnnulus.outer, budget);
      const auto inner = zero_count(g, picture.approxPointAnnulus.inner, budget);
      if (!outer || !inner) return Membership::Unknown;
      return *outer - *inner >= 1 ? Membership::Inside : Membership::Outside;
    }
    case SpectralSet::PointInnerDisk: {
      const auto n = zero_count(g, picture.pointDiskRadius, budget);
      if (!n) return Membership::Unknown;
      return *n >= 1 ? Membership::Inside : Membership::Outside;
    }
  }
  return Membership::Unknown;
}

CertifiedBound i_of_adjoint(const OperatorSpec& op, const GridBudget& budget,
                            std::optional<double> threshold) {
  validate(op);
  const SpectralProfile prof = spectral_profile(op.weights);
  if (op.map.is_identity()) {
    CertifiedBound b;
    b.lowerBound = b.minSampled = prof.r2;
    b.witnessPoint = prof.r2;
    b.lipschitzBound = 1;
    b.status = CertStatus::Certified;
    b.samples = 0;
    if (threshold) {
      b.relation = prof.r2 > *threshold ? ThresholdRelation::Above : ThresholdRelation::AtOrBelow;
    }
    return b;
  }
  return min_modulus_on_annulus(op.map, {prof.r2, prof.r1}, budget, threshold);
}

KernelCheck kernel_nontrivial(const OperatorSpec& op) {
  if (!op.map.is_polynomial()) throw Unsupported("kernel check needs a polynomial map");
  const SpectralProfile prof = spectral_profile(op.weights);
  KernelCheck out;
  const auto& c = op.map.coeffs();
  if (op.map.degree() == 0) {
    if (c[0] == Complex(0)) {
      out.result = Tri::True;
      out.lambda = 0.0;
    } else {
      out.result = Tri::False;
    }
    return out;
  }
  out.roots = roots(op.map);
  const double slack = kRootSlack * std::max(1.0, prof.r1);
  bool allOutside = true;
  for (Complex z : out.roots) {
    const double m = std::abs(z);
    if (m < prof.r3 - slack && (!out.lambda || m < std::abs(*out.lambda))) out.lambda = z;
    if (!(m > prof.r1 + slack)) allOutside = false;
  }
  if (out.lambda) {
    out.result = Tri::True;
  } else {
    out.result = allOutside ? Tri::False : Tri::Inconclusive;
  }
  return out;
}

ModulusEstimate brute_force_modulus(const Eigen::MatrixXcd& matrix, NormKind norm,
                                    std::size_t samples, std::uint64_t seed) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw InvalidArgument("brute_force_modulus needs a non-empty square matrix");
  }
  if (matrix.rows() > 12) throw InvalidArgument("brute_force_modulus supports dimension <= 12");
  if (samples < 10000) throw InvalidArgument("brute_force_modulus needs at least 10^4 samples");
  ModulusEstimate out;
  out.kappa = sample_kappa(matrix, norm, samples, seed, 1);
  out.s = sample_kappa(matrix.transpose(), dual(norm), samples, seed, 2);
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  out.degenerate = out.kappa <= 1e-12 * scale || out.s <= 1e-12 * scale;
  return out;
}

double surjectivity_modulus_via_inverse(const Eigen::MatrixXcd& matrix, NormKind norm) {
  if (matrix.rows() != matrix.cols()) throw InvalidArgument("square matrix required");
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(matrix);
  if (!lu.isInvertible()) return 0;
  const Eigen::MatrixXcd inv = lu.inverse();
  const double n = norm == NormKind::One ? inv.cwiseAbs().colwise().sum().maxCoeff()
                                         : inv.cwiseAbs().rowwise().sum().maxCoeff();
  return 1 / n;
}

Eigen::MatrixXcd truncated_forward_shift_power(const WeightSequence& w, std::size_t dim,
                                               std::size_t n) {
  const long d = static_cast<long>(dim);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(d, d);
  for (long i = 0; i + 1 < d; ++i) s(i + 1, i) = w(static_cast<std::size_t>(i) + 1);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(d, d);
  for (std::size_t k = 0; k < n; ++k) out = s * out;
  return out;
}

Eigen::MatrixXcd compressed_forward_shift_power(const WeightSequence& w, std::size_t dim,
                                                std::size_t n) {
  // Column k of S_w^n lands in row k + n with entry w_k ... w_{k+n-1}.
  const long d = static_cast<long>(dim);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (long k = 0; k < d; ++k) out(k, k) = window_product(w, static_cast<std::size_t>(k) + 1, n);
  return out;
}

}  // namespace shiftspec
