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

#include <cstddef>
#include <string>
#include <vector>

#include "shiftspec/dynamics.hpp"
#include "shiftspec/errors.hpp"

namespace shiftspec {

/// Malformed JSON or schema violation. Line and column are 1-based; both
/// are 0 when the error concerns the document structure rather than a
/// character position.
class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InvalidArgument(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct Budgets {
  std::size_t gridMax = std::size_t{1} << 18;
  std::size_t windingMax = std::size_t{1} << 20;
  std::size_t truncationN = 256;
  double tol = 1e-9;
  double decisionWidth = 1e-3;

  GridBudget grid() const;
  bool operator==(const Budgets&) const = default;
};

struct Instance {
  OperatorSpec op;
  Budgets budgets;
  bool operator==(const Instance&) const = default;
};

/// {"weights": {...}, "map": {...}, "budgets": {...}}; budgets optional.
Instance parse_instance(const std::string& text);
std::string instance_to_json(const Instance& inst);

WeightSequence parse_weights(const std::string& text);
std::string weights_to_json(const WeightSequence& w);
HoloMap parse_map(const std::string& text);
std::string map_to_json(const HoloMap& f);

/// Vector files: {"coords": [...], "exactPrefix": n} or a generator
/// {"kind": "constant" | "basis" | "zero", "length": N, "value": v, "index": k}.
/// `defaultLength` fills a missing length.
TruncatedVector parse_vector(const std::string& text, std::size_t defaultLength);
std::string vector_to_json(const TruncatedVector& v);

std::string analysis_to_json(const OperatorSpec& op);
std::string verdict_to_json(const Verdict& v);
std::string consistency_to_json(const ConsistencyReport& r);
std::string witness_to_json(const MixingWitness& w);
std::string jset_to_json(const JSetReport& r);

/// m, norm, bound, residual, step residual: one row per stage.
std::string witness_csv(const MixingWitness& w);
/// n, prefix sup, tail sup.
std::string envelope_csv(const std::vector<EnvelopeRow>& rows);
/// theta, re f, im f on the circle |z| = radius.
std::string contour_csv(const HoloMap& f, double radius, std::size_t samples);

/// Static SVG: parameter annulus [r2, r1], the images of both boundary
/// circles under f, the unit circle, the winding samples on |z| = r2 and a
/// legend with the certified values.
std::string plot_svg(const OperatorSpec& op, const Verdict& v);

}  // namespace shiftspec
