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

#include "shiftspec/io.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <type_traits>
#include <variant>

#include "json.hpp"

namespace shiftspec {

using Json = nlohmann::ordered_json;

GridBudget Budgets::grid() const {
  GridBudget g;
  g.maxPoints = gridMax;
  g.windingMax = windingMax;
  g.width = decisionWidth;
  return g;
}

namespace {

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("JSON syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + e.what(),
                     line, column);
  }
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what, 0, 0);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(where, std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const std::string& where) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) schema_error(where, "expected an integer");
  const auto v = j.get<long long>();
  if (v < 0) schema_error(where, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Complex complex_value(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  schema_error(where, "expected a number or a [re, im] pair");
}

std::vector<Complex> complex_array(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(complex_value(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json complex_array_json(const std::vector<Complex>& v) {
  Json a = Json::array();
  for (Complex z : v) a.push_back(complex_json(z));
  return a;
}

// Library validation errors surface as schema errors of the enclosing object.
template <typename F>
auto validated(const std::string& where, F&& build) {
  try {
    return build();
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidArgument& e) {
    schema_error(where, e.what());
  }
}

WeightSequence weights_from(const Json& j) {
  const std::string where = "weights";
  std::vector<double> prefix;
  if (j.is_object() && j.contains("prefix")) prefix = numbers(j["prefix"], where + ".prefix");
  const Json& t = member(j, "tail", where);
  const Json& kind = member(t, "kind", where + ".tail");
  if (!kind.is_string()) schema_error(where + ".tail.kind", "expected a string");
  const std::string k = kind.get<std::string>();
  WeightTail tail;
  if (k == "constant") {
    tail = ConstantTail{number(member(t, "value", where + ".tail"), where + ".tail.value")};
  } else if (k == "periodic") {
    tail = PeriodicTail{numbers(member(t, "values", where + ".tail"), where + ".tail.values")};
  } else if (k == "blocks") {
    tail = DoublingBlocksTail{number(member(t, "a", where + ".tail"), where + ".tail.a"),
                              number(member(t, "b", where + ".tail"), where + ".tail.b")};
  } else {
    schema_error(where + ".tail.kind", "unknown tail kind \"" + k + "\"");
  }
  return validated(where, [&] { return WeightSequence(std::move(prefix), std::move(tail)); });
}

Json weights_json(const WeightSequence& w) {
  Json j;
  j["prefix"] = w.prefix();
  j["tail"] = std::visit(
      [](const auto& t) -> Json {
        using T = std::decay_t<decltype(t)>;
        Json o;
        if constexpr (std::is_same_v<T, ConstantTail>) {
          o["kind"] = "constant";
          o["value"] = t.value;
        } else if constexpr (std::is_same_v<T, PeriodicTail>) {
          o["kind"] = "periodic";
          o["values"] = t.values;
        } else {
          o["kind"] = "blocks";
          o["a"] = t.a;
          o["b"] = t.b;
        }
        return o;
      },
      w.tail());
  return j;
}

HoloMap map_from(const Json& j) {
  const std::string where = "map";
  const Json& kind = member(j, "kind", where);
  if (!kind.is_string()) schema_error(where + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  auto coeffs = complex_array(member(j, "coeffs", where), where + ".coeffs");
  if (coeffs.empty()) schema_error(where + ".coeffs", "needs at least one coefficient");
  if (k == "poly") return validated(where, [&] { return HoloMap::polynomial(std::move(coeffs)); });
  if (k == "series") {
    const double t = number(member(j, "tailBound", where), where + ".tailBound");
    const double q = number(member(j, "tailRatio", where), where + ".tailRatio");
    const double r = number(member(j, "radius", where), where + ".radius");
    return validated(where, [&] { return HoloMap::series(std::move(coeffs), t, q, r); });
  }
  schema_error(where + ".kind", "unknown map kind \"" + k + "\"");
}

Json map_json(const HoloMap& f) {
  Json j;
  if (f.is_polynomial()) {
    j["kind"] = "poly";
    j["coeffs"] = complex_array_json(f.coeffs());
  } else {
    j["kind"] = "series";
    j["coeffs"] = complex_array_json(f.coeffs());
    j["tailBound"] = f.tail_bound();
    j["tailRatio"] = f.tail_ratio();
    j["radius"] = f.validity_radius();
  }
  return j;
}

Budgets budgets_from(const Json& j) {
  Budgets b;
  if (!j.is_object()) schema_error("budgets", "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string where = "budgets." + it.key();
    if (it.key() == "gridMax") {
      b.gridMax = count(it.value(), where);
    } else if (it.key() == "windingMax") {
      b.windingMax = count(it.value(), where);
    } else if (it.key() == "truncationN") {
      b.truncationN = count(it.value(), where);
    } else if (it.key() == "tol") {
      b.tol = number(it.value(), where);
    } else if (it.key() == "decisionWidth") {
      b.decisionWidth = number(it.value(), where);
    } else {
      schema_error(where, "unknown budget");
    }
  }
  if (b.gridMax < 16 || b.windingMax < 16) schema_error("budgets", "sample budgets must be >= 16");
  if (b.truncationN < 1) schema_error("budgets.truncationN", "must be >= 1");
  if (!(b.tol > 0) || !(b.decisionWidth > 0)) schema_error("budgets", "tolerances must be positive");
  return b;
}

Json budgets_json(const Budgets& b) {
  Json j;
  j["gridMax"] = b.gridMax;
  j["windingMax"] = b.windingMax;
  j["truncationN"] = b.truncationN;
  j["tol"] = b.tol;
  j["decisionWidth"] = b.decisionWidth;
  return j;
}

Json profile_json(const SpectralProfile& p) {
  Json j;
  j["r1"] = p.r1;
  j["r2"] = p.r2;
  j["r3"] = p.r3;
  j["exactness"] = p.exactness == Exactness::Exact ? "EXACT" : "ESTIMATED";
  if (p.exactness == Exactness::Estimated) {
    j["windowSize"] = p.windowSize;
    j["spread"] = p.spread;
  }
  return j;
}

const char* relation_name(ThresholdRelation r) {
  switch (r) {
    case ThresholdRelation::NotRequested: return "NOT_REQUESTED";
    case ThresholdRelation::Above: return "ABOVE";
    case ThresholdRelation::AtOrBelow: return "AT_OR_BELOW";
    case ThresholdRelation::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

Json bound_json(const CertifiedBound& b) {
  Json j;
  j["lowerBound"] = b.lowerBound;
  j["minSampled"] = b.minSampled;
  j["witnessPoint"] = complex_json(b.witnessPoint);
  j["gridStep"] = b.gridStep;
  j["lipschitzBound"] = b.lipschitzBound;
  j["status"] = b.status == CertStatus::Certified ? "CERTIFIED" : "UNDECIDED";
  j["relation"] = relation_name(b.relation);
  j["samples"] = b.samples;
  j["zeroInside"] = b.zeroInside;
  return j;
}

Json winding_json(const WindingResult& w) {
  Json j;
  j["winding"] = w.winding;
  j["valid"] = w.valid;
  j["samples"] = w.samples;
  j["minDistance"] = w.minDistance;
  j["distanceLowerBound"] = w.distanceLowerBound;
  return j;
}

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::True: return "TRUE";
    case Tri::False: return "FALSE";
    case Tri::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

Json verdict_json(const Verdict& v) {
  Json j;
  j["decision"] = to_string(v.decision);
  j["route"] = to_string(v.route);
  j["margin"] = v.margin;
  j["reason"] = v.reason;
  j["profile"] = profile_json(v.profile);
  j["conditionA"] = bound_json(v.conditionA);
  j["conditionB"] = v.conditionBEvaluated ? winding_json(v.conditionB) : Json();
  if (v.kernel) {
    Json k;
    k["result"] = tri_name(v.kernel->result);
    k["lambda"] = v.kernel->lambda ? complex_json(*v.kernel->lambda) : Json();
    k["roots"] = complex_array_json(v.kernel->roots);
    j["kernel"] = k;
  }
  return j;
}

Json vector_json(const TruncatedVector& v) {
  Json j;
  j["exactPrefix"] = v.exactPrefix;
  j["coords"] = complex_array_json(v.coords);
  return j;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  const Json j = parse_text(text);
  if (!j.is_object()) schema_error("instance", "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "weights" && it.key() != "map" && it.key() != "budgets") {
      schema_error("instance", "unknown key \"" + it.key() + "\"");
    }
  }
  Instance inst{{weights_from(member(j, "weights", "instance")),
                 map_from(member(j, "map", "instance"))},
                {}};
  if (j.contains("budgets")) inst.budgets = budgets_from(j["budgets"]);
  validated("instance", [&] {
    validate(inst.op);
    return 0;
  });
  return inst;
}

std::string instance_to_json(const Instance& inst) {
  Json j;
  j["weights"] = weights_json(inst.op.weights);
  j["map"] = map_json(inst.op.map);
  j["budgets"] = budgets_json(inst.budgets);
  return j.dump(2);
}

WeightSequence parse_weights(const std::string& text) { return weights_from(parse_text(text)); }
std::string weights_to_json(const WeightSequence& w) { return weights_json(w).dump(2); }
HoloMap parse_map(const std::string& text) { return map_from(parse_text(text)); }
std::string map_to_json(const HoloMap& f) { return map_json(f).dump(2); }

TruncatedVector parse_vector(const std::string& text, std::size_t defaultLength) {
  const Json j = parse_text(text);
  const std::string where = "vector";
  if (!j.is_object()) schema_error(where, "expected an object");
  if (j.contains("coords")) {
    TruncatedVector v;
    v.coords = complex_array(j["coords"], where + ".coords");
    v.exactPrefix = j.contains("exactPrefix") ? count(j["exactPrefix"], where + ".exactPrefix") : v.size();
    if (v.exactPrefix > v.size()) schema_error(where + ".exactPrefix", "exceeds the number of coordinates");
    return v;
  }
  const Json& kind = member(j, "kind", where);
  if (!kind.is_string()) schema_error(where + ".kind", "expected a string");
  const std::size_t n = j.contains("length") ? count(j["length"], where + ".length") : defaultLength;
  if (n == 0) schema_error(where + ".length", "must be >= 1");
  const std::string k = kind.get<std::string>();
  if (k == "constant") return TruncatedVector::constant(n, complex_value(member(j, "value", where), where + ".value"));
  if (k == "zero") return TruncatedVector::zero(n);
  if (k == "basis") {
    const std::size_t idx = count(member(j, "index", where), where + ".index");
    if (idx < 1 || idx > n) schema_error(where + ".index", "out of range");
    return TruncatedVector::basis(n, idx);
  }
  schema_error(where + ".kind", "unknown vector kind \"" + k + "\"");
}

std::string vector_to_json(const TruncatedVector& v) { return vector_json(v).dump(2); }

std::string analysis_to_json(const OperatorSpec& op) {
  const SpectralPicture p = spectral_picture(op);
  Json j;
  j["profile"] = profile_json(p.profile);
  Json pic;
  pic["map"] = map_json(p.map);
  pic["fullSpectrum"] = {{"region", "image of closed disk"}, {"radius", p.fullRadius}};
  pic["approxPointSpectrumOfAdjointSide"] = {{"region", "image of annulus"},
                                             {"inner", p.approxPointAnnulus.inner},
                                             {"outer", p.approxPointAnnulus.outer}};
  pic["pointSpectrumInnerDisk"] = {{"region", "image of open disk"}, {"radius", p.pointDiskRadius}};
  pic["surjectivityRegionComplement"] = pic["approxPointSpectrumOfAdjointSide"];
  j["picture"] = pic;
  return j.dump(2);
}

std::string verdict_to_json(const Verdict& v) { return verdict_json(v).dump(2); }

std::string consistency_to_json(const ConsistencyReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["detail"] = r.detail;
  j["geometric"] = verdict_json(r.geometric);
  j["moduli"] = verdict_json(r.moduli);
  return j.dump(2);
}

std::string witness_to_json(const MixingWitness& w) {
  Json j;
  j["ok"] = w.ok;
  j["failure"] = w.failure;
  j["n0"] = w.n0;
  j["epsilon"] = w.epsilon;
  j["constant"] = w.constant;
  Json stages = Json::array();
  for (const WitnessStage& s : w.stages) {
    Json o;
    o["m"] = s.m;
    o["xNorm"] = s.xNorm;
    o["zNorm"] = s.zNorm;
    o["normBound"] = s.normBound;
    o["withinBound"] = s.withinBound;
    o["residual"] = s.residual;
    o["residualZ"] = s.residualZ;
    o["stepResidual"] = s.stepResidual;
    o["checkedPrefix"] = s.checkedPrefix;
    o["x"] = vector_json(s.x);
    o["z"] = vector_json(s.z);
    stages.push_back(std::move(o));
  }
  j["stages"] = std::move(stages);
  return j.dump(2);
}

std::string jset_to_json(const JSetReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["decaying"] = r.decaying;
  Json m = Json::array();
  for (const MembershipCertificate& c : r.memberships) {
    m.push_back({{"target", c.target},
                 {"certified", c.certified},
                 {"steps", c.steps},
                 {"finalError", c.finalError},
                 {"perturbationNorm", c.perturbationNorm},
                 {"orbitNorm", c.orbitNorm},
                 {"checkedPrefix", c.checkedPrefix}});
  }
  j["memberships"] = std::move(m);
  if (r.growth) {
    j["growth"] = {{"bound", r.growth->bound},
                   {"rate", r.growth->rate},
                   {"minRate", r.growth->minRate},
                   {"maxRate", r.growth->maxRate}};
  } else {
    j["growth"] = nullptr;
  }
  return j.dump(2);
}

std::string witness_csv(const MixingWitness& w) {
  std::string out = "m,norm,bound,residual,step_residual\n";
  for (const WitnessStage& s : w.stages) {
    out += std::to_string(s.m) + "," + fmt(s.xNorm) + "," + fmt(s.normBound) + "," + fmt(s.residual) +
           "," + fmt(s.stepResidual) + "\n";
  }
  return out;
}

std::string envelope_csv(const std::vector<EnvelopeRow>& rows) {
  std::string out = "n,prefix_sup,tail_sup\n";
  for (const EnvelopeRow& r : rows) {
    out += std::to_string(r.n) + "," + fmt(r.prefixSup) + "," + fmt(r.tailSup) + "\n";
  }
  return out;
}

std::string contour_csv(const HoloMap& f, double radius, std::size_t samples) {
  std::string out = "theta,re,im\n";
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
    const Complex v = eval(f, std::polar(radius, t));
    out += fmt(t) + "," + fmt(v.real()) + "," + fmt(v.imag()) + "\n";
  }
  return out;
}

}  // namespace shiftspec
