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

#include <algorithm>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "shiftspec/io.hpp"

using namespace shiftspec;
using nlohmann::json;

TEST_CASE("instances round-trip through JSON") {
  const std::vector<std::string> docs{
      R"({"weights": {"tail": {"kind": "constant", "value": 2}}, "map": {"kind": "poly", "coeffs": [[0, 0], [1, 0]]}})",
      R"({"weights": {"prefix": [0.5, 3], "tail": {"kind": "periodic", "values": [4, 1]}},
          "map": {"kind": "poly", "coeffs": [[1, 0.5], [0, 0], [2, -1]]},
          "budgets": {"gridMax": 1024, "windingMax": 4096, "truncationN": 64, "tol": 1e-7, "decisionWidth": 0.01}})",
      R"({"weights": {"tail": {"kind": "blocks", "a": 2, "b": 1}},
          "map": {"kind": "series", "coeffs": [[0, 0], [2, 0], [0.25, 0]], "tailBound": 4, "tailRatio": 0.25, "radius": 3.5}})"};
  for (const auto& d : docs) {
    const Instance a = parse_instance(d);
    const std::string text = instance_to_json(a);
    const Instance b = parse_instance(text);
    CHECK(a == b);
    CHECK(instance_to_json(b) == text);
  }
}

TEST_CASE("budget defaults") {
  const Instance a = parse_instance(
      R"({"weights": {"tail": {"kind": "constant", "value": 2}}, "map": {"kind": "poly", "coeffs": [0, 1]}})");
  CHECK(a.budgets.gridMax == 262144);
  CHECK(a.budgets.windingMax == 1048576);
  CHECK(a.budgets.truncationN == 256);
  CHECK(a.budgets.tol == 1e-9);
  CHECK(a.budgets.decisionWidth == 1e-3);
  CHECK(a.op.map.is_identity());
  const auto g = a.budgets.grid();
  CHECK(g.maxPoints == 262144);
  CHECK(g.width == 1e-3);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_instance("{\n  \"weights\": {\"tail\": {\"kind\": \"constant\", \"value\": 2}},\n  \"map\": {\"kind\": \"poly\", \"coeffs\": [0, 1]\n}");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(e.column() >= 1);
  }
  try {
    parse_instance("{\"weights\": {\"tail\": {\"kind\": \"constant\", \"value\": -1}}, \"map\": {\"kind\": \"poly\", \"coeffs\": [0, 1]}}");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("weights") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_instance(R"({"weights": {"tail": {"kind": "constant", "value": 2}}, "map": {"kind": "poly", "coeffs": [0, 1]}, "extra": 1})"),
                  ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"weights": {"tail": {"kind": "spiral"}}, "map": {"kind": "poly", "coeffs": [0, 1]}})"),
                  ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"map": {"kind": "poly", "coeffs": [0, 1]}})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"([1, 2])"), ParseError);
}

TEST_CASE("vector files") {
  const auto a = parse_vector(R"({"kind": "constant", "value": 1, "length": 8})", 256);
  CHECK(a == TruncatedVector::constant(8, 1));
  const auto b = parse_vector(R"({"kind": "basis", "index": 3})", 16);
  CHECK(b == TruncatedVector::basis(16, 3));
  const auto c = parse_vector(R"({"kind": "zero"})", 4);
  CHECK(c == TruncatedVector::zero(4));
  const TruncatedVector d{{Complex(1, 2), Complex(0, -1), Complex(3, 0)}, 2};
  CHECK(parse_vector(vector_to_json(d), 1) == d);
  CHECK_THROWS_AS(parse_vector(R"({"kind": "basis", "index": 0, "length": 4})", 4), ParseError);
}

TEST_CASE("report serialization") {
  const OperatorSpec op{WeightSequence::constant(2)};
  const json analysis = json::parse(analysis_to_json(op));
  CHECK(analysis["profile"]["r1"] == 2.0);
  CHECK(analysis["profile"]["r2"] == 2.0);
  CHECK(analysis["profile"]["r3"] == 2.0);

  const json v = json::parse(verdict_to_json(decide_geometric(op)));
  CHECK(v["decision"] == "JCLASS");
  CHECK(v["route"] == "CLOSED_FORM");

  const json c = json::parse(consistency_to_json(cross_check(op)));
  CHECK(c["pass"] == true);

  const MixingWitness mw = mixing_witness(op, TruncatedVector::constant(64, 1), 3);
  const json w = json::parse(witness_to_json(mw));
  CHECK(w["stages"].size() == 3);
  CHECK(w["stages"][0]["xNorm"] == 0.5);
  const std::string csv = witness_csv(mw);
  CHECK(csv.rfind("m,norm,bound,residual,step_residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  const JSetReport r = jset_experiment(op, TruncatedVector::constant(256, 1), {});
  const json j = json::parse(jset_to_json(r));
  CHECK(j["verdict"] == "HEURISTIC_NONMEMBER");
  CHECK(envelope_csv(r.growth->envelope).rfind("n,prefix_sup,tail_sup\n", 0) == 0);

  const std::string contour = contour_csv(HoloMap::identity(), 2, 8);
  CHECK(std::count(contour.begin(), contour.end(), '\n') == 9);
}

TEST_CASE("outputs are deterministic") {
  const OperatorSpec op{WeightSequence::blocks(2, 1), HoloMap::polynomial({0.5, 1.5})};
  const Verdict v = decide_geometric(op);
  CHECK(verdict_to_json(v) == verdict_to_json(decide_geometric(op)));
  const std::string svg = plot_svg(op, v);
  CHECK(svg == plot_svg(op, decide_geometric(op)));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("unit-circle") != std::string::npos);
  CHECK(svg.find("annulus") != std::string::npos);
  CHECK(svg.find("winding-samples") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}
