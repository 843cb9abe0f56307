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

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "shiftspec/shiftspec.h"

namespace {

// sysexits-style codes.
constexpr int kExitParse = 64;
constexpr int kExitRefused = 65;
constexpr int kExitNoInput = 66;
constexpr int kExitSoftware = 70;
constexpr int kExitCantCreate = 73;

struct Options {
  std::string instance;
  std::string route = "geometric";
  std::string target;
  std::string x;
  std::string csv = "stages.csv";
  std::string envelopeCsv = "envelope.csv";
  std::string out;
  unsigned stages = 5;
  std::uint64_t seed = 0;
  std::optional<double> gridMax, windingMax, truncationN, tol, decisionWidth;
};

struct StringDeleter {
  void operator()(char* s) const { shiftspec_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct InstanceDeleter {
  void operator()(shiftspec_instance* p) const { shiftspec_instance_free(p); }
};
using InstancePtr = std::unique_ptr<shiftspec_instance, InstanceDeleter>;

int exit_for(shiftspec_status s) {
  switch (s) {
    case SHIFTSPEC_OK: return 0;
    case SHIFTSPEC_ERR_PARSE:
    case SHIFTSPEC_ERR_INVALID:
    case SHIFTSPEC_ERR_NULL: return kExitParse;
    case SHIFTSPEC_ERR_DOMAIN:
    case SHIFTSPEC_ERR_UNSUPPORTED:
    case SHIFTSPEC_ERR_PRECONDITION: return kExitRefused;
    case SHIFTSPEC_ERR_IO: return kExitNoInput;
    case SHIFTSPEC_ERR_NUMERICAL:
    case SHIFTSPEC_ERR_INTERNAL: return kExitSoftware;
  }
  return kExitSoftware;
}

int fail(shiftspec_status s) {
  std::cerr << "shiftspec: " << shiftspec_last_error() << "\n";
  return exit_for(s);
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

// Loads the instance and applies budget overrides; returns an exit code on failure.
int load(const Options& o, InstancePtr& inst) {
  shiftspec_instance* raw = nullptr;
  shiftspec_status s = shiftspec_instance_load(o.instance.c_str(), &raw);
  if (s != SHIFTSPEC_OK) return fail(s);
  inst.reset(raw);
  const std::pair<const char*, const std::optional<double>*> overrides[] = {
      {"gridMax", &o.gridMax}, {"windingMax", &o.windingMax}, {"truncationN", &o.truncationN},
      {"tol", &o.tol},         {"decisionWidth", &o.decisionWidth}};
  for (const auto& [name, value] : overrides) {
    if (!value->has_value()) continue;
    s = shiftspec_set_budget(inst.get(), name, **value);
    if (s != SHIFTSPEC_OK) return fail(s);
  }
  return 0;
}

int cmd_analyze(const Options& o) {
  InstancePtr inst;
  if (int rc = load(o, inst)) return rc;
  char* json = nullptr;
  if (auto s = shiftspec_analyze(inst.get(), &json); s != SHIFTSPEC_OK) return fail(s);
  CString guard(json);
  std::cout << json << "\n";
  return 0;
}

int cmd_decide(const Options& o) {
  InstancePtr inst;
  if (int rc = load(o, inst)) return rc;
  const shiftspec_route route = o.route == "moduli" ? SHIFTSPEC_ROUTE_MODULI
                                : o.route == "both" ? SHIFTSPEC_ROUTE_BOTH
                                                    : SHIFTSPEC_ROUTE_GEOMETRIC;
  shiftspec_decision d = SHIFTSPEC_UNDECIDED;
  char* json = nullptr;
  if (auto s = shiftspec_decide(inst.get(), route, &d, &json); s != SHIFTSPEC_OK) return fail(s);
  CString guard(json);
  std::cout << json << "\n";
  return static_cast<int>(d);
}

int cmd_simulate(const Options& o) {
  InstancePtr inst;
  if (int rc = load(o, inst)) return rc;
  std::optional<std::string> target;
  if (!o.target.empty()) {
    target = read_file(o.target);
    if (!target) {
      std::cerr << "shiftspec: cannot open " << o.target << "\n";
      return kExitNoInput;
    }
  }
  const char* targetJson = target ? target->c_str() : nullptr;

  if (!o.x.empty()) {
    const auto x = read_file(o.x);
    if (!x) {
      std::cerr << "shiftspec: cannot open " << o.x << "\n";
      return kExitNoInput;
    }
    char* report = nullptr;
    char* envelope = nullptr;
    if (auto s = shiftspec_jset(inst.get(), x->c_str(), targetJson, o.seed, &report, &envelope);
        s != SHIFTSPEC_OK) {
      return fail(s);
    }
    CString g1(report), g2(envelope);
    std::cout << report << "\n";
    if (!write_file(o.envelopeCsv, envelope)) {
      std::cerr << "shiftspec: cannot write " << o.envelopeCsv << "\n";
      return kExitCantCreate;
    }
    return 0;
  }

  int ok = 0;
  char* witness = nullptr;
  char* csv = nullptr;
  if (auto s = shiftspec_simulate(inst.get(), targetJson, o.stages, &ok, &witness, &csv); s != SHIFTSPEC_OK) {
    return fail(s);
  }
  CString g1(witness), g2(csv);
  std::cout << witness << "\n";
  if (!write_file(o.csv, csv)) {
    std::cerr << "shiftspec: cannot write " << o.csv << "\n";
    return kExitCantCreate;
  }
  if (!ok) {
    std::cerr << "shiftspec: mixing witness failed its decay or residual check\n";
    return kExitSoftware;
  }
  return 0;
}

int cmd_plot(const Options& o) {
  InstancePtr inst;
  if (int rc = load(o, inst)) return rc;
  char* svg = nullptr;
  if (auto s = shiftspec_plot(inst.get(), &svg); s != SHIFTSPEC_OK) return fail(s);
  CString guard(svg);
  if (o.out.empty()) {
    std::cout << svg;
  } else if (!write_file(o.out, svg)) {
    std::cerr << "shiftspec: cannot write " << o.out << "\n";
    return kExitCantCreate;
  }
  return 0;
}

void add_budget_flags(CLI::App& app, Options& o) {
  app.add_option("--budget-grid", o.gridMax, "Maximum samples for the annulus scan");
  app.add_option("--budget-winding", o.windingMax, "Maximum samples for winding numbers");
  app.add_option("--trunc-n", o.truncationN, "Truncation length N of simulated vectors");
  app.add_option("--tol", o.tol, "Solver tolerance");
  app.add_option("--decision-width", o.decisionWidth, "Half-width of the abstention band");
  app.add_option("--seed", o.seed, "Seed for randomized experiments");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide and simulate J-class images f(B_w) of weighted backward shifts"};
  app.set_version_flag("--version", std::string(shiftspec_version()));
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "Print the spectral profile and picture");
  analyze->add_option("instance", o.instance, "Instance JSON file")->required();
  add_budget_flags(*analyze, o);

  auto* decide = app.add_subcommand("decide", "Decide J-class; exit 0 JCLASS, 1 NOT_JCLASS, 2 UNDECIDED");
  decide->add_option("instance", o.instance, "Instance JSON file")->required();
  decide->add_option("--route", o.route, "geometric, moduli or both")
      ->check(CLI::IsMember({"geometric", "moduli", "both"}));
  add_budget_flags(*decide, o);

  auto* simulate = app.add_subcommand("simulate", "Build a mixing witness (or a J-set experiment with --x)");
  simulate->add_option("instance", o.instance, "Instance JSON file")->required();
  simulate->add_option("--target", o.target, "Target vector JSON (default: all ones)");
  simulate->add_option("--stages", o.stages, "Number of witness stages")->check(CLI::Range(1u, 10000u));
  simulate->add_option("--csv", o.csv, "Stage table output")->capture_default_str();
  simulate->add_option("--x", o.x, "Run the J-set experiment for this vector");
  simulate->add_option("--envelope-csv", o.envelopeCsv, "Orbit envelope output (J-set experiment)")
      ->capture_default_str();
  add_budget_flags(*simulate, o);

  auto* plot = app.add_subcommand("plot", "Write an SVG of the annulus and its images");
  plot->add_option("instance", o.instance, "Instance JSON file")->required();
  plot->add_option("--out", o.out, "Output file (default: stdout)");
  add_budget_flags(*plot, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  if (analyze->parsed()) return cmd_analyze(o);
  if (decide->parsed()) return cmd_decide(o);
  if (simulate->parsed()) return cmd_simulate(o);
  return cmd_plot(o);
}
