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

#include "shiftspec/shiftspec.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "shiftspec/io.hpp"

struct shiftspec_instance {
  shiftspec::Instance value;
};

namespace {

thread_local std::string g_error;
thread_local std::size_t g_line = 0;
thread_local std::size_t g_column = 0;

void set_error(const std::string& msg, std::size_t line = 0, std::size_t column = 0) {
  g_error = msg;
  g_line = line;
  g_column = column;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
shiftspec_status guarded(F&& body) {
  set_error("");
  try {
    return body();
  } catch (const shiftspec::ParseError& e) {
    set_error(e.what(), e.line(), e.column());
    return SHIFTSPEC_ERR_PARSE;
  } catch (const shiftspec::InvalidArgument& e) {
    set_error(e.what());
    return SHIFTSPEC_ERR_INVALID;
  } catch (const shiftspec::DomainError& e) {
    set_error(e.what());
    return SHIFTSPEC_ERR_DOMAIN;
  } catch (const shiftspec::Unsupported& e) {
    set_error(e.what());
    return SHIFTSPEC_ERR_UNSUPPORTED;
  } catch (const shiftspec::PreconditionFailed& e) {
    set_error(e.what());
    return SHIFTSPEC_ERR_PRECONDITION;
  } catch (const shiftspec::NumericalFailure& e) {
    set_error(e.what());
    return SHIFTSPEC_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SHIFTSPEC_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return SHIFTSPEC_ERR_INTERNAL;
  }
}

shiftspec_status null_arg(const char* name) {
  set_error(std::string("argument ") + name + " is NULL");
  return SHIFTSPEC_ERR_NULL;
}

shiftspec_decision to_c(shiftspec::Decision d) {
  switch (d) {
    case shiftspec::Decision::JClass: return SHIFTSPEC_JCLASS;
    case shiftspec::Decision::NotJClass: return SHIFTSPEC_NOT_JCLASS;
    case shiftspec::Decision::Undecided: return SHIFTSPEC_UNDECIDED;
  }
  return SHIFTSPEC_UNDECIDED;
}

shiftspec::TruncatedVector vector_or_ones(const char* json, std::size_t n) {
  if (!json) return shiftspec::TruncatedVector::constant(n, 1.0);
  return shiftspec::parse_vector(json, n);
}

}  // namespace

extern "C" {

const char* shiftspec_version(void) { return "1.0.0"; }

const char* shiftspec_last_error(void) { return g_error.c_str(); }

void shiftspec_last_error_position(size_t* line, size_t* column) {
  if (line) *line = g_line;
  if (column) *column = g_column;
}

shiftspec_status shiftspec_instance_parse(const char* json, shiftspec_instance** out) {
  if (!json) return null_arg("json");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new shiftspec_instance{shiftspec::parse_instance(json)};
    return SHIFTSPEC_OK;
  });
}

shiftspec_status shiftspec_instance_load(const char* path, shiftspec_instance** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    set_error(std::string("cannot open ") + path);
    return SHIFTSPEC_ERR_IO;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return shiftspec_instance_parse(text.c_str(), out);
}

void shiftspec_instance_free(shiftspec_instance* inst) { delete inst; }

shiftspec_status shiftspec_instance_to_json(const shiftspec_instance* inst, char** out) {
  if (!inst) return null_arg("inst");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = dup(shiftspec::instance_to_json(inst->value));
    return SHIFTSPEC_OK;
  });
}

shiftspec_status shiftspec_set_budget(shiftspec_instance* inst, const char* name, double value) {
  if (!inst) return null_arg("inst");
  if (!name) return null_arg("name");
  return guarded([&] {
    shiftspec::Budgets b = inst->value.budgets;
    const std::string key = name;
    auto as_count = [&](double v, std::size_t minimum) {
      if (!(v >= static_cast<double>(minimum)) || v != std::floor(v) || v > 1e15) {
        throw shiftspec::InvalidArgument(key + " must be an integer >= " + std::to_string(minimum));
      }
      return static_cast<std::size_t>(v);
    };
    if (key == "gridMax") {
      b.gridMax = as_count(value, 16);
    } else if (key == "windingMax") {
      b.windingMax = as_count(value, 16);
    } else if (key == "truncationN") {
      b.truncationN = as_count(value, 1);
    } else if (key == "tol" || key == "decisionWidth") {
      if (!(value > 0) || !std::isfinite(value)) throw shiftspec::InvalidArgument(key + " must be positive");
      (key == "tol" ? b.tol : b.decisionWidth) = value;
    } else {
      throw shiftspec::InvalidArgument("unknown budget " + key);
    }
    inst->value.budgets = b;
    return SHIFTSPEC_OK;
  });
}

shiftspec_status shiftspec_analyze(const shiftspec_instance* inst, char** json_out) {
  if (!inst) return null_arg("inst");
  if (!json_out) return null_arg("json_out");
  return guarded([&] {
    *json_out = dup(shiftspec::analysis_to_json(inst->value.op));
    return SHIFTSPEC_OK;
  });
}

shiftspec_status shiftspec_decide(const shiftspec_instance* inst, shiftspec_route route,
                                  shiftspec_decision* decision, char** json_out) {
  if (!inst) return null_arg("inst");
  if (!decision) return null_arg("decision");
  return guarded([&] {
    const auto& op = inst->value.op;
    const auto budget = inst->value.budgets.grid();
    std::string json;
    switch (route) {
      case SHIFTSPEC_ROUTE_GEOMETRIC: {
        const auto v = shiftspec::decide_geometric(op, budget);
        *decision = to_c(v.decision);
        json = shiftspec::verdict_to_json(v);
        break;
      }
      case SHIFTSPEC_ROUTE_MODULI: {
        const auto v = shiftspec::decide_moduli(op, budget);
        *decision = to_c(v.decision);
        json = shiftspec::verdict_to_json(v);
        break;
      }
      case SHIFTSPEC_ROUTE_BOTH: {
        const auto r = shiftspec::cross_check(op, budget);
        *decision = to_c(r.geometric.decision);
        json = shiftspec::consistency_to_json(r);
        break;
      }
      default:
        throw shiftspec::InvalidArgument("unknown route");
    }
    if (json_out) *json_out = dup(json);
    return SHIFTSPEC_OK;
  });
}

shiftspec_status shiftspec_simulate(const shiftspec_instance* inst, const char* target_json,
                                    unsigned stages, int* ok, char** witness_json, char** csv_out) {
  if (!inst) return null_arg("inst");
  if (!ok) return null_arg("ok");
  if (!witness_json) return null_arg("witness_json");
  return guarded([&] {
    const auto& b = inst->value.budgets;
    const auto y = vector_or_ones(target_json, b.truncationN);
    const auto w = shiftspec::mixing_witness(inst->value.op, y, stages, b.tol, b.grid());
    *ok = w.ok ? 1 : 0;
    *witness_json = dup(shiftspec::witness_to_json(w));
    if (csv_out) *csv_out = dup(shiftspec::witness_csv(w));
    return SHIFTSPEC_OK;
  });
}

shiftspec_status shiftspec_jset(const shiftspec_instance* inst, const char* x_json, const char* target_json,
                                uint64_t seed, char** report_json, char** envelope_csv) {
  if (!inst) return null_arg("inst");
  if (!x_json) return null_arg("x_json");
  if (!report_json) return null_arg("report_json");
  return guarded([&] {
    const auto& b = inst->value.budgets;
    const auto x = shiftspec::parse_vector(x_json, b.truncationN);
    const auto y = vector_or_ones(target_json, b.truncationN);
    shiftspec::JSetOptions opt;
    opt.seed = seed;
    opt.budget = b.grid();
    const auto r = shiftspec::jset_experiment(inst->value.op, x, {y}, opt);
    *report_json = dup(shiftspec::jset_to_json(r));
    if (envelope_csv) *envelope_csv = dup(shiftspec::envelope_csv(r.growth ? r.growth->envelope : std::vector<shiftspec::EnvelopeRow>{}));
    return SHIFTSPEC_OK;
  });
}

shiftspec_status shiftspec_plot(const shiftspec_instance* inst, char** svg_out) {
  if (!inst) return null_arg("inst");
  if (!svg_out) return null_arg("svg_out");
  return guarded([&] {
    const auto v = shiftspec::decide_geometric(inst->value.op, inst->value.budgets.grid());
    *svg_out = dup(shiftspec::plot_svg(inst->value.op, v));
    return SHIFTSPEC_OK;
  });
}

void shiftspec_string_free(char* s) { std::free(s); }

}  // extern "C"
