// Copyright 2026 The tclme Authors
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
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tclme/algebra.hpp"
#include "tclme/config.hpp"
#include "tclme/io.hpp"

namespace tclme {
namespace {

using nlohmann::json;

std::string join_errors(const std::vector<std::string>& errors) {
  std::string out = "invalid config";
  for (const auto& e : errors) {
    out += "\n  - ";
    out += e;
  }
  return out;
}

class Collector {
 public:
  void add(std::string msg) { errors_.push_back(std::move(msg)); }
  bool ok() const { return errors_.empty(); }
  std::vector<std::string> take() { return std::move(errors_); }

 private:
  std::vector<std::string> errors_;
};

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed, Collector& errs) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(
        allowed.begin(), allowed.end(),
        [&](const char* a) { return it.key() == a; });
    if (!known) errs.add(path + ": unknown key \"" + it.key() + "\"");
  }
}

const json* get_object(const json& parent, const std::string& name,
                       const char* key, bool required, Collector& errs) {
  const auto it = parent.find(key);
  if (it == parent.end()) {
    if (required) errs.add(name + "." + key + " is missing");
    return nullptr;
  }
  if (!it->is_object()) {
    errs.add(name + "." + key + " must be an object");
    return nullptr;
  }
  return &*it;
}

std::optional<double> get_number(const json& parent, const std::string& name,
                                 const char* key, bool required,
                                 Collector& errs) {
  const auto it = parent.find(key);
  if (it == parent.end()) {
    if (required) errs.add(name + "." + key + " is missing");
    return std::nullopt;
  }
  if (!it->is_number()) {
    errs.add(name + "." + key + " must be a number");
    return std::nullopt;
  }
  return it->get<double>();
}

std::optional<int> get_int(const json& parent, const std::string& name,
                           const char* key, bool required, Collector& errs) {
  const auto it = parent.find(key);
  if (it == parent.end()) {
    if (required) errs.add(name + "." + key + " is missing");
    return std::nullopt;
  }
  if (!it->is_number_integer()) {
    errs.add(name + "." + key + " must be an integer");
    return std::nullopt;
  }
  return it->get<int>();
}

std::optional<Mat> parse_matrix(const json& j, const std::string& name,
                                Collector& errs) {
  if (!j.is_array() || j.empty()) {
    errs.add(name + " must be a nonempty array of rows");
    return std::nullopt;
  }
  const int rows = static_cast<int>(j.size());
  int cols = -1;
  Mat m;
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array()) {
      errs.add(name + " must be an array of rows");
      return std::nullopt;
    }
    if (cols < 0) {
      cols = static_cast<int>(row.size());
      if (cols != rows) {
        errs.add(name + " must be square");
        return std::nullopt;
      }
      m = Mat::Zero(rows, cols);
    }
    if (static_cast<int>(row.size()) != cols) {
      errs.add(name + " rows must have equal length");
      return std::nullopt;
    }
    for (int c = 0; c < cols; ++c) {
      const json& e = row[c];
      if (!(e.is_array() && e.size() == 2 && e[0].is_number() &&
            e[1].is_number())) {
        errs.add(name + " entries must be [re, im] pairs");
        return std::nullopt;
      }
      m(r, c) = Cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

std::optional<std::vector<double>> parse_lambdas(const json& parent,
                                                 const std::string& name,
                                                 const char* key,
                                                 bool required,
                                                 Collector& errs) {
  const auto it = parent.find(key);
  if (it == parent.end()) {
    if (required) errs.add(name + "." + key + " is missing");
    return std::nullopt;
  }
  if (!it->is_array() || it->size() < 2) {
    errs.add(name + "." + key + " must list at least two coupling scales");
    return std::nullopt;
  }
  std::vector<double> vals;
  for (const json& e : *it) {
    if (!e.is_number()) {
      errs.add(name + "." + key + " must contain numbers");
      return std::nullopt;
    }
    vals.push_back(e.get<double>());
  }
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] <= 0.0 || (i > 0 && vals[i] >= vals[i - 1])) {
      errs.add(name + "." + key +
               " must be positive and strictly decreasing");
      return std::nullopt;
    }
  }
  return vals;
}

std::optional<std::array<double, 2>> parse_window(const json& parent,
                                                  const std::string& name,
                                                  const char* key,
                                                  Collector& errs) {
  const auto it = parent.find(key);
  if (it == parent.end()) return std::nullopt;
  if (!(it->is_array() && it->size() == 2 && (*it)[0].is_number() &&
        (*it)[1].is_number())) {
    errs.add(name + "." + key + " must be a [low, high] pair");
    return std::nullopt;
  }
  const std::array<double, 2> w{(*it)[0].get<double>(),
                                (*it)[1].get<double>()};
  if (!(w[0] > 0.0 && w[1] > w[0])) {
    errs.add(name + "." + key + " must satisfy 0 < low < high");
    return std::nullopt;
  }
  return w;
}

bool hermitian_or_complain(const Mat& m, const std::string& name,
                           Collector& errs) {
  if (!is_hermitian(m)) {
    errs.add(name + " must be Hermitian");
    return false;
  }
  return true;
}

// True when t lands on a grid node; fills k with the node index.
bool on_grid(const TimeGrid& grid, double t, int* k) {
  const double raw = (t - grid.t0) / grid.dt;
  const long long rounded = std::llround(raw);
  if (rounded < 0 || rounded > grid.n_steps) return false;
  const double snapped = grid.time(static_cast<int>(rounded));
  if (std::abs(t - snapped) > 1e-9 * std::max(1.0, std::abs(t))) return false;
  *k = static_cast<int>(rounded);
  return true;
}

void parse_bath(const json& bath, RunConfig& cfg, Collector& errs) {
  const auto kind_it = bath.find("kind");
  if (kind_it == bath.end() || !kind_it->is_string()) {
    errs.add("bath.kind must be \"ohmic\", \"drude\", or \"discrete\"");
    return;
  }
  const std::string kind = kind_it->get<std::string>();
  if (kind == "ohmic") {
    cfg.bath.kind = BathConfig::Kind::ohmic;
    check_keys(bath, "bath", {"kind", "eta", "cutoff", "beta", "mean"}, errs);
    if (auto v = get_number(bath, "bath", "eta", true, errs)) {
      if (*v < 0.0) {
        errs.add("bath.eta must be >= 0");
      } else {
        cfg.bath.eta = *v;
      }
    }
    if (auto v = get_number(bath, "bath", "cutoff", true, errs)) {
      if (*v <= 0.0) {
        errs.add("bath.cutoff must be positive");
      } else {
        cfg.bath.cutoff = *v;
      }
    }
  } else if (kind == "drude") {
    cfg.bath.kind = BathConfig::Kind::drude;
    check_keys(bath, "bath", {"kind", "reorg", "width", "beta", "mean"},
               errs);
    if (auto v = get_number(bath, "bath", "reorg", true, errs)) {
      if (*v < 0.0) {
        errs.add("bath.reorg must be >= 0");
      } else {
        cfg.bath.reorg = *v;
      }
    }
    if (auto v = get_number(bath, "bath", "width", true, errs)) {
      if (*v <= 0.0) {
        errs.add("bath.width must be positive");
      } else {
        cfg.bath.width = *v;
      }
    }
  } else if (kind == "discrete") {
    cfg.bath.kind = BathConfig::Kind::discrete;
    check_keys(bath, "bath", {"kind", "beta", "modes"}, errs);
    const auto modes_it = bath.find("modes");
    if (modes_it == bath.end() || !modes_it->is_array() ||
        modes_it->empty()) {
      errs.add("bath.modes must be a nonempty array");
    } else {
      int idx = 0;
      for (const json& mj : *modes_it) {
        const std::string mname = "bath.modes[" + std::to_string(idx) + "]";
        ++idx;
        if (!mj.is_object()) {
          errs.add(mname + " must be an object");
          continue;
        }
        BathMode mode;
        const auto mk = mj.find("kind");
        if (mk == mj.end() || !mk->is_string()) {
          errs.add(mname + ".kind must be \"qubit\" or \"oscillator\"");
          continue;
        }
        const std::string ms = mk->get<std::string>();
        if (ms == "qubit") {
          mode.kind = BathMode::Kind::qubit;
          check_keys(mj, mname, {"kind", "frequency", "coupling"}, errs);
        } else if (ms == "oscillator") {
          mode.kind = BathMode::Kind::oscillator;
          check_keys(mj, mname, {"kind", "frequency", "coupling", "n_max"},
                     errs);
          if (auto n = get_int(mj, mname, "n_max", false, errs)) {
            if (*n < 1) {
              errs.add(mname + ".n_max must be at least 1");
            } else {
              mode.n_max = *n;
            }
          }
        } else {
          errs.add(mname + ".kind must be \"qubit\" or \"oscillator\"");
          continue;
        }
        if (auto f = get_number(mj, mname, "frequency", true, errs)) {
          if (*f <= 0.0) {
            errs.add(mname + ".frequency must be positive");
          } else {
            mode.frequency = *f;
          }
        }
        if (auto g = get_number(mj, mname, "coupling", true, errs)) {
          mode.coupling = *g;
        }
        cfg.bath.modes.push_back(mode);
      }
    }
  } else {
    errs.add("bath.kind must be \"ohmic\", \"drude\", or \"discrete\"");
    return;
  }
  if (auto v = get_number(bath, "bath", "beta", false, errs)) {
    cfg.bath.beta = *v;
  }
  if (cfg.bath.kind != BathConfig::Kind::discrete) {
    if (auto v = get_number(bath, "bath", "mean", false, errs)) {
      cfg.bath.mean = *v;
    }
  }
}

RunConfig parse_config_json(const json& root, Collector& errs) {
  RunConfig cfg;
  if (!root.is_object()) {
    errs.add("config root must be a JSON object");
    return cfg;
  }
  check_keys(root, "config",
             {"system", "bath", "method", "grid", "lambda", "initial_state",
              "output", "oracle", "correlation"},
             errs);

  int dim = 0;
  if (const json* sys = get_object(root, "config", "system", true, errs)) {
    check_keys(*sys, "system", {"hamiltonian", "coupling"}, errs);
    const auto h_it = sys->find("hamiltonian");
    if (h_it == sys->end()) {
      errs.add("system.hamiltonian is missing");
    } else if (auto h = parse_matrix(*h_it, "system.hamiltonian", errs)) {
      if (hermitian_or_complain(*h, "system.hamiltonian", errs)) {
        cfg.h_s = *h;
        dim = static_cast<int>(cfg.h_s.rows());
      }
    }
    const auto s_it = sys->find("coupling");
    if (s_it == sys->end()) {
      errs.add("system.coupling is missing");
    } else if (auto s = parse_matrix(*s_it, "system.coupling", errs)) {
      if (hermitian_or_complain(*s, "system.coupling", errs)) {
        if (dim > 0 && s->rows() != dim) {
          errs.add("system.coupling dimension differs from the hamiltonian");
        } else {
          cfg.s = *s;
        }
      }
    }
  }

  if (const json* bath = get_object(root, "config", "bath", true, errs)) {
    parse_bath(*bath, cfg, errs);
  }

  if (const json* method = get_object(root, "config", "method", false, errs)) {
    check_keys(*method, "method", {"tcl_order", "resummation"}, errs);
    if (auto n = get_int(*method, "method", "tcl_order", false, errs)) {
      if (*n != 2 && *n != 4) {
        errs.add("method.tcl_order must be 2 or 4");
      } else {
        cfg.tcl_order = *n;
      }
    }
    if (const json* res =
            get_object(*method, "method", "resummation", false, errs)) {
      check_keys(*res, "method.resummation",
                 {"enabled", "svd_cutoff", "epsilon_steps"}, errs);
      const auto en = res->find("enabled");
      if (en != res->end()) {
        if (!en->is_boolean()) {
          errs.add("method.resummation.enabled must be a boolean");
        } else {
          cfg.resummation.enabled = en->get<bool>();
        }
      }
      if (auto v =
              get_number(*res, "method.resummation", "svd_cutoff", false,
                         errs)) {
        if (!(*v > 0.0 && *v < 1.0)) {
          errs.add("method.resummation.svd_cutoff must lie in (0, 1)");
        } else {
          cfg.resummation.svd_cutoff = *v;
        }
      }
      if (auto v = get_int(*res, "method.resummation", "epsilon_steps", false,
                           errs)) {
        if (*v < 1) {
          errs.add("method.resummation.epsilon_steps must be at least 1");
        } else {
          cfg.resummation.epsilon_steps = *v;
        }
      }
    }
  }

  bool grid_ok = false;
  if (const json* grid = get_object(root, "config", "grid", true, errs)) {
    check_keys(*grid, "grid", {"t0", "dt", "n_steps"}, errs);
    double t0 = 0.0;
    if (auto v = get_number(*grid, "grid", "t0", false, errs)) t0 = *v;
    const auto dt = get_number(*grid, "grid", "dt", true, errs);
    const auto n = get_int(*grid, "grid", "n_steps", true, errs);
    if (dt && *dt <= 0.0) errs.add("grid.dt must be positive");
    if (n && *n < 1) errs.add("grid.n_steps must be at least 1");
    if (dt && *dt > 0.0 && n && *n >= 1) {
      cfg.grid = TimeGrid(t0, *dt, *n);
      grid_ok = true;
    }
  }

  {
    const auto it = root.find("lambda");
    if (it != root.end()) {
      if (!it->is_number()) {
        errs.add("lambda must be a number");
      } else {
        cfg.lambda = it->get<double>();
      }
    }
  }

  {
    const auto it = root.find("initial_state");
    if (it == root.end()) {
      errs.add("initial_state is missing");
    } else if (auto rho = parse_matrix(*it, "initial_state", errs)) {
      try {
        validate_density_matrix(*rho, "initial_state");
        if (dim > 0 && rho->rows() != dim) {
          errs.add("initial_state dimension differs from the system");
        } else {
          cfg.rho0 = *rho;
        }
      } catch (const std::exception& e) {
        errs.add(e.what());
      }
    }
  }

  if (const json* out = get_object(root, "config", "output", false, errs)) {
    check_keys(*out, "output", {"prefix"}, errs);
    const auto it = out->find("prefix");
    if (it != out->end()) {
      if (!it->is_string() || it->get<std::string>().empty()) {
        errs.add("output.prefix must be a nonempty string");
      } else {
        const std::string p = it->get<std::string>();
        if (p.find('/') != std::string::npos ||
            p.find('\\') != std::string::npos) {
          errs.add("output.prefix must not contain path separators");
        } else {
          cfg.output_prefix = p;
        }
      }
    }
  }

  if (const json* orc = get_object(root, "config", "oracle", false, errs)) {
    if (cfg.bath.kind != BathConfig::Kind::discrete) {
      errs.add("oracle comparisons require a discrete bath");
    }
    check_keys(*orc, "oracle",
               {"lambdas", "tcl2_ratio_window", "tcl4_ratio_window"}, errs);
    OracleConfig oc;
    if (auto l = parse_lambdas(*orc, "oracle", "lambdas", true, errs)) {
      oc.lambdas = std::move(*l);
    }
    if (auto w = parse_window(*orc, "oracle", "tcl2_ratio_window", errs)) {
      oc.tcl2_ratio_window = *w;
    }
    if (auto w = parse_window(*orc, "oracle", "tcl4_ratio_window", errs)) {
      oc.tcl4_ratio_window = *w;
    }
    cfg.oracle = std::move(oc);
  }

  if (const json* cor =
          get_object(root, "config", "correlation", false, errs)) {
    if (cfg.bath.kind != BathConfig::Kind::discrete) {
      errs.add("correlation checks require a discrete bath");
    }
    check_keys(*cor, "correlation",
               {"op_a", "op_b", "op_c", "t1", "t2", "lambdas_two_point",
                "two_point_ratio_window", "lambdas_three_point",
                "three_point_strong_min", "three_point_weak_max"},
               errs);
    CorrelationConfig cc;
    for (const char* key : {"op_a", "op_b", "op_c"}) {
      const auto it = cor->find(key);
      if (it == cor->end()) {
        errs.add(std::string("correlation.") + key + " is missing");
        continue;
      }
      auto op = parse_matrix(*it, std::string("correlation.") + key, errs);
      if (!op) continue;
      if (dim > 0 && op->rows() != dim) {
        errs.add(std::string("correlation.") + key +
                 " dimension differs from the system");
        continue;
      }
      if (key[3] == 'a') {
        cc.op_a = *op;
      } else if (key[3] == 'b') {
        cc.op_b = *op;
      } else {
        cc.op_c = *op;
      }
    }
    const auto t1 = get_number(*cor, "correlation", "t1", true, errs);
    const auto t2 = get_number(*cor, "correlation", "t2", true, errs);
    if (t1 && t2) {
      if (*t1 < 0.0 || *t2 < *t1) {
        errs.add("correlation times must satisfy 0 <= t1 <= t2");
      } else if (grid_ok) {
        int k1 = 0, k2 = 0;
        if (!on_grid(cfg.grid, *t1, &k1) || !on_grid(cfg.grid, *t2, &k2)) {
          errs.add("correlation times must land on grid points");
        } else {
          cc.t1 = *t1;
          cc.t2 = *t2;
        }
      }
    }
    if (auto l = parse_lambdas(*cor, "correlation", "lambdas_two_point",
                               false, errs)) {
      cc.lambdas_two_point = std::move(*l);
    }
    if (auto w =
            parse_window(*cor, "correlation", "two_point_ratio_window",
                         errs)) {
      cc.two_point_ratio_window = *w;
    }
    if (auto l = parse_lambdas(*cor, "correlation", "lambdas_three_point",
                               false, errs)) {
      cc.lambdas_three_point = std::move(*l);
    }
    if (auto v = get_number(*cor, "correlation", "three_point_strong_min",
                            false, errs)) {
      cc.three_point_strong_min = *v;
    }
    if (auto v = get_number(*cor, "correlation", "three_point_weak_max",
                            false, errs)) {
      cc.three_point_weak_max = *v;
    }
    cfg.correlation = std::move(cc);
  }

  return cfg;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
  }
  Collector errs;
  RunConfig cfg = parse_config_json(root, errs);
  if (!errs.ok()) throw ConfigError(errs.take());
  cfg.canonical = root.dump();
  cfg.hash = hex64(fnv1a64(cfg.canonical));
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError({"cannot open config file: " + path});
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace tclme
