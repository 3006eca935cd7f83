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

#ifndef TCLME_CONFIG_HPP_
#define TCLME_CONFIG_HPP_

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tclme/bath.hpp"
#include "tclme/grid.hpp"
#include "tclme/types.hpp"

namespace tclme {

struct BathConfig {
  enum class Kind { ohmic, drude, discrete };
  Kind kind = Kind::ohmic;
  double eta = 0.0;    // ohmic
  double cutoff = 0.0;
  double reorg = 0.0;  // drude
  double width = 0.0;
  double beta = 0.0;   // <= 0: zero temperature / ground state
  double mean = 0.0;   // static <B>, gaussian kinds only
  std::vector<BathMode> modes;  // discrete
};

struct ResummationConfig {
  bool enabled = false;
  double svd_cutoff = 1e-10;
  int epsilon_steps = 5;
};

struct OracleConfig {
  std::vector<double> lambdas;  // strictly decreasing coupling scales
  std::array<double, 2> tcl2_ratio_window{8.0, 32.0};
  std::array<double, 2> tcl4_ratio_window{32.0, 128.0};
};

struct CorrelationConfig {
  Mat op_a, op_b, op_c;
  double t1 = 0.0, t2 = 0.0;  // must both land on grid points, t2 >= t1
  std::vector<double> lambdas_two_point;
  std::array<double, 2> two_point_ratio_window{8.0, 32.0};
  std::vector<double> lambdas_three_point;  // first = strong, last = weak
  double three_point_strong_min = 1e-3;
  double three_point_weak_max = 1e-5;
};

struct RunConfig {
  Mat h_s, s;
  Mat rho0;
  double lambda = 1.0;  // overall scale on the coupling operator
  BathConfig bath;
  int tcl_order = 2;
  ResummationConfig resummation;
  TimeGrid grid{0.0, 1e-2, 100};
  std::string output_prefix = "run";
  std::optional<OracleConfig> oracle;
  std::optional<CorrelationConfig> correlation;

  std::string canonical;  // sorted-key minimal JSON the hash covers
  std::string hash;       // FNV-1a 64 of `canonical`, hex
};

// Carries every problem found in one pass; what() joins them.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace tclme

#endif  // TCLME_CONFIG_HPP_
