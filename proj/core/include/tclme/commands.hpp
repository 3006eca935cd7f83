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

#ifndef TCLME_COMMANDS_HPP_
#define TCLME_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>

#include "tclme/config.hpp"

namespace tclme {

inline constexpr char kVersionString[] = "0.1.0";

// Exit codes shared by every subcommand: 0 success, 1 validation failure,
// 2 numerical criterion failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitCriterion = 2;

struct CommandContext {
  std::filesystem::path output_dir = ".";
  bool quiet = false;
  std::uint64_t seed = 0;      // recorded in reports; nothing here is sampled
  std::string config_path;     // recorded in reports
};

// Propagate the configured model and write <prefix>_trajectory.csv plus
// <prefix>_report.json into the output directory.
int cmd_simulate(const RunConfig& cfg, const CommandContext& ctx);

// List the composition expansion of the order-n generator and write
// diagrams_<n>.json.
int cmd_diagrams(int n, const CommandContext& ctx);

// Compare perturbative generators against the exactly solvable model from
// the config's discrete bath; writes <prefix>_oracle.json.
int cmd_oracle_compare(const RunConfig& cfg, const CommandContext& ctx);

// Bath/system correlation functions: exact versus factorized-through-maps;
// writes <prefix>_correlation.csv and <prefix>_correlation.json.
int cmd_correlation(const RunConfig& cfg, const CommandContext& ctx);

}  // namespace tclme

#endif  // TCLME_COMMANDS_HPP_
