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

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tclme/commands.hpp"
#include "tclme/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"time-convolutionless generators for open quantum systems"};
  app.set_version_flag("--version", tclme::kVersionString);
  app.require_subcommand(1);

  std::string output_dir = ".";
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--output-dir", output_dir,
                 "directory result files are written to");
  app.add_option("--seed", seed, "seed recorded in report metadata");
  app.add_flag("--quiet", quiet, "suppress progress output");

  std::string sim_config, oracle_config, corr_config;
  int diagram_order = 2;

  CLI::App* sim =
      app.add_subcommand("simulate", "propagate a configured model");
  sim->add_option("config", sim_config, "JSON config file")->required();

  CLI::App* dia = app.add_subcommand(
      "diagrams", "list the composition expansion of one generator order");
  dia->add_option("order", diagram_order, "expansion order n")->required();

  CLI::App* orc = app.add_subcommand(
      "oracle-compare", "compare generators against the exactly solved model");
  orc->add_option("config", oracle_config, "JSON config file")->required();

  CLI::App* cor = app.add_subcommand(
      "correlation", "exact versus factorized correlation functions");
  cor->add_option("config", corr_config, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tclme::kExitInvalid;
  }

  tclme::CommandContext ctx;
  ctx.output_dir = output_dir;
  ctx.seed = seed;
  ctx.quiet = quiet;

  try {
    std::error_code ec;
    std::filesystem::create_directories(ctx.output_dir, ec);
    if (sim->parsed()) {
      ctx.config_path = sim_config;
      return tclme::cmd_simulate(tclme::parse_config_file(sim_config), ctx);
    }
    if (dia->parsed()) {
      return tclme::cmd_diagrams(diagram_order, ctx);
    }
    if (orc->parsed()) {
      ctx.config_path = oracle_config;
      return tclme::cmd_oracle_compare(tclme::parse_config_file(oracle_config),
                                       ctx);
    }
    if (cor->parsed()) {
      ctx.config_path = corr_config;
      return tclme::cmd_correlation(tclme::parse_config_file(corr_config),
                                    ctx);
    }
  } catch (const tclme::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return tclme::kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tclme::kExitInvalid;
  }
  return tclme::kExitInvalid;
}
