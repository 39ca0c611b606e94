// Copyright 2026 The ddescrow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "dde/harness.hpp"

namespace {

void add_param_options(CLI::App* sub, dde::RunConfig& config) {
  sub->add_option("--price", config.params.price, "product price P_d")
      ->capture_default_str();
  sub->add_option("--value", config.params.value,
                  "buyer's product valuation V_d")
      ->capture_default_str();
  sub->add_option("--es", config.params.seller_deposit, "seller deposit E_S")
      ->capture_default_str();
  sub->add_option("--eb", config.params.buyer_deposit, "buyer deposit E_B")
      ->capture_default_str();
  sub->add_option("--gas", config.gas, "gas charged per reconciliation")
      ->capture_default_str();
  sub->add_option("--seed", config.seed, "deterministic seed")
      ->capture_default_str();
  sub->add_option("--out", config.output_path,
                  "write the primary document here instead of stdout");
}

bool parse_mismatch(const std::string& text, dde::RunConfig& config,
                    std::string& error) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    error = "--inject-mismatch expects ROW,COL";
    return false;
  }
  try {
    const int row = std::stoi(text.substr(0, comma));
    const int col = std::stoi(text.substr(comma + 1));
    if (row < 0 || row > 2 || col < 0 || col > 4) {
      error = "--inject-mismatch row must be 0..2 and col 0..4";
      return false;
    }
    config.inject_mismatch = {row, col};
  } catch (const std::exception&) {
    error = "--inject-mismatch expects ROW,COL integers";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dual-deposit escrow trade simulator and equilibrium analyzer"};
  app.set_config("--config", "", "read options from a key=value file");
  app.require_subcommand(1);

  dde::RunConfig config;
  std::string seller = "N";
  std::string buyer = "Nprime";
  std::string tie_break = "honest";
  std::string inject;

  CLI::App* run = app.add_subcommand(
      "run", "simulate one trade and write its transcript");
  add_param_options(run, config);
  run->add_option("--seller", seller, "seller action: N, F or G")
      ->check(CLI::IsMember({"N", "F", "G"}))
      ->capture_default_str();
  run->add_option("--buyer", buyer,
                  "buyer policy: Nprime, Fprime, Gprime, S or R")
      ->check(CLI::IsMember({"Nprime", "Fprime", "Gprime", "S", "R"}))
      ->capture_default_str();
  run->add_flag("--allow-vd-le-pd", config.allow_value_le_price,
                "proceed even when V_d <= P_d");

  CLI::App* matrix = app.add_subcommand(
      "matrix", "simulated and analytic 3x5 payoff tables plus a verdict");
  add_param_options(matrix, config);
  matrix->add_option("--format", config.format, "json or tsv")
      ->check(CLI::IsMember({"json", "tsv"}))
      ->capture_default_str();
  matrix
      ->add_option("--inject-mismatch", inject,
                   "testing: perturb analytic cell ROW,COL before comparing")
      ->group("");  // hidden
  matrix->add_flag("--allow-vd-le-pd", config.allow_value_le_price,
                   "proceed even when V_d <= P_d");

  CLI::App* analyze = app.add_subcommand(
      "analyze", "equilibrium analysis of the induced game");
  add_param_options(analyze, config);
  analyze->add_option("--tie-break", tie_break,
                      "selected view: honest or all")
      ->check(CLI::IsMember({"honest", "all"}))
      ->capture_default_str();
  analyze->add_option("--dot", config.dot_path,
                      "also write the game tree as DOT to this file");
  analyze->add_option("--format", config.format, "json or dot")
      ->check(CLI::IsMember({"json", "dot"}))
      ->capture_default_str();
  analyze->add_flag("--allow-vd-le-pd", config.allow_value_le_price,
                    "analyze even when V_d <= P_d");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "randomized property check over sampled parameters");
  sweep->add_option("--trials", config.trials, "number of sampled instances")
      ->capture_default_str();
  sweep->add_option("--seed", config.seed, "deterministic seed")
      ->capture_default_str();
  sweep->add_option("--out", config.output_path,
                    "write the report here instead of stdout");
  sweep->add_option("--price-min", config.ranges.price_min)
      ->capture_default_str();
  sweep->add_option("--price-max", config.ranges.price_max)
      ->capture_default_str();
  sweep->add_option("--margin-min", config.ranges.margin_min,
                    "minimum of V_d - P_d")
      ->capture_default_str();
  sweep->add_option("--margin-max", config.ranges.margin_max,
                    "maximum of V_d - P_d")
      ->capture_default_str();
  sweep->add_option("--es-min", config.ranges.es_min)->capture_default_str();
  sweep->add_option("--es-max", config.ranges.es_max)->capture_default_str();
  sweep->add_option("--eb-min", config.ranges.eb_min)->capture_default_str();
  sweep->add_option("--eb-max", config.ranges.eb_max)->capture_default_str();
  sweep->add_option("--jobs", config.jobs,
                    "worker threads (0 = hardware concurrency)")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  config.seller_action = *dde::parse_seller_action(seller);
  config.buyer_policy = *dde::parse_buyer_policy(buyer);
  config.tie_break = tie_break == "all" ? dde::TieBreak::ReportAll
                                        : dde::TieBreak::HonestFirst;
  if (!inject.empty()) {
    std::string error;
    if (!parse_mismatch(inject, config, error)) {
      std::cerr << "configuration error: " << error << "\n";
      return dde::kExitConfigError;
    }
  }

  if (app.got_subcommand(run)) {
    return dde::cmd_run(config, std::cout, std::cerr);
  }
  if (app.got_subcommand(matrix)) {
    return dde::cmd_matrix(config, std::cout, std::cerr);
  }
  if (app.got_subcommand(analyze)) {
    return dde::cmd_analyze(config, std::cout, std::cerr);
  }
  return dde::cmd_sweep(config, std::cout, std::cerr);
}
