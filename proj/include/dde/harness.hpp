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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "dde/actors.hpp"
#include "dde/game.hpp"
#include "dde/params.hpp"

namespace dde {

inline constexpr std::string_view kToolName = "ddescrow";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Exit codes: protocol outcomes (including cheat resolutions) are successful
// runs; only configuration problems and failed verification assertions are
// nonzero.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitAssertionFailed = 2;
inline constexpr int kExitIoError = 3;

struct SweepRanges {
  std::int64_t price_min = 1;
  std::int64_t price_max = 1'000'000;
  /// Sampled margin is added to the price to form the value, so
  /// margin_min >= 1 keeps V_d > P_d.
  std::int64_t margin_min = 1;
  std::int64_t margin_max = 1'000'000;
  std::int64_t es_min = 1;
  std::int64_t es_max = 1'000'000;
  std::int64_t eb_min = 1;
  std::int64_t eb_max = 1'000'000;
};

struct RunConfig {
  GameParams params;
  SellerAction seller_action = SellerAction::Honest;
  BuyerPolicy buyer_policy = BuyerPolicy::Honest;
  std::uint64_t seed = 42;
  std::int64_t gas = 0;
  bool allow_value_le_price = false;
  TieBreak tie_break = TieBreak::HonestFirst;
  std::string format = "json";  // json | tsv | dot
  std::string output_path;      // empty: primary document goes to stdout
  std::string dot_path;         // analyze: also write the tree as DOT here
  /// Test-only negative control: perturb one analytic cell (row, col) before
  /// the matrix comparison so the MISMATCH path stays honest.
  std::optional<std::pair<int, int>> inject_mismatch;
  // sweep:
  std::uint64_t trials = 1000;
  SweepRanges ranges;
  unsigned jobs = 0;  // 0: pick from hardware concurrency
};

/// Human-readable reason the configuration violates a protocol assumption,
/// or nullopt when it is runnable/analyzable as requested.
std::optional<std::string> validate_config(const RunConfig& config,
                                           bool for_trade);

/// Full replayable record of one simulated trade. Running the same config
/// again reproduces the serialized transcript byte for byte.
nlohmann::json make_transcript(const RunConfig& config,
                               const TradeOutcome& outcome);

/// Simulates one trade, writes the transcript, prints resolution and
/// payoffs.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Emits the simulated and analytic 3x5 payoff tables plus an equality
/// verdict. TSV format prints the simulated table alone: 3 rows of 5
/// tab-separated "seller,buyer" pairs.
int cmd_matrix(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Reports the equilibrium analysis under both tie-break conventions,
/// cross-validated by exhaustive profile enumeration. Optionally exports the
/// game tree as DOT.
int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Samples parameter instances and checks, per instance: the two solvers
/// agree, honest play is the selected equilibrium with payoff
/// (P_d, V_d - P_d) whenever the protocol assumptions hold, and the
/// simulated payoff matrix equals the analytic one. Any violation makes the
/// exit code nonzero and reports the counterexample parameters.
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace dde
