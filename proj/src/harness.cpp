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

#include "dde/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

namespace dde {

namespace {

nlohmann::json params_json(const GameParams& params) {
  return nlohmann::json{{"price", params.price},
                        {"value", params.value},
                        {"seller_deposit", params.seller_deposit},
                        {"buyer_deposit", params.buyer_deposit}};
}

nlohmann::json payoff_json(const PayoffPair& payoff) {
  return nlohmann::json{{"seller", payoff.seller}, {"buyer", payoff.buyer}};
}

nlohmann::json matrix_json(const PayoffMatrix& matrix) {
  nlohmann::json rows = nlohmann::json::object();
  for (SellerAction action : kAllSellerActions) {
    nlohmann::json row = nlohmann::json::object();
    for (BuyerPolicy policy : kAllBuyerPolicies) {
      row[std::string(label(policy))] = payoff_json(matrix.at(action, policy));
    }
    rows[std::string(label(action))] = std::move(row);
  }
  return rows;
}

std::string matrix_tsv(const PayoffMatrix& matrix) {
  std::ostringstream out;
  for (SellerAction action : kAllSellerActions) {
    bool first = true;
    for (BuyerPolicy policy : kAllBuyerPolicies) {
      const PayoffPair& cell = matrix.at(action, policy);
      if (!first) out << '\t';
      out << cell.seller << ',' << cell.buyer;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

/// Emits the primary document to the configured path, or to `out` when no
/// path was given. Returns an exit code.
int emit(const RunConfig& config, const std::string& document,
         std::ostream& out, std::ostream& err) {
  if (config.output_path.empty()) {
    out << document;
    return kExitOk;
  }
  std::ofstream file(config.output_path, std::ios::binary);
  if (!file) {
    err << "error: cannot open output file: " << config.output_path << "\n";
    return kExitIoError;
  }
  file << document;
  if (!file) {
    err << "error: failed writing output file: " << config.output_path
        << "\n";
    return kExitIoError;
  }
  return kExitOk;
}

/// Summary lines go to `out` when the document went to a file, otherwise to
/// `err` so the document stream stays machine-readable.
std::ostream& summary_stream(const RunConfig& config, std::ostream& out,
                             std::ostream& err) {
  return config.output_path.empty() ? err : out;
}

int map_trade_error(const TradeError& error, std::ostream& err) {
  err << "error: " << error.message << "\n";
  switch (error.code) {
    case TradeError::Code::InvalidParams:
    case TradeError::Code::WorldNotFresh:
    case TradeError::Code::EmptyReplayPool:
      return kExitConfigError;
    default:
      return kExitAssertionFailed;
  }
}

}  // namespace

std::optional<std::string> validate_config(const RunConfig& config,
                                           bool for_trade) {
  const GameParams& p = config.params;
  if (!p.within_bounds()) {
    return "parameters must be non-negative and at most 2^40";
  }
  if (config.gas < 0) return "gas must be non-negative";
  if (!config.allow_value_le_price && !p.value_exceeds_price()) {
    std::ostringstream msg;
    msg << "requires product value V_d > price P_d (got V_d=" << p.value
        << ", P_d=" << p.price << "); pass --allow-vd-le-pd to proceed";
    return msg.str();
  }
  if (for_trade) {
    if (p.price < 1) return "requires a positive price P_d";
    if (p.seller_deposit < 1) {
      return "requires a positive seller deposit E_S";
    }
    if (p.buyer_deposit < 1) return "requires a positive buyer deposit E_B";
    if (config.gas > p.seller_deposit || config.gas > p.buyer_deposit) {
      return "gas per reconciliation must not exceed either deposit";
    }
  }
  return std::nullopt;
}

nlohmann::json make_transcript(const RunConfig& config,
                               const TradeOutcome& outcome) {
  nlohmann::json header{
      {"tool", kToolName},
      {"version", kToolVersion},
      {"hash_algorithm", crypto::kHashAlgorithmName},
      {"seed", config.seed},
      {"params", params_json(config.params)},
      {"gas", config.gas},
      {"seller_action", label(config.seller_action)},
      {"buyer_policy", label(config.buyer_policy)},
  };
  nlohmann::json events = nlohmann::json::array();
  for (const TradeEvent& event : outcome.events) {
    nlohmann::json entry = event.data;
    entry["type"] = event.type;
    entry["ledger"] = event.ledger;
    events.push_back(std::move(entry));
  }
  return nlohmann::json{
      {"header", std::move(header)},
      {"events", std::move(events)},
      {"final",
       {{"phase", to_string(outcome.resolution.phase)},
        {"payoffs", payoff_json(PayoffPair{outcome.seller_payoff,
                                           outcome.buyer_payoff})}}}};
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (auto problem = validate_config(config, /*for_trade=*/true)) {
    err << "configuration error: " << *problem << "\n";
    return kExitConfigError;
  }
  TradeConfig trade{config.params,
                    Money{static_cast<std::uint64_t>(config.gas)},
                    config.allow_value_le_price};
  LedgerWorld world;
  auto outcome = run_trade(world, config.seller_action, config.buyer_policy,
                           trade, config.seed);
  if (!outcome) return map_trade_error(outcome.error(), err);

  const int rc = emit(config, dump(make_transcript(config, outcome.value())),
                      out, err);
  if (rc != kExitOk) return rc;

  summary_stream(config, out, err)
      << "resolution: " << to_string(outcome.value().resolution.phase)
      << "  payoffs: seller=" << outcome.value().seller_payoff
      << " buyer=" << outcome.value().buyer_payoff << "\n";
  return kExitOk;
}

int cmd_matrix(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (auto problem = validate_config(config, /*for_trade=*/true)) {
    err << "configuration error: " << *problem << "\n";
    return kExitConfigError;
  }
  auto simulated = simulated_payoff_matrix(
      config.params, Money{static_cast<std::uint64_t>(config.gas)},
      config.seed, config.allow_value_le_price);
  if (!simulated) return map_trade_error(simulated.error(), err);

  PayoffMatrix analytic = analytic_policy_matrix(config.params);
  if (config.inject_mismatch) {
    auto [row, col] = *config.inject_mismatch;
    analytic.cells[static_cast<std::size_t>(row)][static_cast<std::size_t>(
                                                      col)]
        .seller += 1;
  }

  nlohmann::json mismatches = nlohmann::json::array();
  for (SellerAction action : kAllSellerActions) {
    for (BuyerPolicy policy : kAllBuyerPolicies) {
      if (!(simulated.value().at(action, policy) ==
            analytic.at(action, policy))) {
        mismatches.push_back(
            {{"seller_action", label(action)},
             {"buyer_policy", label(policy)},
             {"simulated", payoff_json(simulated.value().at(action, policy))},
             {"analytic", payoff_json(analytic.at(action, policy))}});
      }
    }
  }
  const bool equal = mismatches.empty();

  std::string document;
  if (config.format == "tsv") {
    document = matrix_tsv(simulated.value());
  } else {
    document = dump(nlohmann::json{{"params", params_json(config.params)},
                                   {"gas", config.gas},
                                   {"seed", config.seed},
                                   {"simulated", matrix_json(simulated.value())},
                                   {"analytic", matrix_json(analytic)},
                                   {"verdict", equal ? "EQUAL" : "MISMATCH"},
                                   {"mismatches", mismatches}});
  }
  const int rc = emit(config, document, out, err);
  if (rc != kExitOk) return rc;

  auto& summary = summary_stream(config, out, err);
  summary << "matrix verdict: " << (equal ? "EQUAL" : "MISMATCH");
  if (!equal) {
    summary << " (" << mismatches.size() << " cell(s)";
    for (const auto& m : mismatches) {
      summary << " " << m["seller_action"].get<std::string>() << "/"
              << m["buyer_policy"].get<std::string>();
    }
    summary << ")";
  }
  summary << "\n";
  return equal ? kExitOk : kExitAssertionFailed;
}

int cmd_analyze(const RunConfig& config, std::ostream& out,
                std::ostream& err) {
  if (auto problem = validate_config(config, /*for_trade=*/false)) {
    err << "configuration error: " << *problem << "\n";
    return kExitConfigError;
  }
  const GameTree tree = build_tree(config.params);
  const SpneResult honest_first =
      backward_induction(tree, TieBreak::HonestFirst);
  const SpneResult report_all = backward_induction(tree, TieBreak::ReportAll);
  const SpneResult enumerated = enumerate_spne(tree);

  const bool solvers_agree =
      report_all.equilibria == enumerated.equilibria &&
      report_all.tie_nodes == enumerated.tie_nodes &&
      report_all.unique == enumerated.unique;

  nlohmann::json report{
      {"params", params_json(config.params)},
      {"assumptions",
       {{"deposits_positive", config.params.deposits_positive()},
        {"value_exceeds_price", config.params.value_exceeds_price()},
        {"satisfied", config.params.equilibrium_preconditions()}}},
      {"honest_first", spne_to_json(honest_first)},
      {"report_all", spne_to_json(report_all)},
      {"enumeration_cross_check", solvers_agree ? "ok" : "disagree"},
      {"selected", config.tie_break == TieBreak::HonestFirst ? "honest_first"
                                                             : "report_all"},
  };

  std::string document = config.format == "dot" ? to_dot(tree) : dump(report);
  const int rc = emit(config, document, out, err);
  if (rc != kExitOk) return rc;

  if (!config.dot_path.empty()) {
    std::ofstream file(config.dot_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open DOT file: " << config.dot_path << "\n";
      return kExitIoError;
    }
    file << to_dot(tree);
  }

  auto& summary = summary_stream(config, out, err);
  const SpneResult& selected =
      config.tie_break == TieBreak::HonestFirst ? honest_first : report_all;
  summary << "equilibria (" << (config.tie_break == TieBreak::HonestFirst
                                    ? "honest-first"
                                    : "report-all")
          << "): " << selected.equilibria.size();
  if (!selected.equilibria.empty()) {
    const Equilibrium& first = selected.equilibria.front();
    summary << "  first: seller=" << label(first.profile.seller)
            << " path payoff (" << first.path_payoff.seller << ", "
            << first.path_payoff.buyer << ")";
  }
  summary << "  ties at:";
  if (report_all.tie_nodes.empty()) {
    summary << " none";
  } else {
    for (SellerAction node : report_all.tie_nodes) {
      summary << " " << label(node);
    }
  }
  summary << "\n";
  if (!config.params.equilibrium_preconditions()) {
    summary << "note: protocol assumptions violated (need E_S, E_B > 0 and "
               "V_d > P_d); results describe the degenerate game\n";
  }
  if (!solvers_agree) {
    err << "error: backward induction and exhaustive enumeration disagree\n";
    return kExitAssertionFailed;
  }
  return kExitOk;
}

namespace {

struct TrialReport {
  GameParams params;
  bool boundary = false;       // sampled outside the assumption region
  bool solver_agreement = false;
  bool tie_at_garbage_node = false;
  bool claimed_unique = false;
  bool extra_ties = false;
  bool honest_selected = true;   // checks below run only off-boundary
  bool honest_in_set = true;
  bool oracle_equal = true;
  std::string failure;

  bool failed() const { return !failure.empty(); }
};

}  // namespace

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const SweepRanges& r = config.ranges;
  const auto bad_range = [](std::int64_t lo, std::int64_t hi) {
    return lo < 0 || hi < lo || hi > kMaxParamValue;
  };
  if (config.trials < 1) {
    err << "configuration error: trials must be at least 1\n";
    return kExitConfigError;
  }
  if (bad_range(r.price_min, r.price_max) || r.price_min < 1 ||
      bad_range(r.margin_min, r.margin_max) ||
      bad_range(r.es_min, r.es_max) || bad_range(r.eb_min, r.eb_max)) {
    err << "configuration error: sweep ranges must satisfy "
           "0 <= min <= max <= 2^40 (price minimum at least 1)\n";
    return kExitConfigError;
  }
  if (r.price_max > kMaxParamValue - r.margin_max) {
    err << "configuration error: price-max + margin-max must stay within "
           "2^40 so sampled values remain valid\n";
    return kExitConfigError;
  }

  std::vector<TrialReport> reports(config.trials);
  const auto run_one = [&](std::uint64_t index) {
    TrialReport& report = reports[index];
    DetRng rng(mix_seed(config.seed, 0x5EED0000ULL + index));
    GameParams params;
    params.price = static_cast<std::int64_t>(rng.next_in(
        static_cast<std::uint64_t>(r.price_min),
        static_cast<std::uint64_t>(r.price_max)));
    params.value = params.price + static_cast<std::int64_t>(rng.next_in(
                                      static_cast<std::uint64_t>(r.margin_min),
                                      static_cast<std::uint64_t>(r.margin_max)));
    params.seller_deposit = static_cast<std::int64_t>(
        rng.next_in(static_cast<std::uint64_t>(r.es_min),
                    static_cast<std::uint64_t>(r.es_max)));
    params.buyer_deposit = static_cast<std::int64_t>(
        rng.next_in(static_cast<std::uint64_t>(r.eb_min),
                    static_cast<std::uint64_t>(r.eb_max)));
    report.params = params;
    report.boundary = !params.equilibrium_preconditions();

    const GameTree tree = build_tree(params);
    const SpneResult all = backward_induction(tree, TieBreak::ReportAll);
    const SpneResult enumerated = enumerate_spne(tree);
    report.solver_agreement = all.equilibria == enumerated.equilibria &&
                              all.tie_nodes == enumerated.tie_nodes &&
                              all.unique == enumerated.unique;
    if (!report.solver_agreement) {
      report.failure = "solver disagreement";
      return;
    }
    report.tie_at_garbage_node =
        std::find(all.tie_nodes.begin(), all.tie_nodes.end(),
                  SellerAction::Garbage) != all.tie_nodes.end();
    report.claimed_unique = all.unique;
    report.extra_ties = all.tie_nodes.size() > 1;
    if (!report.tie_at_garbage_node || report.claimed_unique) {
      report.failure = "tie reporting broken at the garbage subgame";
      return;
    }
    if (report.boundary) return;

    // Inside the assumption region: honest play must be the selected
    // equilibrium with the published payoff, and simulation must match the
    // closed-form payoffs on the whole grid.
    const SpneResult honest = backward_induction(tree, TieBreak::HonestFirst);
    const PureProfile honest_profile{
        SellerAction::Honest,
        {BuyerEdge::Honest, BuyerEdge::Honest, BuyerEdge::Honest}};
    const PayoffPair expected{params.price, params.value - params.price};
    report.honest_selected = honest.equilibria.size() == 1 &&
                             honest.equilibria.front().profile ==
                                 honest_profile &&
                             honest.equilibria.front().path_payoff == expected;
    if (!report.honest_selected) {
      report.failure = "honest profile not selected by backward induction";
      return;
    }
    report.honest_in_set =
        std::any_of(all.equilibria.begin(), all.equilibria.end(),
                    [&](const Equilibrium& eq) {
                      return eq.profile == honest_profile &&
                             eq.path_payoff == expected;
                    });
    if (!report.honest_in_set) {
      report.failure = "honest profile missing from the equilibrium set";
      return;
    }
    auto simulated = simulated_payoff_matrix(params, Money{0},
                                             mix_seed(config.seed, index));
    report.oracle_equal =
        simulated.ok() &&
        simulated.value() == analytic_policy_matrix(params);
    if (!report.oracle_equal) {
      report.failure = simulated.ok()
                           ? "simulated payoffs diverge from analytic payoffs"
                           : ("simulation failed: " +
                              simulated.error().message);
    }
  };

  unsigned jobs = config.jobs;
  if (jobs == 0) {
    jobs = std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
  }
  if (jobs <= 1 || config.trials < 2) {
    for (std::uint64_t i = 0; i < config.trials; ++i) run_one(i);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::uint64_t i = next.fetch_add(1); i < config.trials;
             i = next.fetch_add(1)) {
          run_one(i);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  std::uint64_t passed = 0;
  std::uint64_t boundary = 0;
  std::uint64_t extra_ties = 0;
  nlohmann::json counterexamples = nlohmann::json::array();
  for (std::uint64_t i = 0; i < config.trials; ++i) {
    const TrialReport& report = reports[i];
    if (report.boundary) ++boundary;
    if (report.extra_ties) ++extra_ties;
    if (report.failed()) {
      if (counterexamples.size() < 10) {
        counterexamples.push_back({{"trial", i},
                                   {"params", params_json(report.params)},
                                   {"failure", report.failure}});
      }
    } else {
      ++passed;
    }
  }
  const std::uint64_t failed = config.trials - passed;

  nlohmann::json report{
      {"trials", config.trials},
      {"seed", config.seed},
      {"ranges",
       {{"price", {r.price_min, r.price_max}},
        {"margin", {r.margin_min, r.margin_max}},
        {"seller_deposit", {r.es_min, r.es_max}},
        {"buyer_deposit", {r.eb_min, r.eb_max}}}},
      {"passed", passed},
      {"failed", failed},
      {"assumption_boundary_trials", boundary},
      {"extra_tie_trials", extra_ties},
      {"counterexamples", std::move(counterexamples)},
  };
  const int rc = emit(config, dump(report), out, err);
  if (rc != kExitOk) return rc;

  summary_stream(config, out, err)
      << "sweep: " << passed << "/" << config.trials << " passed, " << boundary
      << " at the assumption boundary\n";
  if (failed > 0) {
    err << "error: " << failed << " trial(s) failed; see counterexamples\n";
    return kExitAssertionFailed;
  }
  return kExitOk;
}

}  // namespace dde
