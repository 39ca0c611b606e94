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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dde/actors.hpp"
#include "dde/params.hpp"
#include "dde/result.hpp"

namespace dde {

// The trade induces a two-stage extensive-form game: the seller moves first
// (N, F or G), then the buyer replies. Replies that the contract cannot
// distinguish share an edge, which collapses the five buyer policies to three
// edges per node: a complaint with valid evidence (F', and S after an honest
// delivery), an unanswerable response (G' or staying silent, R), and the
// honest reply N'.

enum class BuyerEdge { ValidComplaint, GarbageOrSilent, Honest };

inline constexpr std::array<BuyerEdge, 3> kAllBuyerEdges = {
    BuyerEdge::ValidComplaint, BuyerEdge::GarbageOrSilent, BuyerEdge::Honest};

/// Display label of a buyer edge at the node reached by `at_node`:
/// "F'/S" under N but "F'" elsewhere (S exists only against an honest
/// delivery), "G'/R" and "N'" everywhere.
std::string_view edge_label(SellerAction at_node, BuyerEdge edge);

/// Projects a raw buyer policy onto the edge its play lands on. Replay and a
/// frivolous dispute coincide under an honest delivery; against F or G the
/// frivolous buyer has no proof of honest delivery to submit, so its
/// degraded complaint lands on the honest-reply edge.
BuyerEdge policy_edge(SellerAction seller_action, BuyerPolicy policy);

/// Closed-form payoff of one leaf, exact integers:
///
///            ValidComplaint        GarbageOrSilent        Honest
///   N   (P_d, V_d-P_d-E_B)   (-E_S, V_d-P_d-E_B)    (P_d, V_d-P_d)
///   F   (P_d,     -P_d-E_B)  (-E_S,     -P_d-E_B)   (-E_S, 0)
///   G   (P_d,     -P_d-E_B)  (-E_S,     -P_d-E_B)   (-E_S, -P_d-E_B)
PayoffPair analytic_payoff(const GameParams& params, SellerAction seller_edge,
                           BuyerEdge buyer_edge);

struct GameLeaf {
  BuyerEdge edge = BuyerEdge::Honest;
  PayoffPair payoff;
};

struct BuyerNode {
  SellerAction reached_by = SellerAction::Honest;
  std::array<GameLeaf, 3> leaves;  // indexed by BuyerEdge
};

/// The full tree: one seller root, three buyer nodes, nine leaves. The
/// topology never depends on the parameters.
struct GameTree {
  GameParams params;
  std::array<BuyerNode, 3> nodes;  // indexed by SellerAction
};

GameTree build_tree(const GameParams& params);

std::string to_dot(const GameTree& tree);
nlohmann::json tree_to_json(const GameTree& tree);

/// One buyer edge per node, indexed by the seller move reaching the node.
using BuyerStrategy = std::array<BuyerEdge, 3>;

struct PureProfile {
  SellerAction seller = SellerAction::Honest;
  BuyerStrategy buyer{BuyerEdge::Honest, BuyerEdge::Honest, BuyerEdge::Honest};

  friend bool operator==(const PureProfile&, const PureProfile&) = default;
};

struct Equilibrium {
  PureProfile profile;
  PayoffPair path_payoff;

  friend bool operator==(const Equilibrium&, const Equilibrium&) = default;
};

/// HonestFirst resolves indifference in favor of the honest move (the
/// convention behind the protocol's headline claim); ReportAll returns every
/// pure-strategy equilibrium so ties are documented instead of hidden.
enum class TieBreak { HonestFirst, ReportAll };

struct SpneResult {
  /// Canonically ordered. HonestFirst selects a single profile; ReportAll
  /// lists the complete set.
  std::vector<Equilibrium> equilibria;
  /// True only when the complete equilibrium set (not the selection) is a
  /// singleton. The buyer is always indifferent after a garbage delivery, so
  /// in this game the flag is false on every instance.
  bool unique = false;
  /// Buyer nodes (keyed by the seller move reaching them) where more than
  /// one reply is optimal.
  std::vector<SellerAction> tie_nodes;
};

SpneResult backward_induction(const GameTree& tree, TieBreak tie_break);

/// Independent check of backward_induction: brute force over all 3 * 3^3
/// pure strategy profiles, keeping those that survive the one-shot-deviation
/// test at every node. Shares no solver code with backward_induction.
SpneResult enumerate_spne(const GameTree& tree);

nlohmann::json spne_to_json(const SpneResult& result);

/// Payoffs for the full 3 x 5 action/policy grid.
struct PayoffMatrix {
  std::array<std::array<PayoffPair, 5>, 3> cells{};

  const PayoffPair& at(SellerAction a, BuyerPolicy p) const;
  PayoffPair& at(SellerAction a, BuyerPolicy p);

  friend bool operator==(const PayoffMatrix&, const PayoffMatrix&) = default;
};

/// Every cell produced by simulating the complete protocol via run_trade.
Result<PayoffMatrix, TradeError> simulated_payoff_matrix(
    const GameParams& params, Money gas_per_reconcile, std::uint64_t seed,
    bool allow_value_le_price = false);

/// Every cell from the closed-form leaves via policy_edge. The simulated
/// matrix must equal this one exactly; the pair forms the engine's
/// two-route correctness check.
PayoffMatrix analytic_policy_matrix(const GameParams& params);

}  // namespace dde
