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

#include "dde/game.hpp"

#include <algorithm>
#include <sstream>

namespace dde {

namespace {

std::size_t index_of(SellerAction action) {
  return static_cast<std::size_t>(action);
}

std::size_t index_of(BuyerEdge edge) { return static_cast<std::size_t>(edge); }

std::size_t index_of(BuyerPolicy policy) {
  return static_cast<std::size_t>(policy);
}

bool profile_less(const Equilibrium& a, const Equilibrium& b) {
  if (a.profile.seller != b.profile.seller) {
    return index_of(a.profile.seller) < index_of(b.profile.seller);
  }
  for (std::size_t n = 0; n < 3; ++n) {
    if (a.profile.buyer[n] != b.profile.buyer[n]) {
      return index_of(a.profile.buyer[n]) < index_of(b.profile.buyer[n]);
    }
  }
  return false;
}

}  // namespace

std::string_view edge_label(SellerAction at_node, BuyerEdge edge) {
  switch (edge) {
    case BuyerEdge::ValidComplaint:
      return at_node == SellerAction::Honest ? "F'/S" : "F'";
    case BuyerEdge::GarbageOrSilent:
      return "G'/R";
    case BuyerEdge::Honest:
      return "N'";
  }
  return "?";
}

BuyerEdge policy_edge(SellerAction seller_action, BuyerPolicy policy) {
  switch (policy) {
    case BuyerPolicy::Honest:
      return BuyerEdge::Honest;
    case BuyerPolicy::Replay:
      return BuyerEdge::ValidComplaint;
    case BuyerPolicy::Garbage:
    case BuyerPolicy::Silent:
      return BuyerEdge::GarbageOrSilent;
    case BuyerPolicy::Frivolous:
      // Only a genuinely honest delivery leaves the buyer holding proof of
      // it; against F or G the degraded complaint plays like the honest one.
      return seller_action == SellerAction::Honest ? BuyerEdge::ValidComplaint
                                                   : BuyerEdge::Honest;
  }
  return BuyerEdge::Honest;
}

PayoffPair analytic_payoff(const GameParams& params, SellerAction seller_edge,
                           BuyerEdge buyer_edge) {
  const std::int64_t price = params.price;
  const std::int64_t value = params.value;
  const std::int64_t deposit_s = params.seller_deposit;
  const std::int64_t deposit_b = params.buyer_deposit;

  switch (seller_edge) {
    case SellerAction::Honest:
      switch (buyer_edge) {
        case BuyerEdge::ValidComplaint:
          return {price, value - price - deposit_b};
        case BuyerEdge::GarbageOrSilent:
          return {-deposit_s, value - price - deposit_b};
        case BuyerEdge::Honest:
          return {price, value - price};
      }
      break;
    case SellerAction::Falsified:
      switch (buyer_edge) {
        case BuyerEdge::ValidComplaint:
          return {price, -price - deposit_b};
        case BuyerEdge::GarbageOrSilent:
          return {-deposit_s, -price - deposit_b};
        case BuyerEdge::Honest:
          return {-deposit_s, 0};
      }
      break;
    case SellerAction::Garbage:
      switch (buyer_edge) {
        case BuyerEdge::ValidComplaint:
          return {price, -price - deposit_b};
        case BuyerEdge::GarbageOrSilent:
        case BuyerEdge::Honest:
          return {-deposit_s, -price - deposit_b};
      }
      break;
  }
  return {};
}

GameTree build_tree(const GameParams& params) {
  GameTree tree;
  tree.params = params;
  for (SellerAction action : kAllSellerActions) {
    BuyerNode& node = tree.nodes[index_of(action)];
    node.reached_by = action;
    for (BuyerEdge edge : kAllBuyerEdges) {
      node.leaves[index_of(edge)] =
          GameLeaf{edge, analytic_payoff(params, action, edge)};
    }
  }
  return tree;
}

std::string to_dot(const GameTree& tree) {
  // Mirror the usual presentation of the tree: seller children F, G, N with
  // buyer edges F'(/S), G'/R, N' left to right.
  const std::array<SellerAction, 3> seller_order = {
      SellerAction::Falsified, SellerAction::Garbage, SellerAction::Honest};
  const std::array<BuyerEdge, 3> edge_order = {
      BuyerEdge::ValidComplaint, BuyerEdge::GarbageOrSilent, BuyerEdge::Honest};

  std::ostringstream out;
  out << "digraph dual_deposit_game {\n";
  out << "  rankdir=TB;\n";
  out << "  seller [label=\"Seller\", shape=circle];\n";
  for (SellerAction action : seller_order) {
    const BuyerNode& node = tree.nodes[index_of(action)];
    const std::string id = std::string("buyer_") + std::string(label(action));
    out << "  " << id
        << " [label=\"Buyer\", shape=circle, style=filled, "
           "fillcolor=black, fontcolor=white];\n";
    out << "  seller -> " << id << " [label=\"" << label(action) << "\"];\n";
    for (BuyerEdge edge : edge_order) {
      const GameLeaf& leaf = node.leaves[index_of(edge)];
      const std::string leaf_id =
          id + "_leaf_" + std::to_string(index_of(edge));
      out << "  " << leaf_id << " [label=\"(" << leaf.payoff.seller << ", "
          << leaf.payoff.buyer << ")\", shape=plaintext];\n";
      out << "  " << id << " -> " << leaf_id << " [label=\""
          << edge_label(action, edge) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

nlohmann::json tree_to_json(const GameTree& tree) {
  nlohmann::json nodes = nlohmann::json::array();
  for (SellerAction action : kAllSellerActions) {
    const BuyerNode& node = tree.nodes[index_of(action)];
    nlohmann::json leaves = nlohmann::json::array();
    for (BuyerEdge edge : kAllBuyerEdges) {
      const GameLeaf& leaf = node.leaves[index_of(edge)];
      leaves.push_back({{"edge", edge_label(action, edge)},
                        {"seller", leaf.payoff.seller},
                        {"buyer", leaf.payoff.buyer}});
    }
    nodes.push_back({{"after", label(action)}, {"leaves", std::move(leaves)}});
  }
  return nlohmann::json{{"params",
                         {{"price", tree.params.price},
                          {"value", tree.params.value},
                          {"seller_deposit", tree.params.seller_deposit},
                          {"buyer_deposit", tree.params.buyer_deposit}}},
                        {"nodes", std::move(nodes)}};
}

SpneResult backward_induction(const GameTree& tree, TieBreak tie_break) {
  // Buyer best replies, one set per node.
  std::array<std::vector<BuyerEdge>, 3> best_replies;
  SpneResult result;
  for (SellerAction action : kAllSellerActions) {
    const BuyerNode& node = tree.nodes[index_of(action)];
    std::int64_t best = node.leaves[0].payoff.buyer;
    for (const GameLeaf& leaf : node.leaves) {
      best = std::max(best, leaf.payoff.buyer);
    }
    auto& replies = best_replies[index_of(action)];
    for (BuyerEdge edge : kAllBuyerEdges) {
      if (node.leaves[index_of(edge)].payoff.buyer == best) {
        replies.push_back(edge);
      }
    }
    if (replies.size() > 1) result.tie_nodes.push_back(action);
  }

  const auto leaf_payoff = [&](SellerAction action, BuyerEdge edge) {
    return tree.nodes[index_of(action)].leaves[index_of(edge)].payoff;
  };

  // Expand the complete equilibrium set: every selection of buyer best
  // replies, combined with every seller best response to that selection.
  std::vector<Equilibrium> all;
  for (BuyerEdge e0 : best_replies[0]) {
    for (BuyerEdge e1 : best_replies[1]) {
      for (BuyerEdge e2 : best_replies[2]) {
        const BuyerStrategy strategy{e0, e1, e2};
        std::int64_t best_seller = leaf_payoff(kAllSellerActions[0],
                                               strategy[0])
                                       .seller;
        for (SellerAction action : kAllSellerActions) {
          best_seller = std::max(
              best_seller,
              leaf_payoff(action, strategy[index_of(action)]).seller);
        }
        for (SellerAction action : kAllSellerActions) {
          const PayoffPair payoff =
              leaf_payoff(action, strategy[index_of(action)]);
          if (payoff.seller == best_seller) {
            all.push_back(Equilibrium{PureProfile{action, strategy}, payoff});
          }
        }
      }
    }
  }
  std::sort(all.begin(), all.end(), profile_less);
  result.unique = all.size() == 1;

  if (tie_break == TieBreak::ReportAll) {
    result.equilibria = std::move(all);
    return result;
  }

  // HonestFirst: the indifferent buyer answers honestly; the indifferent
  // seller delivers honestly.
  BuyerStrategy selected{};
  for (SellerAction action : kAllSellerActions) {
    const auto& replies = best_replies[index_of(action)];
    const bool honest_ok = std::find(replies.begin(), replies.end(),
                                     BuyerEdge::Honest) != replies.end();
    selected[index_of(action)] = honest_ok ? BuyerEdge::Honest : replies[0];
  }
  std::int64_t best_seller = leaf_payoff(kAllSellerActions[0], selected[0])
                                 .seller;
  for (SellerAction action : kAllSellerActions) {
    best_seller = std::max(
        best_seller, leaf_payoff(action, selected[index_of(action)]).seller);
  }
  SellerAction chosen = SellerAction::Honest;
  if (leaf_payoff(SellerAction::Honest, selected[0]).seller != best_seller) {
    for (SellerAction action : kAllSellerActions) {
      if (leaf_payoff(action, selected[index_of(action)]).seller ==
          best_seller) {
        chosen = action;
        break;
      }
    }
  }
  result.equilibria.push_back(
      Equilibrium{PureProfile{chosen, selected},
                  leaf_payoff(chosen, selected[index_of(chosen)])});
  return result;
}

SpneResult enumerate_spne(const GameTree& tree) {
  const auto leaf = [&](SellerAction action, BuyerEdge edge) {
    return tree.nodes[index_of(action)].leaves[index_of(edge)].payoff;
  };

  SpneResult result;
  for (SellerAction seller : kAllSellerActions) {
    for (BuyerEdge e0 : kAllBuyerEdges) {
      for (BuyerEdge e1 : kAllBuyerEdges) {
        for (BuyerEdge e2 : kAllBuyerEdges) {
          const BuyerStrategy strategy{e0, e1, e2};
          bool survives = true;

          // One-shot deviation test for the buyer at each of its nodes.
          for (SellerAction node : kAllSellerActions) {
            const std::int64_t chosen =
                leaf(node, strategy[index_of(node)]).buyer;
            for (BuyerEdge alternative : kAllBuyerEdges) {
              if (leaf(node, alternative).buyer > chosen) survives = false;
            }
          }
          // One-shot deviation test for the seller at the root.
          const std::int64_t chosen =
              leaf(seller, strategy[index_of(seller)]).seller;
          for (SellerAction alternative : kAllSellerActions) {
            if (leaf(alternative, strategy[index_of(alternative)]).seller >
                chosen) {
              survives = false;
            }
          }

          if (survives) {
            result.equilibria.push_back(
                Equilibrium{PureProfile{seller, strategy},
                            leaf(seller, strategy[index_of(seller)])});
          }
        }
      }
    }
  }

  for (SellerAction node : kAllSellerActions) {
    std::int64_t best = leaf(node, kAllBuyerEdges[0]).buyer;
    for (BuyerEdge edge : kAllBuyerEdges) {
      best = std::max(best, leaf(node, edge).buyer);
    }
    int optimal = 0;
    for (BuyerEdge edge : kAllBuyerEdges) {
      if (leaf(node, edge).buyer == best) ++optimal;
    }
    if (optimal > 1) result.tie_nodes.push_back(node);
  }

  std::sort(result.equilibria.begin(), result.equilibria.end(), profile_less);
  result.unique = result.equilibria.size() == 1;
  return result;
}

nlohmann::json spne_to_json(const SpneResult& result) {
  nlohmann::json equilibria = nlohmann::json::array();
  nlohmann::json path_payoffs = nlohmann::json::array();
  for (const Equilibrium& eq : result.equilibria) {
    nlohmann::json buyer = nlohmann::json::object();
    for (SellerAction node : kAllSellerActions) {
      buyer[std::string("after_") + std::string(label(node))] = edge_label(
          node, eq.profile.buyer[static_cast<std::size_t>(node)]);
    }
    equilibria.push_back({{"seller", label(eq.profile.seller)},
                          {"buyer", std::move(buyer)},
                          {"path_payoff",
                           {{"seller", eq.path_payoff.seller},
                            {"buyer", eq.path_payoff.buyer}}}});
    path_payoffs.push_back(
        {{"seller", eq.path_payoff.seller}, {"buyer", eq.path_payoff.buyer}});
  }
  nlohmann::json ties = nlohmann::json::array();
  for (SellerAction node : result.tie_nodes) ties.push_back(label(node));
  return nlohmann::json{{"equilibria", std::move(equilibria)},
                        {"unique", result.unique},
                        {"tie_nodes", std::move(ties)},
                        {"path_payoffs", std::move(path_payoffs)}};
}

const PayoffPair& PayoffMatrix::at(SellerAction a, BuyerPolicy p) const {
  return cells[index_of(a)][index_of(p)];
}

PayoffPair& PayoffMatrix::at(SellerAction a, BuyerPolicy p) {
  return cells[index_of(a)][index_of(p)];
}

Result<PayoffMatrix, TradeError> simulated_payoff_matrix(
    const GameParams& params, Money gas_per_reconcile, std::uint64_t seed,
    bool allow_value_le_price) {
  PayoffMatrix matrix;
  TradeConfig config{params, gas_per_reconcile, allow_value_le_price};
  std::uint64_t cell = 0;
  for (SellerAction action : kAllSellerActions) {
    for (BuyerPolicy policy : kAllBuyerPolicies) {
      LedgerWorld world;
      auto outcome =
          run_trade(world, action, policy, config, mix_seed(seed, cell++));
      if (!outcome) return outcome.error();
      matrix.at(action, policy) = PayoffPair{outcome.value().seller_payoff,
                                             outcome.value().buyer_payoff};
    }
  }
  return matrix;
}

PayoffMatrix analytic_policy_matrix(const GameParams& params) {
  PayoffMatrix matrix;
  for (SellerAction action : kAllSellerActions) {
    for (BuyerPolicy policy : kAllBuyerPolicies) {
      matrix.at(action, policy) =
          analytic_payoff(params, action, policy_edge(action, policy));
    }
  }
  return matrix;
}

}  // namespace dde
