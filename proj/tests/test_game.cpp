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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dde/bytes.hpp"
#include "dde/game.hpp"

using namespace dde;

namespace {

const GameParams kDefault{10, 15, 5, 5};

const PureProfile kHonestProfile{
    SellerAction::Honest,
    {BuyerEdge::Honest, BuyerEdge::Honest, BuyerEdge::Honest}};

bool contains_equilibrium(const SpneResult& result,
                          const PureProfile& profile) {
  return std::any_of(result.equilibria.begin(), result.equilibria.end(),
                     [&](const Equilibrium& eq) {
                       return eq.profile == profile;
                     });
}

GameParams random_params(DetRng& rng, std::int64_t es_min = 1,
                         std::int64_t eb_min = 1,
                         std::int64_t margin_min = 1) {
  GameParams params;
  params.price = static_cast<std::int64_t>(rng.next_in(1, 1'000'000));
  params.value = params.price + static_cast<std::int64_t>(rng.next_in(
                                    static_cast<std::uint64_t>(margin_min),
                                    1'000'000));
  params.seller_deposit = static_cast<std::int64_t>(
      rng.next_in(static_cast<std::uint64_t>(es_min), 1'000'000));
  params.buyer_deposit = static_cast<std::int64_t>(
      rng.next_in(static_cast<std::uint64_t>(eb_min), 1'000'000));
  return params;
}

void check_same_result(const SpneResult& a, const SpneResult& b) {
  CHECK(a.equilibria == b.equilibria);
  CHECK(a.tie_nodes == b.tie_nodes);
  CHECK(a.unique == b.unique);
}

}  // namespace

TEST_CASE("analytic payoffs: all nine leaves at (10, 15, 5, 5)") {
  const auto leaf = [&](SellerAction s, BuyerEdge b) {
    return analytic_payoff(kDefault, s, b);
  };
  CHECK(leaf(SellerAction::Honest, BuyerEdge::Honest) == PayoffPair{10, 5});
  CHECK(leaf(SellerAction::Honest, BuyerEdge::ValidComplaint) ==
        PayoffPair{10, 0});
  CHECK(leaf(SellerAction::Honest, BuyerEdge::GarbageOrSilent) ==
        PayoffPair{-5, 0});
  CHECK(leaf(SellerAction::Falsified, BuyerEdge::Honest) ==
        PayoffPair{-5, 0});
  CHECK(leaf(SellerAction::Falsified, BuyerEdge::ValidComplaint) ==
        PayoffPair{10, -15});
  CHECK(leaf(SellerAction::Falsified, BuyerEdge::GarbageOrSilent) ==
        PayoffPair{-5, -15});
  CHECK(leaf(SellerAction::Garbage, BuyerEdge::Honest) ==
        PayoffPair{-5, -15});
  CHECK(leaf(SellerAction::Garbage, BuyerEdge::ValidComplaint) ==
        PayoffPair{10, -15});
  CHECK(leaf(SellerAction::Garbage, BuyerEdge::GarbageOrSilent) ==
        PayoffPair{-5, -15});
}

TEST_CASE("analytic payoffs at a second parameter point") {
  const GameParams params{7, 20, 3, 2};
  const auto leaf = [&](SellerAction s, BuyerEdge b) {
    return analytic_payoff(params, s, b);
  };
  CHECK(leaf(SellerAction::Honest, BuyerEdge::Honest) == PayoffPair{7, 13});
  CHECK(leaf(SellerAction::Honest, BuyerEdge::ValidComplaint) ==
        PayoffPair{7, 11});
  CHECK(leaf(SellerAction::Honest, BuyerEdge::GarbageOrSilent) ==
        PayoffPair{-3, 11});
  CHECK(leaf(SellerAction::Falsified, BuyerEdge::Honest) == PayoffPair{-3, 0});
  CHECK(leaf(SellerAction::Falsified, BuyerEdge::ValidComplaint) ==
        PayoffPair{7, -9});
  CHECK(leaf(SellerAction::Falsified, BuyerEdge::GarbageOrSilent) ==
        PayoffPair{-3, -9});
  CHECK(leaf(SellerAction::Garbage, BuyerEdge::Honest) == PayoffPair{-3, -9});
  CHECK(leaf(SellerAction::Garbage, BuyerEdge::ValidComplaint) ==
        PayoffPair{7, -9});
  CHECK(leaf(SellerAction::Garbage, BuyerEdge::GarbageOrSilent) ==
        PayoffPair{-3, -9});
}

TEST_CASE("tree topology is three nodes of three leaves, parameters aside") {
  const GameTree small = build_tree(kDefault);
  const GameTree large = build_tree(GameParams{1000, 2000, 300, 400});
  for (const GameTree* tree : {&small, &large}) {
    REQUIRE(tree->nodes.size() == 3);
    for (SellerAction action : kAllSellerActions) {
      const BuyerNode& node =
          tree->nodes[static_cast<std::size_t>(action)];
      CHECK(node.reached_by == action);
      REQUIRE(node.leaves.size() == 3);
      for (BuyerEdge edge : kAllBuyerEdges) {
        const GameLeaf& leaf = node.leaves[static_cast<std::size_t>(edge)];
        CHECK(leaf.edge == edge);
        CHECK(leaf.payoff == analytic_payoff(tree->params, action, edge));
      }
    }
  }
}

TEST_CASE("edge labels merge exactly as the tree notation does") {
  CHECK(edge_label(SellerAction::Honest, BuyerEdge::ValidComplaint) ==
        "F'/S");
  CHECK(edge_label(SellerAction::Falsified, BuyerEdge::ValidComplaint) ==
        "F'");
  CHECK(edge_label(SellerAction::Garbage, BuyerEdge::ValidComplaint) == "F'");
  for (SellerAction action : kAllSellerActions) {
    CHECK(edge_label(action, BuyerEdge::GarbageOrSilent) == "G'/R");
    CHECK(edge_label(action, BuyerEdge::Honest) == "N'");
  }
}

TEST_CASE("policy projection onto tree edges") {
  for (SellerAction action : kAllSellerActions) {
    CHECK(policy_edge(action, BuyerPolicy::Honest) == BuyerEdge::Honest);
    CHECK(policy_edge(action, BuyerPolicy::Replay) ==
          BuyerEdge::ValidComplaint);
    CHECK(policy_edge(action, BuyerPolicy::Garbage) ==
          BuyerEdge::GarbageOrSilent);
    CHECK(policy_edge(action, BuyerPolicy::Silent) ==
          BuyerEdge::GarbageOrSilent);
  }
  CHECK(policy_edge(SellerAction::Honest, BuyerPolicy::Frivolous) ==
        BuyerEdge::ValidComplaint);
  CHECK(policy_edge(SellerAction::Falsified, BuyerPolicy::Frivolous) ==
        BuyerEdge::Honest);
  CHECK(policy_edge(SellerAction::Garbage, BuyerPolicy::Frivolous) ==
        BuyerEdge::Honest);
}

TEST_CASE("DOT export matches the golden file") {
  const std::string dot = to_dot(build_tree(kDefault));
  std::ifstream golden(std::string(TESTS_DATA_DIR) +
                       "/game_tree_10_15_5_5.dot");
  REQUIRE(golden.good());
  std::stringstream expected;
  expected << golden.rdbuf();
  CHECK(dot == expected.str());
}

TEST_CASE("backward induction, honest-first: the protocol's headline claim") {
  const SpneResult result =
      backward_induction(build_tree(kDefault), TieBreak::HonestFirst);
  REQUIRE(result.equilibria.size() == 1);
  CHECK(result.equilibria.front().profile == kHonestProfile);
  CHECK(result.equilibria.front().path_payoff == PayoffPair{10, 5});
  // The buyer is indifferent after a garbage delivery, so strict uniqueness
  // never holds and the result must say so.
  CHECK_FALSE(result.unique);
  REQUIRE(result.tie_nodes.size() == 1);
  CHECK(result.tie_nodes.front() == SellerAction::Garbage);
}

TEST_CASE("backward induction, report-all: the complete set at defaults") {
  const SpneResult result =
      backward_induction(build_tree(kDefault), TieBreak::ReportAll);
  // Hand-derived: the buyer must answer honestly after N and F; after G all
  // three replies pay -P_d-E_B. A buyer who would submit valid evidence
  // after G hands the seller P_d, making the seller indifferent between
  // honest delivery and garbage, which adds the fourth equilibrium.
  REQUIRE(result.equilibria.size() == 4);
  const BuyerStrategy honest_after_g{BuyerEdge::Honest, BuyerEdge::Honest,
                                     BuyerEdge::Honest};
  const BuyerStrategy garbage_after_g{BuyerEdge::Honest, BuyerEdge::Honest,
                                      BuyerEdge::GarbageOrSilent};
  const BuyerStrategy complaint_after_g{BuyerEdge::Honest, BuyerEdge::Honest,
                                        BuyerEdge::ValidComplaint};
  CHECK(contains_equilibrium(result,
                             {SellerAction::Honest, honest_after_g}));
  CHECK(contains_equilibrium(result,
                             {SellerAction::Honest, garbage_after_g}));
  CHECK(contains_equilibrium(result,
                             {SellerAction::Honest, complaint_after_g}));
  CHECK(contains_equilibrium(result,
                             {SellerAction::Garbage, complaint_after_g}));
  // Every equilibrium with an honest seller pays the published outcome.
  for (const Equilibrium& eq : result.equilibria) {
    if (eq.profile.seller == SellerAction::Honest) {
      CHECK(eq.path_payoff == PayoffPair{10, 5});
    } else {
      CHECK(eq.path_payoff == PayoffPair{10, -15});
    }
  }
  CHECK_FALSE(result.unique);
}

TEST_CASE("exhaustive enumeration agrees with backward induction") {
  SUBCASE("default parameters") {
    const GameTree tree = build_tree(kDefault);
    check_same_result(backward_induction(tree, TieBreak::ReportAll),
                      enumerate_spne(tree));
  }
  SUBCASE("boundary: zero buyer deposit") {
    const GameTree tree = build_tree(GameParams{10, 15, 5, 0});
    const SpneResult all = backward_induction(tree, TieBreak::ReportAll);
    const SpneResult brute = enumerate_spne(tree);
    check_same_result(all, brute);
    // With E_B = 0 the buyer is additionally indifferent after N; the
    // equilibrium set grows accordingly (hand-derived count).
    CHECK(all.equilibria.size() == 15);
    CHECK_FALSE(all.unique);
    CHECK(std::find(all.tie_nodes.begin(), all.tie_nodes.end(),
                    SellerAction::Honest) != all.tie_nodes.end());
  }
  SUBCASE("boundary: zero seller deposit") {
    const GameTree tree = build_tree(GameParams{10, 15, 0, 5});
    check_same_result(backward_induction(tree, TieBreak::ReportAll),
                      enumerate_spne(tree));
  }
  SUBCASE("boundary: value equals price") {
    const GameTree tree = build_tree(GameParams{10, 10, 5, 5});
    check_same_result(backward_induction(tree, TieBreak::ReportAll),
                      enumerate_spne(tree));
  }
  SUBCASE("1000 random instances, including boundaries") {
    DetRng rng(4242);
    for (int i = 0; i < 1000; ++i) {
      const GameParams params = random_params(rng, /*es_min=*/0,
                                              /*eb_min=*/0, /*margin_min=*/0);
      CAPTURE(params.price);
      CAPTURE(params.value);
      CAPTURE(params.seller_deposit);
      CAPTURE(params.buyer_deposit);
      const GameTree tree = build_tree(params);
      check_same_result(backward_induction(tree, TieBreak::ReportAll),
                        enumerate_spne(tree));
    }
  }
}

TEST_CASE("honest equilibrium for 1000 random valid parameter sets") {
  DetRng rng(777);
  for (int i = 0; i < 1000; ++i) {
    const GameParams params = random_params(rng);
    const GameTree tree = build_tree(params);
    const SpneResult honest = backward_induction(tree, TieBreak::HonestFirst);
    REQUIRE(honest.equilibria.size() == 1);
    CHECK(honest.equilibria.front().profile == kHonestProfile);
    CHECK(honest.equilibria.front().path_payoff ==
          PayoffPair{params.price, params.value - params.price});

    const SpneResult all = backward_induction(tree, TieBreak::ReportAll);
    CHECK(contains_equilibrium(all, kHonestProfile));
    // The honest-first selection is one of the reported equilibria.
    CHECK(contains_equilibrium(all, honest.equilibria.front().profile));
    // Every equilibrium in which the seller delivers honestly settles on
    // the same outcome.
    for (const Equilibrium& eq : all.equilibria) {
      if (eq.profile.seller == SellerAction::Honest) {
        CHECK(eq.path_payoff ==
              PayoffPair{params.price, params.value - params.price});
      }
    }
  }
}

TEST_CASE("one-shot deviations from honest play never profit") {
  DetRng rng(888);
  for (int i = 0; i < 200; ++i) {
    const GameParams params = random_params(rng);
    const GameTree tree = build_tree(params);
    const auto leaf = [&](SellerAction s, BuyerEdge b) {
      return analytic_payoff(params, s, b);
    };

    // Buyer deviations at each node, against the honest continuation.
    for (SellerAction node : kAllSellerActions) {
      const std::int64_t honest_payoff = leaf(node, BuyerEdge::Honest).buyer;
      for (BuyerEdge edge : kAllBuyerEdges) {
        CHECK(leaf(node, edge).buyer <= honest_payoff);
      }
    }
    // Strict loss at the on-path buyer node.
    CHECK(leaf(SellerAction::Honest, BuyerEdge::ValidComplaint).buyer <
          leaf(SellerAction::Honest, BuyerEdge::Honest).buyer);
    CHECK(leaf(SellerAction::Honest, BuyerEdge::GarbageOrSilent).buyer <
          leaf(SellerAction::Honest, BuyerEdge::Honest).buyer);

    // Seller deviations against an all-honest buyer: strictly worse.
    const std::int64_t honest_seller =
        leaf(SellerAction::Honest, BuyerEdge::Honest).seller;
    CHECK(leaf(SellerAction::Falsified, BuyerEdge::Honest).seller <
          honest_seller);
    CHECK(leaf(SellerAction::Garbage, BuyerEdge::Honest).seller <
          honest_seller);
    (void)tree;
  }
}

TEST_CASE("deterrence scales exactly with the deposits") {
  DetRng rng(999);
  for (int i = 0; i < 200; ++i) {
    const GameParams params = random_params(rng);
    // Buyer's gap between honesty and its best dishonest reply after an
    // honest delivery is exactly E_B.
    const std::int64_t honest =
        analytic_payoff(params, SellerAction::Honest, BuyerEdge::Honest).buyer;
    const std::int64_t dishonest = std::max(
        analytic_payoff(params, SellerAction::Honest,
                        BuyerEdge::ValidComplaint)
            .buyer,
        analytic_payoff(params, SellerAction::Honest,
                        BuyerEdge::GarbageOrSilent)
            .buyer);
    CHECK(honest - dishonest == params.buyer_deposit);

    // Seller's gap between honest delivery and falsified delivery, both
    // against an honest buyer, is exactly P_d + E_S.
    const std::int64_t seller_honest =
        analytic_payoff(params, SellerAction::Honest, BuyerEdge::Honest)
            .seller;
    const std::int64_t seller_falsified =
        analytic_payoff(params, SellerAction::Falsified, BuyerEdge::Honest)
            .seller;
    CHECK(seller_honest - seller_falsified ==
          params.price + params.seller_deposit);
  }
}

TEST_CASE("simulated matrix equals the analytic matrix") {
  SUBCASE("defaults") {
    auto simulated = simulated_payoff_matrix(kDefault, Money{0}, 2025);
    REQUIRE(simulated.ok());
    CHECK(simulated.value() == analytic_policy_matrix(kDefault));
  }
  SUBCASE("second parameter point with gas") {
    const GameParams params{7, 20, 3, 2};
    auto simulated = simulated_payoff_matrix(params, Money{2}, 2025);
    REQUIRE(simulated.ok());
    CHECK(simulated.value() == analytic_policy_matrix(params));
  }
}

TEST_CASE("simulated matrix is seed-invariant") {
  const PayoffMatrix analytic = analytic_policy_matrix(kDefault);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto simulated = simulated_payoff_matrix(kDefault, Money{0}, seed);
    REQUIRE(simulated.ok());
    CHECK(simulated.value() == analytic);
  }
}

TEST_CASE("equilibrium JSON export shape") {
  const SpneResult result =
      backward_induction(build_tree(kDefault), TieBreak::ReportAll);
  const nlohmann::json doc = spne_to_json(result);
  CHECK(doc["unique"] == false);
  REQUIRE(doc["tie_nodes"].size() == 1);
  CHECK(doc["tie_nodes"][0] == "G");
  REQUIRE(doc["equilibria"].size() == 4);
  CHECK(doc["equilibria"][0]["seller"] == "N");
  CHECK(doc["equilibria"][0]["buyer"]["after_N"] == "N'");
  CHECK(doc["path_payoffs"].size() == 4);
}

TEST_CASE("tree JSON export instantiates the leaf payoffs") {
  const nlohmann::json doc = tree_to_json(build_tree(kDefault));
  CHECK(doc["params"]["price"] == 10);
  REQUIRE(doc["nodes"].size() == 3);
  CHECK(doc["nodes"][0]["after"] == "N");
  CHECK(doc["nodes"][0]["leaves"][2]["edge"] == "N'");
  CHECK(doc["nodes"][0]["leaves"][2]["seller"] == 10);
  CHECK(doc["nodes"][0]["leaves"][2]["buyer"] == 5);
}
