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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dde/bytes.hpp"
#include "dde/crypto.hpp"
#include "dde/escrow.hpp"
#include "dde/ledger.hpp"
#include "dde/params.hpp"
#include "dde/result.hpp"

namespace dde {

/// What the seller puts on the off-chain channel in the delivery step.
/// Label N: the genuine product, signed and sealed. Label F: a wrong payload,
/// still correctly signed and sealed. Label G: bytes the buyer cannot open.
enum class SellerAction { Honest, Falsified, Garbage };

/// How the buyer answers on-chain. Label N': respond truthfully to what was
/// received. F': dispute with valid evidence replayed from another contract.
/// G': dispute with undecipherable bytes. S: dispute while submitting
/// evidence of the honest delivery itself. R: never respond.
enum class BuyerPolicy { Honest, Replay, Garbage, Frivolous, Silent };

inline constexpr std::array<SellerAction, 3> kAllSellerActions = {
    SellerAction::Honest, SellerAction::Falsified, SellerAction::Garbage};
inline constexpr std::array<BuyerPolicy, 5> kAllBuyerPolicies = {
    BuyerPolicy::Honest, BuyerPolicy::Replay, BuyerPolicy::Garbage,
    BuyerPolicy::Frivolous, BuyerPolicy::Silent};

std::string_view label(SellerAction action);   // "N" | "F" | "G"
std::string_view label(BuyerPolicy policy);    // "Nprime" | "Fprime" | ...
std::optional<SellerAction> parse_seller_action(std::string_view text);
std::optional<BuyerPolicy> parse_buyer_policy(std::string_view text);

/// Whatever travels on the off-chain delivery channel. Unconstrained.
struct DeliveryMessage {
  Bytes bytes;
};

enum class DeliveryOutcome {
  GoodValid,          // opens, nonce matches, digest matches
  GoodInvalidSigned,  // authentically signed but wrong product or wrong nonce
  Undecryptable,      // outer or inner layer fails to open, or undecodable
};

const char* to_string(DeliveryOutcome outcome);

/// The buyer's classification of a delivery, plus the inner signed envelope
/// whenever the confidential outer layer opened (that envelope is the only
/// evidence a buyer can take to the contract).
struct BuyerObservation {
  DeliveryOutcome outcome = DeliveryOutcome::Undecryptable;
  std::optional<Bytes> extracted_inner;
};

struct ContractResponse {
  enum class Kind { Accept, Complaint, Silence };
  Kind kind = Kind::Silence;
  Bytes evidence;  // set only for Complaint
};

const char* to_string(ContractResponse::Kind kind);

/// Valid signed envelopes harvested from earlier trades, usable by the
/// Replay policy.
using ReplayPool = std::vector<Bytes>;

struct TradeError {
  enum class Code {
    InvalidParams,
    WorldNotFresh,
    EmptyReplayPool,
    ConservationViolated,
    Internal,
  };
  Code code;
  std::string message;
};

DeliveryMessage seller_deliver(SellerAction action,
                               std::span<const std::uint8_t> product,
                               const TradeTerms& terms,
                               const crypto::KeyPair& seller_keys,
                               std::span<const std::uint8_t> buyer_pubkey,
                               DetRng& rng);

/// Pure classification; every malformed input is an outcome, not an error.
BuyerObservation buyer_observe(const DeliveryMessage& message,
                               const TradeTerms& terms,
                               std::span<const std::uint8_t> buyer_private,
                               std::span<const std::uint8_t> seller_pubkey);

/// Maps a policy and an observation to the on-chain response. Policies are
/// unconditional except Honest, which follows the observation. Frivolous
/// submits the extracted envelope even when it proves the delivery was fine;
/// if nothing was extracted it degrades to a garbage complaint.
Result<ContractResponse, TradeError> buyer_respond(
    BuyerPolicy policy, const BuyerObservation& observation,
    const ReplayPool& replay_pool, DetRng& rng);

/// One logged step of a simulated trade, with the ledger snapshot taken
/// right after it.
struct TradeEvent {
  std::string type;
  nlohmann::json data;
  nlohmann::json ledger;
};

struct TradeOutcome {
  Resolution resolution;
  std::int64_t seller_payoff = 0;
  std::int64_t buyer_payoff = 0;
  std::vector<TradeEvent> events;
  TradeTerms terms;
};

struct TradeConfig {
  GameParams params;
  Money gas_per_reconcile{0};
  bool allow_value_le_price = false;
};

/// Plays one complete trade: deploy, fund, deliver, respond, resolve. The
/// world must be freshly constructed; endowments are exactly the amounts the
/// parties need (E_S for the seller, P_d + E_B for the buyer), so payoffs are
/// final-minus-initial balances, with the product value V_d credited to the
/// buyer exactly when the seller delivered honestly. Conservation of funds is
/// checked after every event. Deterministic: identical (config, seed) pairs
/// produce byte-identical event lists.
///
/// When the buyer policy is Replay, a provisioning trade with the same key
/// material and an earlier nonce runs first in a scratch world to stock the
/// replay pool.
Result<TradeOutcome, TradeError> run_trade(LedgerWorld& world,
                                           SellerAction seller_action,
                                           BuyerPolicy buyer_policy,
                                           const TradeConfig& config,
                                           std::uint64_t seed);

}  // namespace dde
