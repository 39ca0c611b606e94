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

#include "dde/actors.hpp"

#include <utility>

namespace dde {

namespace {

constexpr std::uint64_t kProvisionNonce = 1;
constexpr std::uint64_t kMainNonce = 2;

Bytes role_key_seed(std::uint64_t seed, std::string_view role) {
  Bytes material;
  material.reserve(8 + role.size());
  for (int shift = 0; shift < 64; shift += 8) {
    material.push_back(static_cast<std::uint8_t>((seed >> shift) & 0xFF));
  }
  material.insert(material.end(), role.begin(), role.end());
  const auto digest = crypto::hash(material);
  return Bytes(digest.bytes.begin(), digest.bytes.end());
}

std::span<const std::uint8_t> as_span(const Bytes& bytes) {
  return std::span<const std::uint8_t>(bytes);
}

}  // namespace

std::string_view label(SellerAction action) {
  switch (action) {
    case SellerAction::Honest: return "N";
    case SellerAction::Falsified: return "F";
    case SellerAction::Garbage: return "G";
  }
  return "?";
}

std::string_view label(BuyerPolicy policy) {
  switch (policy) {
    case BuyerPolicy::Honest: return "Nprime";
    case BuyerPolicy::Replay: return "Fprime";
    case BuyerPolicy::Garbage: return "Gprime";
    case BuyerPolicy::Frivolous: return "S";
    case BuyerPolicy::Silent: return "R";
  }
  return "?";
}

std::optional<SellerAction> parse_seller_action(std::string_view text) {
  for (SellerAction action : kAllSellerActions) {
    if (text == label(action)) return action;
  }
  return std::nullopt;
}

std::optional<BuyerPolicy> parse_buyer_policy(std::string_view text) {
  for (BuyerPolicy policy : kAllBuyerPolicies) {
    if (text == label(policy)) return policy;
  }
  return std::nullopt;
}

const char* to_string(DeliveryOutcome outcome) {
  switch (outcome) {
    case DeliveryOutcome::GoodValid: return "GoodValid";
    case DeliveryOutcome::GoodInvalidSigned: return "GoodInvalidSigned";
    case DeliveryOutcome::Undecryptable: return "Undecryptable";
  }
  return "?";
}

const char* to_string(ContractResponse::Kind kind) {
  switch (kind) {
    case ContractResponse::Kind::Accept: return "accept";
    case ContractResponse::Kind::Complaint: return "complaint";
    case ContractResponse::Kind::Silence: return "silence";
  }
  return "?";
}

DeliveryMessage seller_deliver(SellerAction action,
                               std::span<const std::uint8_t> product,
                               const TradeTerms& terms,
                               const crypto::KeyPair& seller_keys,
                               std::span<const std::uint8_t> buyer_pubkey,
                               DetRng& rng) {
  switch (action) {
    case SellerAction::Honest: {
      crypto::ProductBinding binding{Bytes(product.begin(), product.end()),
                                     terms.nonce};
      const auto inner = crypto::sign_seal(as_span(seller_keys.private_key),
                                           crypto::encode_binding(binding));
      return DeliveryMessage{
          crypto::conf_seal(buyer_pubkey, inner.to_bytes()).ciphertext};
    }
    case SellerAction::Falsified: {
      // Wrong payload of the same length, correctly signed and sealed.
      Bytes wrong = rng.next_bytes(product.empty() ? 1 : product.size());
      while (wrong.size() == product.size() &&
             std::equal(wrong.begin(), wrong.end(), product.begin())) {
        wrong = rng.next_bytes(wrong.size());
      }
      crypto::ProductBinding binding{std::move(wrong), terms.nonce};
      const auto inner = crypto::sign_seal(as_span(seller_keys.private_key),
                                           crypto::encode_binding(binding));
      return DeliveryMessage{
          crypto::conf_seal(buyer_pubkey, inner.to_bytes()).ciphertext};
    }
    case SellerAction::Garbage:
      return DeliveryMessage{rng.next_bytes(48)};
  }
  return DeliveryMessage{};
}

BuyerObservation buyer_observe(const DeliveryMessage& message,
                               const TradeTerms& terms,
                               std::span<const std::uint8_t> buyer_private,
                               std::span<const std::uint8_t> seller_pubkey) {
  const auto inner = crypto::conf_open(buyer_private, as_span(message.bytes));
  if (!inner) return {DeliveryOutcome::Undecryptable, std::nullopt};

  const auto opened = crypto::open_signed(seller_pubkey, as_span(*inner));
  if (!opened) return {DeliveryOutcome::Undecryptable, inner};

  const auto binding = crypto::decode_binding(as_span(*opened));
  if (!binding) return {DeliveryOutcome::Undecryptable, inner};

  const bool valid =
      binding->contract_nonce == terms.nonce &&
      crypto::hash(as_span(binding->product_bytes)) == terms.product_hash;
  return {valid ? DeliveryOutcome::GoodValid
                : DeliveryOutcome::GoodInvalidSigned,
          inner};
}

Result<ContractResponse, TradeError> buyer_respond(
    BuyerPolicy policy, const BuyerObservation& observation,
    const ReplayPool& replay_pool, DetRng& rng) {
  auto complaint = [](Bytes evidence) {
    return ContractResponse{ContractResponse::Kind::Complaint,
                            std::move(evidence)};
  };
  switch (policy) {
    case BuyerPolicy::Honest:
      switch (observation.outcome) {
        case DeliveryOutcome::GoodValid:
          return ContractResponse{ContractResponse::Kind::Accept, {}};
        case DeliveryOutcome::GoodInvalidSigned:
          return complaint(*observation.extracted_inner);
        case DeliveryOutcome::Undecryptable:
          // Nothing provable was received; the complaint forwards the inner
          // envelope when one was extracted, otherwise a garbage string.
          return complaint(observation.extracted_inner
                               ? *observation.extracted_inner
                               : rng.next_bytes(32));
      }
      break;
    case BuyerPolicy::Replay:
      if (replay_pool.empty()) {
        return TradeError{TradeError::Code::EmptyReplayPool,
                          "replay policy requires a provisioned foreign "
                          "envelope in the replay pool"};
      }
      return complaint(replay_pool.front());
    case BuyerPolicy::Garbage:
      return complaint(rng.next_bytes(64));
    case BuyerPolicy::Frivolous:
      // Disputes even though the extracted envelope may prove the delivery
      // was fine; with nothing extracted this degrades to garbage.
      return complaint(observation.extracted_inner
                           ? *observation.extracted_inner
                           : rng.next_bytes(32));
    case BuyerPolicy::Silent:
      return ContractResponse{ContractResponse::Kind::Silence, {}};
  }
  return TradeError{TradeError::Code::Internal, "unreachable policy"};
}

namespace {

struct TradeActors {
  crypto::KeyPair seller_keys;
  crypto::KeyPair buyer_keys;
};

TradeTerms make_terms(const GameParams& params, std::uint64_t nonce,
                      std::span<const std::uint8_t> product,
                      const TradeActors& actors) {
  TradeTerms terms;
  terms.price = Money{static_cast<std::uint64_t>(params.price)};
  terms.product_hash = crypto::hash(product);
  terms.nonce = nonce;
  terms.seller_deposit =
      Money{static_cast<std::uint64_t>(params.seller_deposit)};
  terms.buyer_deposit = Money{static_cast<std::uint64_t>(params.buyer_deposit)};
  terms.seller_pubkey = actors.seller_keys.public_key;
  terms.buyer_pubkey = actors.buyer_keys.public_key;
  return terms;
}

/// Runs an honest trade in a scratch world and returns the inner signed
/// envelope the buyer extracted, i.e. replayable evidence from a previous
/// contract of the same seller.
Result<Bytes, TradeError> provision_replay_envelope(const TradeConfig& config,
                                                    const TradeActors& actors,
                                                    DetRng& rng) {
  const auto internal = [](const char* what) {
    return TradeError{TradeError::Code::Internal, what};
  };

  LedgerWorld scratch;
  const Money deposit_s =
      Money{static_cast<std::uint64_t>(config.params.seller_deposit)};
  const Money funding = Money{static_cast<std::uint64_t>(
      config.params.price + config.params.buyer_deposit)};
  if (scratch.create_account("seller") != LedgerStatus::Ok ||
      scratch.create_account("buyer") != LedgerStatus::Ok ||
      scratch.mint("seller", deposit_s) != LedgerStatus::Ok ||
      scratch.mint("buyer", funding) != LedgerStatus::Ok) {
    return internal("provisioning ledger setup failed");
  }

  const Bytes product = rng.next_bytes(16 + rng.next_in(0, 48));
  const TradeTerms terms =
      make_terms(config.params, kProvisionNonce, as_span(product), actors);

  auto contract = EscrowContract::deploy(scratch, "seller", terms,
                                         config.gas_per_reconcile);
  if (!contract) return internal("provisioning deploy failed");
  if (contract.value().fund(scratch, "buyer")) {
    return internal("provisioning fund failed");
  }

  const auto delivery =
      seller_deliver(SellerAction::Honest, as_span(product), terms,
                     actors.seller_keys, as_span(actors.buyer_keys.public_key),
                     rng);
  const auto observation =
      buyer_observe(delivery, terms, as_span(actors.buyer_keys.private_key),
                    as_span(actors.seller_keys.public_key));
  if (observation.outcome != DeliveryOutcome::GoodValid ||
      !observation.extracted_inner) {
    return internal("provisioning delivery was not accepted");
  }
  if (!contract.value().accept(scratch, "buyer")) {
    return internal("provisioning accept failed");
  }
  return *observation.extracted_inner;
}

std::optional<TradeError> validate_trade_config(const TradeConfig& config) {
  const auto invalid = [](std::string message) {
    return TradeError{TradeError::Code::InvalidParams, std::move(message)};
  };
  const GameParams& p = config.params;
  if (!p.within_bounds()) {
    return invalid("parameters must be non-negative and at most 2^40");
  }
  if (p.price < 1) return invalid("price must be positive");
  if (p.seller_deposit < 1 || p.buyer_deposit < 1) {
    return invalid("both deposits must be positive");
  }
  if (!config.allow_value_le_price && p.value <= p.price) {
    return invalid(
        "product value must exceed the price (set allow_value_le_price to "
        "override)");
  }
  const auto gas = config.gas_per_reconcile.units();
  if (gas > static_cast<std::uint64_t>(p.seller_deposit) ||
      gas > static_cast<std::uint64_t>(p.buyer_deposit)) {
    return invalid("gas per reconciliation must not exceed either deposit");
  }
  return std::nullopt;
}

}  // namespace

Result<TradeOutcome, TradeError> run_trade(LedgerWorld& world,
                                           SellerAction seller_action,
                                           BuyerPolicy buyer_policy,
                                           const TradeConfig& config,
                                           std::uint64_t seed) {
  if (auto error = validate_trade_config(config)) return *error;
  if (!world.empty()) {
    return TradeError{TradeError::Code::WorldNotFresh,
                      "run_trade requires a freshly constructed world"};
  }

  TradeActors actors{
      crypto::keygen(as_span(role_key_seed(seed, "seller-key")), "seller"),
      crypto::keygen(as_span(role_key_seed(seed, "buyer-key")), "buyer")};

  DetRng rng(mix_seed(seed, 1));

  ReplayPool replay_pool;
  if (buyer_policy == BuyerPolicy::Replay) {
    DetRng provision_rng(mix_seed(seed, 2));
    auto envelope = provision_replay_envelope(config, actors, provision_rng);
    if (!envelope) return envelope.error();
    replay_pool.push_back(std::move(envelope).value());
  }

  const GameParams& p = config.params;
  const Money deposit_s = Money{static_cast<std::uint64_t>(p.seller_deposit)};
  const Money funding =
      Money{static_cast<std::uint64_t>(p.price + p.buyer_deposit)};
  if (world.create_account("seller") != LedgerStatus::Ok ||
      world.create_account("buyer") != LedgerStatus::Ok ||
      world.mint("seller", deposit_s) != LedgerStatus::Ok ||
      world.mint("buyer", funding) != LedgerStatus::Ok) {
    return TradeError{TradeError::Code::Internal, "world setup failed"};
  }

  TradeOutcome outcome;
  std::optional<TradeError> event_error;
  auto log = [&](std::string type, nlohmann::json data) {
    if (!world.conserved()) {
      event_error = TradeError{TradeError::Code::ConservationViolated,
                               "ledger conservation violated after " + type};
      return;
    }
    outcome.events.push_back(
        TradeEvent{std::move(type), std::move(data), world.to_json()});
  };

  const Bytes product = rng.next_bytes(16 + rng.next_in(0, 48));
  outcome.terms = make_terms(p, kMainNonce, as_span(product), actors);
  const TradeTerms& terms = outcome.terms;

  auto contract = EscrowContract::deploy(world, "seller", terms,
                                         config.gas_per_reconcile);
  if (!contract) {
    return TradeError{TradeError::Code::Internal,
                      std::string("deploy failed: ") +
                          to_string(contract.error())};
  }
  EscrowContract& escrow = contract.value();
  log("deploy", {{"contract", escrow.account()},
                 {"nonce", terms.nonce},
                 {"price", terms.price.units()},
                 {"seller_deposit", terms.seller_deposit.units()},
                 {"product_hash", crypto::to_hex(terms.product_hash)},
                 {"seller_pubkey", to_hex(as_span(terms.seller_pubkey))},
                 {"buyer_pubkey", to_hex(as_span(terms.buyer_pubkey))},
                 {"phase", to_string(escrow.phase())}});

  if (auto error = escrow.fund(world, "buyer")) {
    return TradeError{TradeError::Code::Internal,
                      std::string("fund failed: ") + to_string(*error)};
  }
  log("fund", {{"buyer", "buyer"},
               {"amount", funding.units()},
               {"buyer_deposit", terms.buyer_deposit.units()},
               {"phase", to_string(escrow.phase())}});

  const auto delivery =
      seller_deliver(seller_action, as_span(product), terms,
                     actors.seller_keys, as_span(actors.buyer_keys.public_key),
                     rng);
  log("deliver", {{"action", label(seller_action)},
                  {"channel", "off-chain"},
                  {"bytes", to_hex(as_span(delivery.bytes))}});

  const auto observation =
      buyer_observe(delivery, terms, as_span(actors.buyer_keys.private_key),
                    as_span(actors.seller_keys.public_key));
  auto response = buyer_respond(buyer_policy, observation, replay_pool, rng);
  if (!response) return response.error();

  nlohmann::json response_data = {{"policy", label(buyer_policy)},
                                  {"observation",
                                   to_string(observation.outcome)}};
  if (response.value().kind == ContractResponse::Kind::Complaint) {
    response_data["evidence"] = to_hex(as_span(response.value().evidence));
  }
  log(to_string(response.value().kind), std::move(response_data));

  Result<Resolution, ContractError> resolved = [&] {
    switch (response.value().kind) {
      case ContractResponse::Kind::Accept:
        return escrow.accept(world, "buyer");
      case ContractResponse::Kind::Complaint:
        return escrow.reconcile(world, "buyer",
                                Complaint{response.value().evidence});
      case ContractResponse::Kind::Silence:
      default:
        return escrow.finalize_locked(world);
    }
  }();
  if (!resolved) {
    return TradeError{TradeError::Code::Internal,
                      std::string("resolution failed: ") +
                          to_string(resolved.error())};
  }
  outcome.resolution = resolved.value();

  nlohmann::json resolution_data = {
      {"phase", to_string(outcome.resolution.phase)},
      {"seller_delta", outcome.resolution.seller_delta},
      {"buyer_delta", outcome.resolution.buyer_delta},
      {"burned", outcome.resolution.burned.units()},
      {"gas", outcome.resolution.gas_charged.units()},
      {"locked", outcome.resolution.locked.units()}};
  if (outcome.resolution.branch) {
    resolution_data["branch"] = to_string(*outcome.resolution.branch);
  }
  log("resolution", std::move(resolution_data));
  if (event_error) return *event_error;

  // Payoffs are balance deltas; the buyer additionally realizes the product
  // value whenever the seller actually delivered the good.
  const auto seller_final = world.balance("seller")->units();
  const auto buyer_final = world.balance("buyer")->units();
  outcome.seller_payoff = static_cast<std::int64_t>(seller_final) -
                          static_cast<std::int64_t>(deposit_s.units());
  outcome.buyer_payoff = static_cast<std::int64_t>(buyer_final) -
                         static_cast<std::int64_t>(funding.units());
  if (seller_action == SellerAction::Honest) {
    outcome.buyer_payoff += p.value;
  }

  // The resolution's own accounting must agree with the ledger's view.
  const std::int64_t value_credit =
      seller_action == SellerAction::Honest ? p.value : 0;
  if (outcome.seller_payoff != outcome.resolution.seller_delta ||
      outcome.buyer_payoff - value_credit != outcome.resolution.buyer_delta) {
    return TradeError{TradeError::Code::Internal,
                      "resolution deltas disagree with ledger balances"};
  }

  return outcome;
}

}  // namespace dde
