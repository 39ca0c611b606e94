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
#include <optional>
#include <string>

#include "dde/crypto.hpp"
#include "dde/ledger.hpp"
#include "dde/result.hpp"

namespace dde {

/// Immutable parameters a seller publishes when deploying one sale:
/// price, product digest, per-contract nonce, deposit sizes and both
/// parties' public keys.
struct TradeTerms {
  Money price;
  crypto::Digest product_hash;
  std::uint64_t nonce = 0;
  Money seller_deposit;
  Money buyer_deposit;
  Bytes seller_pubkey;
  Bytes buyer_pubkey;
};

/// Contract lifecycle. Transitions:
///   Created -> Cancelled | Funded
///   Funded  -> Accepted | ResolvedSellerCheat | ResolvedBuyerCheat
///            | ResolvedGarbage | Locked
/// Every other phase is terminal. Locked is entered only when the simulation
/// horizon closes a Funded contract with no buyer response; the funds stay on
/// the contract account forever (there is deliberately no timeout).
enum class ContractPhase {
  Created,
  Cancelled,
  Funded,
  Accepted,
  ResolvedSellerCheat,
  ResolvedBuyerCheat,
  ResolvedGarbage,
  Locked,
};

const char* to_string(ContractPhase phase);
bool is_terminal(ContractPhase phase);

/// Buyer-submitted dispute evidence. Arbitrary bytes by construction;
/// validity is decided by reconcile alone.
struct Complaint {
  Bytes evidence;
};

/// Which of the four reconciliation outcomes a complaint hit.
enum class ReconcileBranch {
  GarbageEvidence,  // evidence fails to open or decode: slash everything
  NonceMismatch,    // valid envelope from another contract: buyer cheated
  HashMismatch,     // product digest differs from the terms: seller cheated
  ValidDelivery,    // evidence proves honest delivery: frivolous complaint
};

const char* to_string(ReconcileBranch branch);

/// Terminal accounting of one contract. Deltas are net of each party's own
/// contribution (seller put in E_S; buyer put in P_d + E_B), so
///
///   seller_delta + buyer_delta + burned + gas_charged + locked == 0
///
/// holds exactly for every resolution.
struct Resolution {
  ContractPhase phase = ContractPhase::Created;
  std::int64_t seller_delta = 0;
  std::int64_t buyer_delta = 0;
  Money burned;
  Money gas_charged;
  Money locked;
  std::optional<ReconcileBranch> branch;
};

enum class ContractError {
  WrongPhase,
  Unauthorized,
  InsufficientFunds,
  ZeroDeposit,
  InvalidTerms,
  GasExceedsDeposit,
  LedgerConflict,
};

const char* to_string(ContractError error);

/// The escrow state machine. Holds the seller deposit from deployment, the
/// buyer deposit and payment from funding, and autonomously adjudicates the
/// buyer's response:
///
///   accept     -> refund both deposits, pay the seller
///   reconcile  -> open the evidence with the seller's public key, then
///                 (a) undecodable evidence        slash deposits and payment
///                 (b) nonce from another contract buyer loses deposit,
///                                                 seller is paid in full
///                 (c) product digest mismatch     seller loses deposit,
///                                                 buyer fully refunded
///                 (d) evidence proves delivery    buyer loses deposit,
///                                                 seller is paid in full
///
/// In branches (b)-(d) the reconciliation gas charge comes out of the losing
/// party's deposit before the remainder is burned; in branch (a) it comes out
/// of the buyer deposit since the buyer submitted the complaint.
class EscrowContract {
 public:
  /// Moves the seller deposit into a fresh contract account. Validates the
  /// published terms (positive price and seller deposit, well-formed keys,
  /// representable totals, gas within deposits).
  static Result<EscrowContract, ContractError> deploy(
      LedgerWorld& world, AccountId seller, TradeTerms terms,
      Money gas_per_reconcile = Money{0});

  /// Refunds the seller deposit while nobody has funded. Anyone may poke
  /// this; the refund can only go to the seller.
  std::optional<ContractError> cancel(LedgerWorld& world);

  /// Buyer pays price + buyer deposit; the contract then holds
  /// E_S + E_B + P_d until resolution.
  std::optional<ContractError> fund(LedgerWorld& world, AccountId buyer);

  Result<Resolution, ContractError> accept(LedgerWorld& world,
                                           const AccountId& caller);

  Result<Resolution, ContractError> reconcile(LedgerWorld& world,
                                              const AccountId& caller,
                                              const Complaint& complaint);

  /// Closes out a Funded contract whose buyer never responded. No transfers,
  /// no burn: the funds stay on the contract account permanently.
  Result<Resolution, ContractError> finalize_locked(LedgerWorld& world);

  ContractPhase phase() const { return phase_; }
  const TradeTerms& terms() const { return terms_; }
  const AccountId& account() const { return account_; }
  const AccountId& seller() const { return seller_; }
  const std::optional<AccountId>& buyer() const { return buyer_; }
  Money gas_per_reconcile() const { return gas_; }

 private:
  EscrowContract(TradeTerms terms, AccountId account, AccountId seller,
                 Money gas)
      : terms_(std::move(terms)),
        account_(std::move(account)),
        seller_(std::move(seller)),
        gas_(gas) {}

  Money total_held() const;
  Resolution make_resolution(ContractPhase phase, Money seller_payout,
                             Money buyer_payout, Money burned, Money gas,
                             Money locked,
                             std::optional<ReconcileBranch> branch) const;

  TradeTerms terms_;
  AccountId account_;
  AccountId seller_;
  std::optional<AccountId> buyer_;
  Money gas_;
  ContractPhase phase_ = ContractPhase::Created;
};

}  // namespace dde
