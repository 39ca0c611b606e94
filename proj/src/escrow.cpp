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

#include "dde/escrow.hpp"

#include <utility>

namespace dde {

namespace {

// Largest total the contract will custody; keeps every delta representable
// as int64.
constexpr std::uint64_t kMaxContractTotal = std::uint64_t{1} << 62;

std::int64_t delta(Money payout, Money contribution) {
  return static_cast<std::int64_t>(payout.units()) -
         static_cast<std::int64_t>(contribution.units());
}

}  // namespace

const char* to_string(ContractPhase phase) {
  switch (phase) {
    case ContractPhase::Created: return "Created";
    case ContractPhase::Cancelled: return "Cancelled";
    case ContractPhase::Funded: return "Funded";
    case ContractPhase::Accepted: return "Accepted";
    case ContractPhase::ResolvedSellerCheat: return "ResolvedSellerCheat";
    case ContractPhase::ResolvedBuyerCheat: return "ResolvedBuyerCheat";
    case ContractPhase::ResolvedGarbage: return "ResolvedGarbage";
    case ContractPhase::Locked: return "Locked";
  }
  return "?";
}

bool is_terminal(ContractPhase phase) {
  return phase != ContractPhase::Created && phase != ContractPhase::Funded;
}

const char* to_string(ReconcileBranch branch) {
  switch (branch) {
    case ReconcileBranch::GarbageEvidence: return "garbage-evidence";
    case ReconcileBranch::NonceMismatch: return "nonce-mismatch";
    case ReconcileBranch::HashMismatch: return "hash-mismatch";
    case ReconcileBranch::ValidDelivery: return "valid-delivery";
  }
  return "?";
}

const char* to_string(ContractError error) {
  switch (error) {
    case ContractError::WrongPhase: return "wrong phase";
    case ContractError::Unauthorized: return "unauthorized caller";
    case ContractError::InsufficientFunds: return "insufficient funds";
    case ContractError::ZeroDeposit: return "deposit must be positive";
    case ContractError::InvalidTerms: return "invalid terms";
    case ContractError::GasExceedsDeposit:
      return "gas charge exceeds deposit";
    case ContractError::LedgerConflict: return "ledger conflict";
  }
  return "?";
}

Money EscrowContract::total_held() const {
  // Validated representable at deploy.
  return *terms_.seller_deposit.plus(terms_.buyer_deposit)
              ->plus(terms_.price);
}

Resolution EscrowContract::make_resolution(
    ContractPhase phase, Money seller_payout, Money buyer_payout, Money burned,
    Money gas, Money locked, std::optional<ReconcileBranch> branch) const {
  Resolution resolution;
  resolution.phase = phase;
  resolution.seller_delta = delta(seller_payout, terms_.seller_deposit);
  resolution.buyer_delta =
      delta(buyer_payout, *terms_.price.plus(terms_.buyer_deposit));
  resolution.burned = burned;
  resolution.gas_charged = gas;
  resolution.locked = locked;
  resolution.branch = branch;
  return resolution;
}

Result<EscrowContract, ContractError> EscrowContract::deploy(
    LedgerWorld& world, AccountId seller, TradeTerms terms,
    Money gas_per_reconcile) {
  if (terms.price.is_zero()) return ContractError::InvalidTerms;
  if (terms.seller_deposit.is_zero()) return ContractError::ZeroDeposit;
  if (terms.seller_pubkey.size() != crypto::kKeySeedBytes ||
      terms.buyer_pubkey.size() != crypto::kKeySeedBytes) {
    return ContractError::InvalidTerms;
  }
  if (gas_per_reconcile > terms.seller_deposit) {
    return ContractError::GasExceedsDeposit;
  }
  const auto subtotal = terms.seller_deposit.plus(terms.buyer_deposit);
  const auto total = subtotal ? subtotal->plus(terms.price) : std::nullopt;
  if (!total || total->units() > kMaxContractTotal) {
    return ContractError::InvalidTerms;
  }

  if (!world.has_account(seller)) return ContractError::LedgerConflict;
  const auto seller_balance = world.balance(seller);
  if (*seller_balance < terms.seller_deposit) {
    return ContractError::InsufficientFunds;
  }

  AccountId account = "contract:" + std::to_string(terms.nonce);
  if (world.has_account(account)) return ContractError::LedgerConflict;

  LedgerWorld staged = world;
  if (staged.create_account(account) != LedgerStatus::Ok ||
      staged.transfer(seller, account, terms.seller_deposit) !=
          LedgerStatus::Ok) {
    return ContractError::LedgerConflict;
  }
  world = std::move(staged);
  return EscrowContract(std::move(terms), std::move(account),
                        std::move(seller), gas_per_reconcile);
}

std::optional<ContractError> EscrowContract::cancel(LedgerWorld& world) {
  if (phase_ != ContractPhase::Created) return ContractError::WrongPhase;
  if (world.transfer(account_, seller_, terms_.seller_deposit) !=
      LedgerStatus::Ok) {
    return ContractError::LedgerConflict;
  }
  phase_ = ContractPhase::Cancelled;
  return std::nullopt;
}

std::optional<ContractError> EscrowContract::fund(LedgerWorld& world,
                                                  AccountId buyer) {
  if (phase_ != ContractPhase::Created) return ContractError::WrongPhase;
  if (terms_.buyer_deposit.is_zero()) return ContractError::ZeroDeposit;
  if (gas_ > terms_.buyer_deposit) return ContractError::GasExceedsDeposit;
  if (!world.has_account(buyer)) return ContractError::LedgerConflict;

  const Money amount = *terms_.price.plus(terms_.buyer_deposit);
  const auto status = world.transfer(buyer, account_, amount);
  if (status == LedgerStatus::InsufficientFunds) {
    return ContractError::InsufficientFunds;
  }
  if (status != LedgerStatus::Ok) return ContractError::LedgerConflict;
  buyer_ = std::move(buyer);
  phase_ = ContractPhase::Funded;
  return std::nullopt;
}

Result<Resolution, ContractError> EscrowContract::accept(
    LedgerWorld& world, const AccountId& caller) {
  if (phase_ != ContractPhase::Funded) return ContractError::WrongPhase;
  if (caller != *buyer_) return ContractError::Unauthorized;

  const Money seller_payout = *terms_.price.plus(terms_.seller_deposit);
  LedgerWorld staged = world;
  if (staged.transfer(account_, seller_, seller_payout) != LedgerStatus::Ok ||
      staged.transfer(account_, *buyer_, terms_.buyer_deposit) !=
          LedgerStatus::Ok) {
    return ContractError::LedgerConflict;
  }
  world = std::move(staged);
  phase_ = ContractPhase::Accepted;
  return make_resolution(ContractPhase::Accepted, seller_payout,
                         terms_.buyer_deposit, Money{}, Money{}, Money{},
                         std::nullopt);
}

Result<Resolution, ContractError> EscrowContract::reconcile(
    LedgerWorld& world, const AccountId& caller, const Complaint& complaint) {
  if (phase_ != ContractPhase::Funded) return ContractError::WrongPhase;
  if (caller != *buyer_) return ContractError::Unauthorized;

  // Classify the evidence. Everything that fails to open under the seller's
  // key, or opens to an undecodable payload, is one garbage branch; the
  // contract cannot attribute undecipherable data to either party's intent.
  ReconcileBranch branch = ReconcileBranch::GarbageEvidence;
  const auto opened = crypto::open_signed(terms_.seller_pubkey,
                                          std::span<const std::uint8_t>(
                                              complaint.evidence));
  if (opened) {
    const auto binding =
        crypto::decode_binding(std::span<const std::uint8_t>(*opened));
    if (binding) {
      if (binding->contract_nonce != terms_.nonce) {
        branch = ReconcileBranch::NonceMismatch;
      } else if (!(crypto::hash(std::span<const std::uint8_t>(
                       binding->product_bytes)) == terms_.product_hash)) {
        branch = ReconcileBranch::HashMismatch;
      } else {
        branch = ReconcileBranch::ValidDelivery;
      }
    }
  }

  const Money total = total_held();
  const Money seller_refund = *terms_.price.plus(terms_.seller_deposit);
  const Money buyer_refund = *terms_.price.plus(terms_.buyer_deposit);

  LedgerWorld staged = world;
  auto ok = [](LedgerStatus s) { return s == LedgerStatus::Ok; };
  Resolution resolution;

  switch (branch) {
    case ReconcileBranch::GarbageEvidence: {
      // Gas comes out of the complaint submitter's deposit; the rest of the
      // deposits and the payment are all burned.
      const Money burned = *total.minus(gas_);
      if (!ok(staged.charge_gas(account_, gas_)) ||
          !ok(staged.burn(account_, burned))) {
        return ContractError::LedgerConflict;
      }
      resolution =
          make_resolution(ContractPhase::ResolvedGarbage, Money{}, Money{},
                          burned, gas_, Money{}, branch);
      break;
    }
    case ReconcileBranch::NonceMismatch:
    case ReconcileBranch::ValidDelivery: {
      // Buyer cheated (replayed foreign evidence or disputed a provably good
      // delivery): its deposit pays gas and burns; the seller is made whole.
      const Money burned = *terms_.buyer_deposit.minus(gas_);
      if (!ok(staged.charge_gas(account_, gas_)) ||
          !ok(staged.burn(account_, burned)) ||
          !ok(staged.transfer(account_, seller_, seller_refund))) {
        return ContractError::LedgerConflict;
      }
      resolution =
          make_resolution(ContractPhase::ResolvedBuyerCheat, seller_refund,
                          Money{}, burned, gas_, Money{}, branch);
      break;
    }
    case ReconcileBranch::HashMismatch: {
      // Seller cheated: its deposit pays gas and burns; the buyer recovers
      // both the payment and its deposit.
      const Money burned = *terms_.seller_deposit.minus(gas_);
      if (!ok(staged.charge_gas(account_, gas_)) ||
          !ok(staged.burn(account_, burned)) ||
          !ok(staged.transfer(account_, *buyer_, buyer_refund))) {
        return ContractError::LedgerConflict;
      }
      resolution =
          make_resolution(ContractPhase::ResolvedSellerCheat, Money{},
                          buyer_refund, burned, gas_, Money{}, branch);
      break;
    }
  }

  world = std::move(staged);
  phase_ = resolution.phase;
  return resolution;
}

Result<Resolution, ContractError> EscrowContract::finalize_locked(
    LedgerWorld& world) {
  (void)world;  // no transfers: the funds stay on the contract account
  if (phase_ != ContractPhase::Funded) return ContractError::WrongPhase;
  phase_ = ContractPhase::Locked;
  return make_resolution(ContractPhase::Locked, Money{}, Money{}, Money{},
                         Money{}, total_held(), std::nullopt);
}

}  // namespace dde
