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

#include "dde/ledger.hpp"

#include <limits>

namespace dde {

std::optional<Money> Money::plus(Money other) const {
  if (units_ > std::numeric_limits<std::uint64_t>::max() - other.units_) {
    return std::nullopt;
  }
  return Money{units_ + other.units_};
}

std::optional<Money> Money::minus(Money other) const {
  if (other.units_ > units_) return std::nullopt;
  return Money{units_ - other.units_};
}

const char* to_string(LedgerStatus status) {
  switch (status) {
    case LedgerStatus::Ok: return "ok";
    case LedgerStatus::UnknownAccount: return "unknown account";
    case LedgerStatus::DuplicateAccount: return "duplicate account";
    case LedgerStatus::InsufficientFunds: return "insufficient funds";
    case LedgerStatus::Overflow: return "overflow";
  }
  return "?";
}

LedgerStatus LedgerWorld::create_account(const AccountId& account) {
  if (balances_.contains(account)) return LedgerStatus::DuplicateAccount;
  balances_.emplace(account, Money{});
  return LedgerStatus::Ok;
}

LedgerStatus LedgerWorld::mint(const AccountId& account, Money amount) {
  auto it = balances_.find(account);
  if (it == balances_.end()) return LedgerStatus::UnknownAccount;
  const auto new_balance = it->second.plus(amount);
  const auto new_minted = minted_.plus(amount);
  if (!new_balance || !new_minted) return LedgerStatus::Overflow;
  it->second = *new_balance;
  minted_ = *new_minted;
  return LedgerStatus::Ok;
}

LedgerStatus LedgerWorld::transfer(const AccountId& from, const AccountId& to,
                                   Money amount) {
  auto from_it = balances_.find(from);
  if (from_it == balances_.end()) return LedgerStatus::UnknownAccount;
  auto to_it = balances_.find(to);
  if (to_it == balances_.end()) return LedgerStatus::UnknownAccount;
  if (from_it->second < amount) return LedgerStatus::InsufficientFunds;
  if (from == to) return LedgerStatus::Ok;  // no-op
  const auto credited = to_it->second.plus(amount);
  if (!credited) return LedgerStatus::Overflow;
  from_it->second = *from_it->second.minus(amount);
  to_it->second = *credited;
  return LedgerStatus::Ok;
}

LedgerStatus LedgerWorld::burn(const AccountId& from, Money amount) {
  auto it = balances_.find(from);
  if (it == balances_.end()) return LedgerStatus::UnknownAccount;
  if (it->second < amount) return LedgerStatus::InsufficientFunds;
  const auto new_burned = burned_.plus(amount);
  if (!new_burned) return LedgerStatus::Overflow;
  it->second = *it->second.minus(amount);
  burned_ = *new_burned;
  return LedgerStatus::Ok;
}

LedgerStatus LedgerWorld::charge_gas(const AccountId& from, Money amount) {
  auto it = balances_.find(from);
  if (it == balances_.end()) return LedgerStatus::UnknownAccount;
  if (it->second < amount) return LedgerStatus::InsufficientFunds;
  const auto new_gas = gas_.plus(amount);
  if (!new_gas) return LedgerStatus::Overflow;
  it->second = *it->second.minus(amount);
  gas_ = *new_gas;
  return LedgerStatus::Ok;
}

bool LedgerWorld::has_account(const AccountId& account) const {
  return balances_.contains(account);
}

std::optional<Money> LedgerWorld::balance(const AccountId& account) const {
  auto it = balances_.find(account);
  if (it == balances_.end()) return std::nullopt;
  return it->second;
}

bool LedgerWorld::conserved() const {
  Money sum;
  for (const auto& [account, balance] : balances_) {
    const auto next = sum.plus(balance);
    if (!next) return false;
    sum = *next;
  }
  const auto with_burned = sum.plus(burned_);
  if (!with_burned) return false;
  const auto total = with_burned->plus(gas_);
  if (!total) return false;
  return *total == minted_;
}

nlohmann::json LedgerWorld::to_json() const {
  nlohmann::json balances = nlohmann::json::object();
  for (const auto& [account, balance] : balances_) {
    balances[account] = balance.units();
  }
  return nlohmann::json{{"balances", std::move(balances)},
                        {"burned", burned_.units()},
                        {"gas", gas_.units()},
                        {"minted", minted_.units()}};
}

}  // namespace dde
