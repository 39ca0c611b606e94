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
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

namespace dde {

/// Monetary amount in minor units. Unsigned: no account ever holds negative
/// value. All arithmetic is checked; overflow is an error, never wraparound.
class Money {
 public:
  constexpr Money() = default;
  constexpr explicit Money(std::uint64_t units) : units_(units) {}

  constexpr std::uint64_t units() const { return units_; }
  constexpr bool is_zero() const { return units_ == 0; }

  [[nodiscard]] std::optional<Money> plus(Money other) const;
  [[nodiscard]] std::optional<Money> minus(Money other) const;

  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  std::uint64_t units_ = 0;
};

using AccountId = std::string;

enum class LedgerStatus {
  Ok,
  UnknownAccount,
  DuplicateAccount,
  InsufficientFunds,
  Overflow,
};

const char* to_string(LedgerStatus status);

/// Account balances plus two irreversible sinks (burn, gas) and a mint
/// counter. Invariant after every operation:
///
///   minted_total == sum(balances) + burned_total + gas_total
///
/// Operations are atomic: on any non-Ok status the world is unchanged.
class LedgerWorld {
 public:
  LedgerStatus create_account(const AccountId& account);
  LedgerStatus mint(const AccountId& account, Money amount);
  LedgerStatus transfer(const AccountId& from, const AccountId& to,
                        Money amount);
  LedgerStatus burn(const AccountId& from, Money amount);
  LedgerStatus charge_gas(const AccountId& from, Money amount);

  bool has_account(const AccountId& account) const;
  std::optional<Money> balance(const AccountId& account) const;
  Money burned_total() const { return burned_; }
  Money gas_total() const { return gas_; }
  Money minted_total() const { return minted_; }

  /// True when nothing has been created or minted yet.
  bool empty() const { return balances_.empty() && minted_.is_zero(); }

  /// Verifies the conservation identity by exact integer arithmetic.
  bool conserved() const;

  /// Snapshot: {"balances": {...}, "burned": n, "gas": n, "minted": n}.
  nlohmann::json to_json() const;

 private:
  std::map<AccountId, Money> balances_;
  Money burned_;
  Money gas_;
  Money minted_;
};

}  // namespace dde
