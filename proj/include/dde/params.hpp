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

namespace dde {

/// Largest value accepted for any single trade parameter. Keeps every sum of
/// up to three parameters comfortably inside int64 payoff arithmetic.
inline constexpr std::int64_t kMaxParamValue = std::int64_t{1} << 40;

/// Economic parameters of one trade: the contract price, the buyer's private
/// valuation of the product, and the two escrow deposits. The deposits and
/// the price live on the ledger; the valuation only enters payoff accounting.
struct GameParams {
  std::int64_t price = 10;
  std::int64_t value = 15;
  std::int64_t seller_deposit = 5;
  std::int64_t buyer_deposit = 5;

  bool non_negative() const {
    return price >= 0 && value >= 0 && seller_deposit >= 0 &&
           buyer_deposit >= 0;
  }
  bool within_bounds() const {
    return non_negative() && price <= kMaxParamValue &&
           value <= kMaxParamValue && seller_deposit <= kMaxParamValue &&
           buyer_deposit <= kMaxParamValue;
  }
  bool deposits_positive() const {
    return seller_deposit > 0 && buyer_deposit > 0;
  }
  bool value_exceeds_price() const { return value > price; }

  /// The assumptions under which honesty is the unique equilibrium outcome.
  bool equilibrium_preconditions() const {
    return deposits_positive() && value_exceeds_price();
  }

  friend bool operator==(const GameParams&, const GameParams&) = default;
};

/// Exact signed payoffs for (seller, buyer). Never floating point, so
/// equilibrium comparisons are never tolerance-dependent.
struct PayoffPair {
  std::int64_t seller = 0;
  std::int64_t buyer = 0;

  friend bool operator==(const PayoffPair&, const PayoffPair&) = default;
};

}  // namespace dde
