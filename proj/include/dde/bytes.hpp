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
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dde {

using Bytes = std::vector<std::uint8_t>;

std::string to_hex(std::span<const std::uint8_t> data);
std::optional<Bytes> from_hex(std::string_view hex);

/// Copies a UTF-8 literal into a byte buffer (test and fixture convenience).
Bytes to_bytes(std::string_view text);

/// Derives an independent stream seed from a base seed (splitmix64 mix).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Deterministic random source for simulations. All protocol randomness
/// (payload content, garbage strings, sampled parameters) flows through one
/// of these so a run is a pure function of its seed.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform-ish draw in [lo, hi], inclusive. Modulo bias is irrelevant at
  /// the ranges used here and keeps the byte stream stable across platforms.
  std::uint64_t next_in(std::uint64_t lo, std::uint64_t hi);

  Bytes next_bytes(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace dde
