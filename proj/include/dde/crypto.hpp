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
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dde/bytes.hpp"

namespace dde::crypto {

// Deterministic, swappable cryptographic primitives for the escrow protocol:
// a product digest, a seller-authenticated envelope that anyone holding the
// seller's public key can open (verify-then-extract), and a buyer-confidential
// sealed envelope. Backed by libsodium (SHA-256, Ed25519, X25519). Every
// operation is a pure function of its inputs so simulation transcripts replay
// byte-for-byte.

inline constexpr std::size_t kDigestBytes = 32;
inline constexpr std::size_t kKeySeedBytes = 32;
inline constexpr std::string_view kHashAlgorithmName = "SHA-256";

/// Raised on malformed key material or oversized inputs. Data-dependent
/// verification failures are never exceptions; they come back as nullopt.
class CryptoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Digest {
  std::array<std::uint8_t, kDigestBytes> bytes{};

  friend bool operator==(const Digest&, const Digest&) = default;
};

std::string to_hex(const Digest& digest);

/// 256-bit digest of arbitrary data. The algorithm is fixed per build and
/// named in transcript headers (kHashAlgorithmName).
Digest hash(std::span<const std::uint8_t> data);

/// Asymmetric key pair (Ed25519). The same pair serves both roles a party
/// needs: authenticating envelopes it signs and receiving sealed envelopes
/// (via the standard Ed25519 -> X25519 conversion).
struct KeyPair {
  Bytes public_key;
  Bytes private_key;
  std::string owner_tag;
};

/// Deterministic in the 32-byte seed: equal seeds give equal pairs.
KeyPair keygen(std::span<const std::uint8_t> seed, std::string owner_tag);

/// Recovers the public key embedded in an Ed25519 private key.
Bytes derive_public_key(std::span<const std::uint8_t> private_key);

/// A message carried alongside a signature over it. Anyone holding the
/// signer's public key recovers the message and authenticates the signer in
/// one step; this realizes "encryption with the private key".
struct SignedEnvelope {
  Bytes payload;
  Bytes authenticity_tag;

  /// Wire form: tag followed by payload.
  Bytes to_bytes() const;
};

SignedEnvelope sign_seal(std::span<const std::uint8_t> private_key,
                         std::span<const std::uint8_t> message);

/// Verify-then-extract. Accepts arbitrary bytes: any input not produced by
/// sign_seal under the matching private key fails, which is exactly how the
/// contract recognizes a garbage submission.
std::optional<Bytes> open_signed(std::span<const std::uint8_t> public_key,
                                 std::span<const std::uint8_t> raw_bytes);
std::optional<Bytes> open_signed(std::span<const std::uint8_t> public_key,
                                 const SignedEnvelope& envelope);

/// Ciphertext only the matching private key can open.
struct SealedEnvelope {
  Bytes ciphertext;
};

/// Confidential encapsulation to the holder of private_key matching
/// public_key. Deterministic: the ephemeral key is derived from the recipient
/// key and the payload, so repeated runs produce identical ciphertexts and
/// transcripts stay replayable. The output is a standard X25519 sealed box.
SealedEnvelope conf_seal(std::span<const std::uint8_t> public_key,
                         std::span<const std::uint8_t> inner);

std::optional<Bytes> conf_open(std::span<const std::uint8_t> private_key,
                               std::span<const std::uint8_t> sealed_bytes);
std::optional<Bytes> conf_open(std::span<const std::uint8_t> private_key,
                               const SealedEnvelope& envelope);

/// The pair a seller commits to when delivering: the product bytes and the
/// contract nonce that pins the delivery to one specific trade.
struct ProductBinding {
  Bytes product_bytes;
  std::uint64_t contract_nonce = 0;

  friend bool operator==(const ProductBinding&, const ProductBinding&) =
      default;
};

/// Canonical encoding: 4-byte big-endian product length, product bytes,
/// 8-byte big-endian nonce. Bijective; decode rejects anything else.
/// Throws CryptoError if the product is 2^32 bytes or longer.
Bytes encode_binding(const ProductBinding& binding);
std::optional<ProductBinding> decode_binding(
    std::span<const std::uint8_t> bytes);

}  // namespace dde::crypto
