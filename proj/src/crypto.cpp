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

#include "dde/crypto.hpp"

#include <sodium.h>

#include <cstring>

namespace dde::crypto {

namespace {

// Domain separator for the deterministic sealed-box ephemeral key.
constexpr unsigned char kSealDomain[] = "ddescrow.seal.v1";

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw CryptoError("libsodium initialization failed");
}

void require(bool ok, const char* message) {
  if (!ok) throw CryptoError(message);
}

// Ed25519 public key -> X25519 public key, rejecting non-curve points.
std::array<std::uint8_t, crypto_scalarmult_curve25519_BYTES> to_curve_public(
    std::span<const std::uint8_t> ed_public) {
  require(ed_public.size() == crypto_sign_PUBLICKEYBYTES,
          "public key must be 32 bytes");
  std::array<std::uint8_t, crypto_scalarmult_curve25519_BYTES> curve{};
  require(crypto_sign_ed25519_pk_to_curve25519(curve.data(),
                                               ed_public.data()) == 0,
          "public key is not a valid curve point");
  return curve;
}

std::array<std::uint8_t, crypto_scalarmult_curve25519_BYTES> to_curve_private(
    std::span<const std::uint8_t> ed_private) {
  require(ed_private.size() == crypto_sign_SECRETKEYBYTES,
          "private key must be 64 bytes");
  std::array<std::uint8_t, crypto_scalarmult_curve25519_BYTES> curve{};
  require(crypto_sign_ed25519_sk_to_curve25519(
              curve.data(), const_cast<std::uint8_t*>(ed_private.data())) == 0,
          "private key conversion failed");
  return curve;
}

}  // namespace

std::string to_hex(const Digest& digest) { return dde::to_hex(digest.bytes); }

Digest hash(std::span<const std::uint8_t> data) {
  ensure_sodium();
  Digest digest;
  crypto_hash_sha256(digest.bytes.data(), data.data(), data.size());
  return digest;
}

KeyPair keygen(std::span<const std::uint8_t> seed, std::string owner_tag) {
  ensure_sodium();
  require(seed.size() == kKeySeedBytes, "key seed must be 32 bytes");
  KeyPair pair;
  pair.public_key.resize(crypto_sign_PUBLICKEYBYTES);
  pair.private_key.resize(crypto_sign_SECRETKEYBYTES);
  crypto_sign_seed_keypair(pair.public_key.data(), pair.private_key.data(),
                           seed.data());
  pair.owner_tag = std::move(owner_tag);
  return pair;
}

Bytes derive_public_key(std::span<const std::uint8_t> private_key) {
  ensure_sodium();
  require(private_key.size() == crypto_sign_SECRETKEYBYTES,
          "private key must be 64 bytes");
  Bytes public_key(crypto_sign_PUBLICKEYBYTES);
  crypto_sign_ed25519_sk_to_pk(public_key.data(), private_key.data());
  return public_key;
}

Bytes SignedEnvelope::to_bytes() const {
  Bytes out;
  out.reserve(authenticity_tag.size() + payload.size());
  out.insert(out.end(), authenticity_tag.begin(), authenticity_tag.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

SignedEnvelope sign_seal(std::span<const std::uint8_t> private_key,
                         std::span<const std::uint8_t> message) {
  ensure_sodium();
  require(private_key.size() == crypto_sign_SECRETKEYBYTES,
          "private key must be 64 bytes");
  SignedEnvelope envelope;
  envelope.payload.assign(message.begin(), message.end());
  envelope.authenticity_tag.resize(crypto_sign_BYTES);
  crypto_sign_detached(envelope.authenticity_tag.data(), nullptr,
                       message.data(), message.size(), private_key.data());
  return envelope;
}

std::optional<Bytes> open_signed(std::span<const std::uint8_t> public_key,
                                 std::span<const std::uint8_t> raw_bytes) {
  ensure_sodium();
  require(public_key.size() == crypto_sign_PUBLICKEYBYTES,
          "public key must be 32 bytes");
  if (raw_bytes.size() < crypto_sign_BYTES) return std::nullopt;
  Bytes message(raw_bytes.size() - crypto_sign_BYTES);
  unsigned long long message_len = 0;
  if (crypto_sign_open(message.empty() ? nullptr : message.data(),
                       &message_len, raw_bytes.data(), raw_bytes.size(),
                       public_key.data()) != 0) {
    return std::nullopt;
  }
  message.resize(static_cast<std::size_t>(message_len));
  return message;
}

std::optional<Bytes> open_signed(std::span<const std::uint8_t> public_key,
                                 const SignedEnvelope& envelope) {
  return open_signed(public_key, envelope.to_bytes());
}

SealedEnvelope conf_seal(std::span<const std::uint8_t> public_key,
                         std::span<const std::uint8_t> inner) {
  ensure_sodium();
  const auto recipient = to_curve_public(public_key);

  // Ephemeral key derived from (domain, recipient, payload) instead of fresh
  // randomness: transcripts must replay byte-for-byte under a fixed seed.
  // The result is still a well-formed sealed box.
  std::array<std::uint8_t, crypto_box_SEEDBYTES> ephemeral_seed{};
  crypto_generichash_state state;
  crypto_generichash_init(&state, nullptr, 0, ephemeral_seed.size());
  crypto_generichash_update(&state, kSealDomain, sizeof(kSealDomain) - 1);
  crypto_generichash_update(&state, recipient.data(), recipient.size());
  crypto_generichash_update(&state, inner.data(), inner.size());
  crypto_generichash_final(&state, ephemeral_seed.data(),
                           ephemeral_seed.size());

  std::array<std::uint8_t, crypto_box_PUBLICKEYBYTES> ephemeral_pk{};
  std::array<std::uint8_t, crypto_box_SECRETKEYBYTES> ephemeral_sk{};
  crypto_box_seed_keypair(ephemeral_pk.data(), ephemeral_sk.data(),
                          ephemeral_seed.data());

  // Sealed-box nonce convention: hash of ephemeral and recipient keys.
  std::array<std::uint8_t, crypto_box_NONCEBYTES> nonce{};
  crypto_generichash_init(&state, nullptr, 0, nonce.size());
  crypto_generichash_update(&state, ephemeral_pk.data(), ephemeral_pk.size());
  crypto_generichash_update(&state, recipient.data(), recipient.size());
  crypto_generichash_final(&state, nonce.data(), nonce.size());

  SealedEnvelope envelope;
  envelope.ciphertext.resize(crypto_box_PUBLICKEYBYTES + crypto_box_MACBYTES +
                             inner.size());
  std::memcpy(envelope.ciphertext.data(), ephemeral_pk.data(),
              crypto_box_PUBLICKEYBYTES);
  require(crypto_box_easy(envelope.ciphertext.data() + crypto_box_PUBLICKEYBYTES,
                          inner.data(), inner.size(), nonce.data(),
                          recipient.data(), ephemeral_sk.data()) == 0,
          "sealing failed");
  return envelope;
}

std::optional<Bytes> conf_open(std::span<const std::uint8_t> private_key,
                               std::span<const std::uint8_t> sealed_bytes) {
  ensure_sodium();
  const auto curve_sk = to_curve_private(private_key);
  std::array<std::uint8_t, crypto_box_PUBLICKEYBYTES> curve_pk{};
  crypto_scalarmult_base(curve_pk.data(), curve_sk.data());

  if (sealed_bytes.size() < crypto_box_SEALBYTES) return std::nullopt;
  Bytes inner(sealed_bytes.size() - crypto_box_SEALBYTES);
  if (crypto_box_seal_open(inner.empty() ? nullptr : inner.data(),
                           sealed_bytes.data(), sealed_bytes.size(),
                           curve_pk.data(), curve_sk.data()) != 0) {
    return std::nullopt;
  }
  return inner;
}

std::optional<Bytes> conf_open(std::span<const std::uint8_t> private_key,
                               const SealedEnvelope& envelope) {
  return conf_open(private_key, std::span<const std::uint8_t>(
                                    envelope.ciphertext));
}

Bytes encode_binding(const ProductBinding& binding) {
  require(binding.product_bytes.size() < (std::uint64_t{1} << 32),
          "product too large to encode");
  const std::uint32_t length =
      static_cast<std::uint32_t>(binding.product_bytes.size());
  Bytes out;
  out.reserve(4 + binding.product_bytes.size() + 8);
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>((length >> shift) & 0xFF));
  }
  out.insert(out.end(), binding.product_bytes.begin(),
             binding.product_bytes.end());
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(
        static_cast<std::uint8_t>((binding.contract_nonce >> shift) & 0xFF));
  }
  return out;
}

std::optional<ProductBinding> decode_binding(
    std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) return std::nullopt;
  std::uint32_t length = 0;
  for (int i = 0; i < 4; ++i) {
    length = (length << 8) | bytes[static_cast<std::size_t>(i)];
  }
  if (bytes.size() != std::size_t{12} + length) return std::nullopt;
  ProductBinding binding;
  binding.product_bytes.assign(bytes.begin() + 4, bytes.begin() + 4 + length);
  binding.contract_nonce = 0;
  for (std::size_t i = 4 + length; i < bytes.size(); ++i) {
    binding.contract_nonce = (binding.contract_nonce << 8) | bytes[i];
  }
  return binding;
}

}  // namespace dde::crypto
