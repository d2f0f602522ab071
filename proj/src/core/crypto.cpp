// Copyright 2026 The Reverso Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reverso/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/kdf.h>

#include <algorithm>
#include <string>

#include "reverso/error.hpp"
#include "reverso/types.hpp"

namespace reverso::crypto {

namespace {

constexpr std::string_view kSalt = "reverso-v1 key schedule salt";

void hkdf_sha256(std::span<const std::uint8_t> secret, std::string_view info,
                 std::span<std::uint8_t> out) {
  std::unique_ptr<EVP_PKEY_CTX, decltype(&EVP_PKEY_CTX_free)> pctx(
      EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr), &EVP_PKEY_CTX_free);
  std::size_t out_len = out.size();
  if (!pctx || EVP_PKEY_derive_init(pctx.get()) <= 0 ||
      EVP_PKEY_CTX_set_hkdf_md(pctx.get(), EVP_sha256()) <= 0 ||
      EVP_PKEY_CTX_set1_hkdf_salt(
          pctx.get(), reinterpret_cast<const unsigned char*>(kSalt.data()),
          static_cast<int>(kSalt.size())) <= 0 ||
      EVP_PKEY_CTX_set1_hkdf_key(pctx.get(), secret.data(),
                                 static_cast<int>(secret.size())) <= 0 ||
      EVP_PKEY_CTX_add1_hkdf_info(
          pctx.get(), reinterpret_cast<const unsigned char*>(info.data()),
          static_cast<int>(info.size())) <= 0 ||
      EVP_PKEY_derive(pctx.get(), out.data(), &out_len) <= 0 ||
      out_len != out.size()) {
    throw Error(ErrorCode::kKeyDerivation, "HKDF-SHA256 failed");
  }
}

}  // namespace

KeySchedule derive_keys(std::span<const std::uint8_t> shared_secret,
                        std::string_view direction_label) {
  if (shared_secret.size() != kSecretLen) {
    throw Error(ErrorCode::kKeyDerivation, "shared secret must be 32 bytes");
  }
  const std::string label(direction_label);
  KeySchedule ks;
  hkdf_sha256(shared_secret, label + " key", ks.payload_key);
  hkdf_sha256(shared_secret, label + " iv", ks.payload_iv);
  hkdf_sha256(shared_secret, label + " hp", ks.hp_key);
  return ks;
}

Iv make_nonce(const Iv& iv, std::uint64_t packet_number) noexcept {
  Iv nonce = iv;
  for (std::size_t i = 0; i < 8; ++i) {
    nonce[kIvLen - 1 - i] ^= static_cast<std::uint8_t>(packet_number >> (8 * i));
  }
  return nonce;
}

struct PacketCipher::Contexts {
  EVP_CIPHER_CTX* seal = EVP_CIPHER_CTX_new();
  EVP_CIPHER_CTX* open = EVP_CIPHER_CTX_new();
  EVP_CIPHER_CTX* hp = EVP_CIPHER_CTX_new();

  ~Contexts() {
    EVP_CIPHER_CTX_free(seal);
    EVP_CIPHER_CTX_free(open);
    EVP_CIPHER_CTX_free(hp);
  }
};

PacketCipher::PacketCipher(const KeySchedule& keys)
    : keys_(keys), ctx_(std::make_unique<Contexts>()) {
  if (!ctx_->seal || !ctx_->open || !ctx_->hp ||
      EVP_EncryptInit_ex(ctx_->seal, EVP_aes_256_gcm(), nullptr,
                         keys_.payload_key.data(), nullptr) != 1 ||
      EVP_DecryptInit_ex(ctx_->open, EVP_aes_256_gcm(), nullptr,
                         keys_.payload_key.data(), nullptr) != 1 ||
      EVP_EncryptInit_ex(ctx_->hp, EVP_aes_256_ecb(), nullptr,
                         keys_.hp_key.data(), nullptr) != 1 ||
      EVP_CIPHER_CTX_set_padding(ctx_->hp, 0) != 1) {
    throw Error(ErrorCode::kCrypto, "cipher context setup failed");
  }
}

PacketCipher::~PacketCipher() = default;
PacketCipher::PacketCipher(PacketCipher&&) noexcept = default;
PacketCipher& PacketCipher::operator=(PacketCipher&&) noexcept = default;

std::size_t PacketCipher::seal(std::uint64_t packet_number,
                               std::span<const std::uint8_t> aad,
                               std::span<const std::uint8_t> plaintext,
                               std::span<std::uint8_t> dest) {
  if (dest.size() < plaintext.size() + kAeadTagLen) {
    throw Error(ErrorCode::kBufferTooSmall, "seal destination too small");
  }
  const Iv nonce = make_nonce(keys_.payload_iv, packet_number);
  EVP_CIPHER_CTX* c = ctx_->seal;
  int len = 0;
  int fin = 0;
  if (EVP_EncryptInit_ex(c, nullptr, nullptr, nullptr, nonce.data()) != 1 ||
      EVP_EncryptUpdate(c, nullptr, &len, aad.data(),
                        static_cast<int>(aad.size())) != 1 ||
      EVP_EncryptUpdate(c, dest.data(), &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(c, dest.data() + len, &fin) != 1 ||
      EVP_CIPHER_CTX_ctrl(c, EVP_CTRL_GCM_GET_TAG, kAeadTagLen,
                          dest.data() + plaintext.size()) != 1) {
    throw Error(ErrorCode::kCrypto, "AEAD seal failed");
  }
  return plaintext.size() + kAeadTagLen;
}

std::optional<std::size_t> PacketCipher::open(
    std::uint64_t packet_number, std::span<const std::uint8_t> aad,
    std::span<const std::uint8_t> ciphertext, std::span<std::uint8_t> dest) {
  if (ciphertext.size() < kAeadTagLen) return std::nullopt;
  const std::size_t pt_len = ciphertext.size() - kAeadTagLen;
  if (dest.size() < pt_len) {
    throw Error(ErrorCode::kBufferTooSmall, "open destination too small");
  }
  // The tag is copied out first: in-place mode overwrites the ciphertext.
  std::array<std::uint8_t, kAeadTagLen> tag;
  std::copy_n(ciphertext.data() + pt_len, kAeadTagLen, tag.begin());
  const Iv nonce = make_nonce(keys_.payload_iv, packet_number);
  EVP_CIPHER_CTX* c = ctx_->open;
  int len = 0;
  int fin = 0;
  if (EVP_DecryptInit_ex(c, nullptr, nullptr, nullptr, nonce.data()) != 1 ||
      EVP_DecryptUpdate(c, nullptr, &len, aad.data(),
                        static_cast<int>(aad.size())) != 1 ||
      EVP_DecryptUpdate(c, dest.data(), &len, ciphertext.data(),
                        static_cast<int>(pt_len)) != 1 ||
      EVP_CIPHER_CTX_ctrl(c, EVP_CTRL_GCM_SET_TAG, kAeadTagLen, tag.data()) != 1) {
    throw Error(ErrorCode::kCrypto, "AEAD open failed");
  }
  if (EVP_DecryptFinal_ex(c, dest.data() + len, &fin) != 1) return std::nullopt;
  return pt_len;
}

HpMask PacketCipher::hp_mask(std::span<const std::uint8_t> sample) {
  if (sample.size() != kSampleLen) {
    throw Error(ErrorCode::kInvalidArgument, "header sample must be 16 bytes");
  }
  HpMask mask{};
  int len = 0;
  if (EVP_EncryptUpdate(ctx_->hp, mask.data(), &len, sample.data(),
                        static_cast<int>(kSampleLen)) != 1 ||
      len != static_cast<int>(kMaskLen)) {
    throw Error(ErrorCode::kCrypto, "header mask failed");
  }
  return mask;
}

std::uint64_t Truncated::value() const noexcept {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < length; ++i) v = (v << 8) | bytes[i];
  return v;
}

std::size_t truncated_length(std::uint64_t distance) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const std::uint64_t half_window = std::uint64_t{1} << (8 * n - 1);
    if (distance + 1 < half_window) return n;
  }
  throw Error(ErrorCode::kTruncationRange);
}

Truncated truncate_to(std::uint64_t full, std::size_t length) {
  if (length < 1 || length > 4) {
    throw Error(ErrorCode::kInvalidArgument, "truncated length must be 1..4");
  }
  Truncated t;
  t.length = length;
  for (std::size_t i = 0; i < length; ++i) {
    t.bytes[length - 1 - i] = static_cast<std::uint8_t>(full >> (8 * i));
  }
  return t;
}

Truncated truncate_int(std::uint64_t full, std::uint64_t reference) {
  if (full > kMaxVarInt) throw Error(ErrorCode::kTruncationRange);
  const std::uint64_t distance =
      full >= reference ? full - reference : reference - full;
  return truncate_to(full, truncated_length(distance));
}

std::uint64_t expand_int(std::uint64_t truncated, std::size_t length,
                         std::uint64_t reference) noexcept {
  const std::uint64_t expected = reference + 1;
  const std::uint64_t window = std::uint64_t{1} << (8 * length);
  const std::uint64_t half = window / 2;
  const std::uint64_t mask = window - 1;
  const std::uint64_t candidate = (expected & ~mask) | (truncated & mask);
  if (candidate + half <= expected && candidate < (std::uint64_t{1} << 62) - window) {
    return candidate + window;
  }
  if (candidate > expected + half && candidate >= window) {
    return candidate - window;
  }
  return candidate;
}

std::uint64_t expand_int(const Truncated& truncated,
                         std::uint64_t reference) noexcept {
  return expand_int(truncated.value(), truncated.length, reference);
}

}  // namespace reverso::crypto
