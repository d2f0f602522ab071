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

#include <gtest/gtest.h>

#include <set>
#include <string>

#include "reverso/crypto.hpp"
#include "reverso/error.hpp"
#include "testkit.hpp"

namespace {

using namespace reverso;
using namespace reverso::crypto;
using testkit::Bytes;

Bytes as_bytes(std::span<const std::uint8_t> s) { return {s.begin(), s.end()}; }

TEST(KeySchedule, Deterministic) {
  const Bytes secret(32, 0x5a);
  EXPECT_EQ(derive_keys(secret, "c2s"), derive_keys(secret, "c2s"));
}

TEST(KeySchedule, LabelsSeparateAllValues) {
  const Bytes secret(32, 0x5a);
  const auto a = derive_keys(secret, "c2s");
  const auto b = derive_keys(secret, "s2c");
  const std::vector<Bytes> all{as_bytes(a.payload_key), as_bytes(a.payload_iv), as_bytes(a.hp_key),
                               as_bytes(b.payload_key), as_bytes(b.payload_iv), as_bytes(b.hp_key)};
  EXPECT_EQ(std::set<Bytes>(all.begin(), all.end()).size(), 6u);
}

TEST(KeySchedule, MatchesIndependentVectors) {
  const auto v = testkit::load_vectors("crypto_vectors.txt");
  Bytes counting(32);
  for (std::size_t i = 0; i < 32; ++i) counting[i] = static_cast<std::uint8_t>(i);
  for (const auto& [name, secret] : {std::pair<std::string, Bytes>{"zero", Bytes(32, 0)},
                                     std::pair<std::string, Bytes>{"count", counting}}) {
    for (const std::string label : {"c2s", "s2c"}) {
      const auto ks = derive_keys(secret, label);
      const std::string tag = name + "." + label;
      EXPECT_EQ(as_bytes(ks.payload_key), v.at(tag + ".key")) << tag;
      EXPECT_EQ(as_bytes(ks.payload_iv), v.at(tag + ".iv")) << tag;
      EXPECT_EQ(as_bytes(ks.hp_key), v.at(tag + ".hp")) << tag;
    }
  }
}

TEST(KeySchedule, RejectsWrongSecretLength) {
  const Bytes secret(16, 1);
  try {
    derive_keys(secret, "c2s");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKeyDerivation);
  }
}

TEST(PacketCipher, SealMatchesIndependentVectors) {
  const auto v = testkit::load_vectors("crypto_vectors.txt");
  PacketCipher cipher(derive_keys(Bytes(32, 0), "c2s"));
  const Bytes& pt = v.at("seal.plaintext");
  const Bytes& aad = v.at("seal.aad");
  for (const std::uint64_t pn : {0ULL, 7ULL, 0x1234567ULL}) {
    Bytes out(pt.size() + kAeadTagLen);
    EXPECT_EQ(cipher.seal(pn, aad, pt, out), pt.size() + 16);
    EXPECT_EQ(out, v.at("seal.pn" + std::to_string(pn))) << pn;
  }
}

TEST(PacketCipher, HeaderMaskMatchesIndependentVector) {
  const auto v = testkit::load_vectors("crypto_vectors.txt");
  PacketCipher cipher(derive_keys(Bytes(32, 0), "c2s"));
  const auto mask = cipher.hp_mask(v.at("hp.sample"));
  EXPECT_EQ(as_bytes(mask), v.at("hp.mask"));
}

TEST(PacketCipher, RoundTripInPlace) {
  testkit::Gen g(3);
  PacketCipher cipher(derive_keys(g.bytes(32), "s2c"));
  for (int i = 0; i < 200; ++i) {
    const Bytes aad = g.bytes(g.below(30));
    const Bytes pt = g.bytes(g.below(1400));
    Bytes buf = pt;
    buf.resize(pt.size() + 16);
    const std::uint64_t pn = g.varint_value();
    ASSERT_EQ(cipher.seal(pn, aad, std::span(buf.data(), pt.size()), buf), pt.size() + 16);
    const auto n = cipher.open(pn, aad, buf, buf);
    ASSERT_TRUE(n.has_value());
    EXPECT_EQ(*n, pt.size());
    EXPECT_TRUE(std::equal(pt.begin(), pt.end(), buf.begin()));
  }
}

TEST(PacketCipher, NonceChangesCiphertext) {
  PacketCipher cipher(derive_keys(Bytes(32, 9), "c2s"));
  const Bytes pt(64, 0x33);
  Bytes a(80), b(80);
  cipher.seal(1, {}, pt, a);
  cipher.seal(2, {}, pt, b);
  EXPECT_NE(a, b);
}

TEST(PacketCipher, TamperingFailsAuthentication) {
  PacketCipher cipher(derive_keys(Bytes(32, 9), "c2s"));
  const Bytes pt(100, 0x42);
  Bytes aad{1, 2, 3, 4};
  Bytes sealed(116);
  cipher.seal(5, aad, pt, sealed);
  Bytes out(116);
  {
    Bytes bad_aad = aad;
    bad_aad[2] ^= 0x10;
    EXPECT_FALSE(cipher.open(5, bad_aad, sealed, out).has_value());
  }
  {
    Bytes bad = sealed;
    bad.back() ^= 0x01;
    EXPECT_FALSE(cipher.open(5, aad, bad, out).has_value());
  }
  EXPECT_FALSE(cipher.open(6, aad, sealed, out).has_value());
  EXPECT_TRUE(cipher.open(5, aad, sealed, out).has_value());
}

TEST(PacketCipher, HeaderMasksDoNotCollide) {
  testkit::Gen g(5);
  PacketCipher cipher(derive_keys(g.bytes(32), "c2s"));
  std::set<Bytes> masks;
  std::set<Bytes> samples;
  for (int i = 0; i < 10000; ++i) {
    const Bytes s = g.bytes(16);
    if (!samples.insert(s).second) continue;
    const auto m = cipher.hp_mask(s);
    EXPECT_EQ(m.size(), 16u);
    EXPECT_EQ(cipher.hp_mask(s), m);
    masks.insert(as_bytes(m));
  }
  EXPECT_EQ(masks.size(), samples.size());
}

TEST(Nonce, XorsPacketNumberIntoTail) {
  Iv iv{};
  for (std::size_t i = 0; i < iv.size(); ++i) iv[i] = static_cast<std::uint8_t>(i);
  const Iv n = make_nonce(iv, 0x0102);
  EXPECT_EQ(n[11], 11 ^ 0x02);
  EXPECT_EQ(n[10], 10 ^ 0x01);
  EXPECT_EQ(n[0], 0);
}

TEST(Truncation, Examples) {
  const auto a = truncate_int(5, 4);
  EXPECT_EQ(a.length, 1u);
  EXPECT_EQ(a.bytes[0], 0x05);
  const auto b = truncate_int(256, 0);
  EXPECT_EQ(b.length, 2u);
  EXPECT_EQ(b.bytes[0], 0x01);
  EXPECT_EQ(b.bytes[1], 0x00);
  EXPECT_EQ(expand_int(0x00, 1, 255), 256u);
  EXPECT_EQ(expand_int(0xff, 1, 0), 255u);
  EXPECT_EQ(testkit::oracle_expand(0x00, 1, 255), 256u);
  EXPECT_EQ(testkit::oracle_expand(0xff, 1, 0), 255u);
}

TEST(Truncation, RangeErrors) {
  try {
    truncate_int(std::uint64_t{1} << 40, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncationRange);
  }
  EXPECT_THROW(truncate_to(1, 5), Error);
}

TEST(Truncation, RoundTripProperty) {
  testkit::Gen g(17);
  for (int i = 0; i < 100000; ++i) {
    const std::uint64_t ref = g.varint_value((1ULL << 62) - (1ULL << 31));
    const std::uint64_t full = ref + g.below(std::uint64_t{1} << (1 + 7 * g.below(5)));
    if (full >= (std::uint64_t{1} << 30) + ref) continue;
    const auto t = truncate_int(full, ref);
    ASSERT_EQ(expand_int(t, ref), full) << full << " ref " << ref;
  }
}

TEST(Truncation, ExpandMatchesOracle) {
  testkit::Gen g(23);
  for (int i = 0; i < 50000; ++i) {
    const std::size_t len = std::size_t{1} << g.below(3);
    const std::size_t l = g.coin(0.25) ? 3 : len;
    const std::uint64_t t = g.below(std::uint64_t{1} << (8 * l));
    const std::uint64_t ref = g.varint_value();
    ASSERT_EQ(expand_int(t, l, ref), testkit::oracle_expand(t, l, ref));
  }
}

}  // namespace
