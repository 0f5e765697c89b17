/*
 * crypto.cpp
 *
 * This source file is part of the MOI payment protocol project
 *
 * Copyright 2026 The MOI project authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "moi/crypto.hpp"

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/crypto.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/obj_mac.h>
#include <openssl/param_build.h>
#include <openssl/rand.h>

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>

#include "moi/base85.hpp"

namespace moi {

namespace {

struct BnDeleter {
  void operator()(BIGNUM* p) const { BN_clear_free(p); }
};
struct BnCtxDeleter {
  void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct PointDeleter {
  void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct PkeyCtxDeleter {
  void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};
struct SigDeleter {
  void operator()(ECDSA_SIG* p) const { ECDSA_SIG_free(p); }
};
struct ParamBldDeleter {
  void operator()(OSSL_PARAM_BLD* p) const { OSSL_PARAM_BLD_free(p); }
};
struct ParamDeleter {
  void operator()(OSSL_PARAM* p) const { OSSL_PARAM_free(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxDeleter>;
using PointPtr = std::unique_ptr<EC_POINT, PointDeleter>;

[[noreturn]] void openssl_failure(const char* what) {
  throw std::runtime_error(std::string("openssl: ") + what);
}

BnPtr new_bn() {
  BnPtr bn(BN_new());
  if (!bn) openssl_failure("BN_new");
  return bn;
}

BnPtr bn_from(ByteView bytes) {
  BnPtr bn(BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), nullptr));
  if (!bn) openssl_failure("BN_bin2bn");
  return bn;
}

template <std::size_t N>
void bn_to(const BIGNUM* bn, std::uint8_t* out) {
  if (BN_bn2binpad(bn, out, static_cast<int>(N)) != static_cast<int>(N)) {
    openssl_failure("BN_bn2binpad");
  }
}

struct Curve {
  EC_GROUP* group = nullptr;
  const BIGNUM* order = nullptr;

  Curve() {
    group = EC_GROUP_new_by_curve_name(NID_secp521r1);
    if (!group) openssl_failure("P-521 unavailable");
    order = EC_GROUP_get0_order(group);
  }
  ~Curve() { EC_GROUP_free(group); }
  Curve(const Curve&) = delete;
  Curve& operator=(const Curve&) = delete;
};

const Curve& curve() {
  static const Curve instance;
  return instance;
}

/// Nonzero and below the group order.
bool in_scalar_range(const BIGNUM* v) {
  return !BN_is_zero(v) && !BN_is_negative(v) && BN_cmp(v, curve().order) < 0;
}

ByteArray<32> hmac_sha256(ByteView key, ByteView data) {
  ByteArray<32> out{};
  unsigned int len = 0;
  if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(),
            out.data(), &len) ||
      len != out.size()) {
    openssl_failure("HMAC");
  }
  return out;
}

/// HMAC_DRBG state of the deterministic nonce construction, specialised to
/// HMAC-SHA256 and the 521-bit group order.
class NonceGenerator {
 public:
  NonceGenerator(ByteView private_octets, ByteView hash_octets) {
    k_.fill(0x00);
    v_.fill(0x01);
    reseed(0x00, private_octets, hash_octets);
    reseed(0x01, private_octets, hash_octets);
  }

  BnPtr next() {
    for (;;) {
      if (!first_) {
        Bytes data(v_.begin(), v_.end());
        data.push_back(0x00);
        k_ = hmac_sha256(view(k_), data);
        v_ = hmac_sha256(view(k_), view(v_));
      }
      first_ = false;
      Bytes t;
      while (t.size() * 8 < kOrderBits) {
        v_ = hmac_sha256(view(k_), view(v_));
        t.insert(t.end(), v_.begin(), v_.end());
      }
      BnPtr k = bn_from(t);
      if (!BN_rshift(k.get(), k.get(), static_cast<int>(t.size() * 8 - kOrderBits))) {
        openssl_failure("BN_rshift");
      }
      if (in_scalar_range(k.get())) return k;
    }
  }

 private:
  static constexpr std::size_t kOrderBits = 521;

  void reseed(std::uint8_t marker, ByteView private_octets, ByteView hash_octets) {
    Bytes data(v_.begin(), v_.end());
    data.push_back(marker);
    data.insert(data.end(), private_octets.begin(), private_octets.end());
    data.insert(data.end(), hash_octets.begin(), hash_octets.end());
    k_ = hmac_sha256(view(k_), data);
    v_ = hmac_sha256(view(k_), view(v_));
  }

  ByteArray<32> k_{};
  ByteArray<32> v_{};
  bool first_ = true;
};

std::unique_ptr<EVP_PKEY, PkeyDeleter> load_public_key(const PublicKey& key) {
  Bytes octets;
  octets.reserve(1 + kPublicKeySize);
  octets.push_back(0x04);
  octets.insert(octets.end(), key.bytes.begin(), key.bytes.end());

  std::unique_ptr<OSSL_PARAM_BLD, ParamBldDeleter> bld(OSSL_PARAM_BLD_new());
  if (!bld ||
      !OSSL_PARAM_BLD_push_utf8_string(bld.get(), OSSL_PKEY_PARAM_GROUP_NAME, "P-521", 0) ||
      !OSSL_PARAM_BLD_push_octet_string(bld.get(), OSSL_PKEY_PARAM_PUB_KEY, octets.data(),
                                        octets.size())) {
    return nullptr;
  }
  std::unique_ptr<OSSL_PARAM, ParamDeleter> params(OSSL_PARAM_BLD_to_param(bld.get()));
  std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter> ctx(
      EVP_PKEY_CTX_new_from_name(nullptr, "EC", nullptr));
  if (!params || !ctx || EVP_PKEY_fromdata_init(ctx.get()) <= 0) return nullptr;
  EVP_PKEY* raw = nullptr;
  if (EVP_PKEY_fromdata(ctx.get(), &raw, EVP_PKEY_PUBLIC_KEY, params.get()) <= 0) {
    return nullptr;
  }
  return std::unique_ptr<EVP_PKEY, PkeyDeleter>(raw);
}

PointPtr point_from(const PublicKey& key, BN_CTX* ctx) {
  const auto& c = curve();
  BnPtr x = bn_from(ByteView(key.bytes.data(), kScalarSize));
  BnPtr y = bn_from(ByteView(key.bytes.data() + kScalarSize, kScalarSize));
  PointPtr point(EC_POINT_new(c.group));
  if (!point) openssl_failure("EC_POINT_new");
  if (!EC_POINT_set_affine_coordinates(c.group, point.get(), x.get(), y.get(), ctx) ||
      EC_POINT_is_on_curve(c.group, point.get(), ctx) != 1) {
    return nullptr;
  }
  return point;
}

// Url-safe base64 rendering of the v0.1 authority key: x on the first line,
// y on the second.
constexpr std::string_view kAuthorityKeyX =
    "AdyT8Joo3rMTbJGQbaFktux03sB3tltuCniyHbE6kENqPkuWuJTlGowGYsvTEtHBss-TnF_bzeuKBak4_yIxjCG3";
constexpr std::string_view kAuthorityKeyY =
    "AdxLCS5S2zbhSdGtec2j19JQxNsJHotPMhj400NICnI_nE9seomR5a_E1Xu9YurwdOPf9FOPECvSVELbjNJ1oBnp";
constexpr std::uint64_t kAuthorityId = 0x42DB8CD275A019E9ull;

ByteArray<kScalarSize> decode_coordinate(std::string_view urlsafe) {
  std::string standard(urlsafe);
  std::replace(standard.begin(), standard.end(), '-', '+');
  std::replace(standard.begin(), standard.end(), '_', '/');
  ByteArray<kScalarSize> out{};
  // 88 characters without padding decode to exactly 66 bytes.
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(standard.data()),
                                static_cast<int>(standard.size()));
  if (n != static_cast<int>(kScalarSize)) openssl_failure("authority key constant");
  return out;
}

}  // namespace

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw std::runtime_error("randomness source failure");
  }
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  for (auto& byte : out) {
    if (used_ == block_.size()) {
      ByteArray<16> input{};
      for (int i = 0; i < 8; ++i) {
        input[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(seed_ >> (56 - 8 * i));
        input[static_cast<std::size_t>(8 + i)] =
            static_cast<std::uint8_t>(counter_ >> (56 - 8 * i));
      }
      ++counter_;
      block_ = sha256(view(input)).bytes;
      used_ = 0;
    }
    byte = block_[used_++];
  }
}

PrivateKey::~PrivateKey() { OPENSSL_cleanse(scalar.data(), scalar.size()); }

AccountId KeyPair::id() const { return derive_account_id(public_key); }

PublicKey derive_public_key(const PrivateKey& secret) {
  const auto& c = curve();
  BnPtr d = bn_from(view(secret.scalar));
  if (!in_scalar_range(d.get())) throw std::invalid_argument("private scalar out of range");
  BnCtxPtr ctx(BN_CTX_new());
  PointPtr point(EC_POINT_new(c.group));
  BnPtr x = new_bn();
  BnPtr y = new_bn();
  if (!ctx || !point ||
      !EC_POINT_mul(c.group, point.get(), d.get(), nullptr, nullptr, ctx.get()) ||
      !EC_POINT_get_affine_coordinates(c.group, point.get(), x.get(), y.get(), ctx.get())) {
    openssl_failure("public key derivation");
  }
  PublicKey key;
  bn_to<kScalarSize>(x.get(), key.bytes.data());
  bn_to<kScalarSize>(y.get(), key.bytes.data() + kScalarSize);
  return key;
}

KeyPair generate_keypair(RandomSource& rng) {
  KeyPair pair;
  for (;;) {
    rng.fill(pair.secret.scalar);
    pair.secret.scalar[0] &= 0x01;  // 521 bits
    BnPtr d = bn_from(view(pair.secret.scalar));
    if (in_scalar_range(d.get())) break;
  }
  pair.public_key = derive_public_key(pair.secret);
  return pair;
}

bool is_valid_public_key(const PublicKey& key) {
  BnCtxPtr ctx(BN_CTX_new());
  if (!ctx) return false;
  return point_from(key, ctx.get()) != nullptr;
}

AccountId derive_account_id(const PublicKey& key) {
  AccountId id;
  std::copy(key.bytes.end() - kAccountIdSize, key.bytes.end(), id.bytes.begin());
  return id;
}

Digest sha256(ByteView data) {
  Digest d;
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(), nullptr) ||
      len != kDigestSize) {
    openssl_failure("SHA-256");
  }
  return d;
}

Signature sign(const PrivateKey& secret, ByteView payload) {
  const auto& c = curve();
  BnPtr d = bn_from(view(secret.scalar));
  if (!in_scalar_range(d.get())) throw std::invalid_argument("private scalar out of range");

  // A 256-bit hash is shorter than the 521-bit order: it is used as is.
  const Digest hash = sha256(payload);
  BnPtr e = bn_from(view(hash.bytes));
  ByteArray<kScalarSize> hash_octets{};
  bn_to<kScalarSize>(e.get(), hash_octets.data());

  BnCtxPtr ctx(BN_CTX_new());
  PointPtr point(EC_POINT_new(c.group));
  BnPtr x = new_bn();
  BnPtr r = new_bn();
  BnPtr s = new_bn();
  BnPtr k_inv = new_bn();
  BnPtr tmp = new_bn();
  if (!ctx || !point) openssl_failure("allocation");

  NonceGenerator nonces(view(secret.scalar), view(hash_octets));
  for (;;) {
    BnPtr k = nonces.next();
    if (!EC_POINT_mul(c.group, point.get(), k.get(), nullptr, nullptr, ctx.get()) ||
        !EC_POINT_get_affine_coordinates(c.group, point.get(), x.get(), nullptr, ctx.get()) ||
        !BN_nnmod(r.get(), x.get(), c.order, ctx.get())) {
      openssl_failure("nonce point");
    }
    if (BN_is_zero(r.get())) continue;
    // s = k^-1 (e + r d) mod n
    if (!BN_mod_mul(tmp.get(), r.get(), d.get(), c.order, ctx.get()) ||
        !BN_mod_add(tmp.get(), tmp.get(), e.get(), c.order, ctx.get()) ||
        !BN_mod_inverse(k_inv.get(), k.get(), c.order, ctx.get()) ||
        !BN_mod_mul(s.get(), k_inv.get(), tmp.get(), c.order, ctx.get())) {
      openssl_failure("signature arithmetic");
    }
    if (BN_is_zero(s.get())) continue;
    break;
  }

  Signature sig;
  bn_to<kScalarSize>(r.get(), sig.bytes.data());
  bn_to<kScalarSize>(s.get(), sig.bytes.data() + kScalarSize);
  return sig;
}

bool verify(const PublicKey& key, ByteView payload, const Signature& signature) {
  BnPtr r = bn_from(ByteView(signature.bytes.data(), kScalarSize));
  BnPtr s = bn_from(ByteView(signature.bytes.data() + kScalarSize, kScalarSize));
  if (!in_scalar_range(r.get()) || !in_scalar_range(s.get())) return false;

  auto pkey = load_public_key(key);
  if (!pkey) return false;

  std::unique_ptr<ECDSA_SIG, SigDeleter> sig(ECDSA_SIG_new());
  if (!sig || !ECDSA_SIG_set0(sig.get(), r.get(), s.get())) return false;
  r.release();
  s.release();
  unsigned char* der = nullptr;
  const int der_len = i2d_ECDSA_SIG(sig.get(), &der);
  if (der_len <= 0) return false;
  struct DerFree {
    void operator()(unsigned char* p) const { OPENSSL_free(p); }
  };
  std::unique_ptr<unsigned char, DerFree> der_owner(der);

  const Digest hash = sha256(payload);
  std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter> ctx(EVP_PKEY_CTX_new(pkey.get(), nullptr));
  if (!ctx || EVP_PKEY_verify_init(ctx.get()) <= 0) return false;
  return EVP_PKEY_verify(ctx.get(), der, static_cast<std::size_t>(der_len), hash.bytes.data(),
                         hash.bytes.size()) == 1;
}

void sign_transaction(Transaction& tx, const PrivateKey& secret) {
  tx.signature = sign(secret, signed_payload(tx));
}

bool verify_transaction(const Transaction& tx, const PublicKey& sender_key) {
  Bytes payload;
  try {
    payload = signed_payload(tx);
  } catch (const CodecError&) {
    return false;
  }
  return verify(sender_key, payload, tx.signature);
}

void sign_certificate(Certificate& cert, const PrivateKey& authority_secret) {
  cert.ma_signature = sign(authority_secret, certificate_payload(cert));
}

bool verify_certificate(const Certificate& cert, const PublicKey& authority_key) {
  Bytes payload;
  try {
    payload = certificate_payload(cert);
  } catch (const CodecError&) {
    return false;
  }
  return verify(authority_key, payload, cert.ma_signature);
}

std::optional<KeyPair> vanity_search(const IdPredicate& predicate, std::size_t max_iterations,
                                     RandomSource& rng, std::size_t* iterations_used) {
  for (std::size_t i = 1; i <= max_iterations; ++i) {
    KeyPair pair = generate_keypair(rng);
    if (predicate(account_id_to_text(pair.id()))) {
      if (iterations_used) *iterations_used = i;
      return pair;
    }
  }
  if (iterations_used) *iterations_used = max_iterations;
  return std::nullopt;
}

bool is_alphanumeric_id(std::string_view base85_id) {
  return std::all_of(base85_id.begin(), base85_id.end(), [](char ch) {
    return (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z');
  });
}

const MasterAuthority& master_authority_v01() {
  static const MasterAuthority authority = [] {
    MasterAuthority ma;
    const auto x = decode_coordinate(kAuthorityKeyX);
    const auto y = decode_coordinate(kAuthorityKeyY);
    std::copy(x.begin(), x.end(), ma.public_key.bytes.begin());
    std::copy(y.begin(), y.end(), ma.public_key.bytes.begin() + kScalarSize);
    ma.id = derive_account_id(ma.public_key);
    if (ma.id != AccountId::from_u64(kAuthorityId)) openssl_failure("authority id mismatch");
    return ma;
  }();
  return authority;
}

std::optional<MasterAuthority> master_authority_for(ProtocolVersion version) {
  if (version == kVersion01) return master_authority_v01();
  return std::nullopt;
}

}  // namespace moi
