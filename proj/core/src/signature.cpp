#include "ciota/signature.hpp"

#include "ciota/errors.hpp"

#include <sodium.h>

#include <stdexcept>

namespace ciota {

namespace {

Digest keyed_digest(std::span<const std::uint8_t> key,
                    std::span<const std::uint8_t> message) {
  Sha256 inner;
  inner.update(key);
  inner.update(message);
  const Digest inner_digest = inner.finish();
  Sha256 outer;
  outer.update(key);
  outer.update(inner_digest);
  return outer.finish();
}

} // namespace

KeyPair KeyedHashSigner::keypair_from_seed(
    std::span<const std::uint8_t> seed) const {
  const Digest secret = sha256(seed);
  Bytes key(secret.begin(), secret.end());
  return KeyPair{key, key};
}

Bytes KeyedHashSigner::sign(const Bytes& secret,
                            std::span<const std::uint8_t> message) const {
  const Digest mac = keyed_digest(secret, message);
  return Bytes(mac.begin(), mac.end());
}

bool KeyedHashSigner::verify(const Bytes& public_key,
                             std::span<const std::uint8_t> message,
                             const Bytes& signature) const {
  const Digest mac = keyed_digest(public_key, message);
  return signature.size() == mac.size() &&
         sodium_memcmp(signature.data(), mac.data(), mac.size()) == 0;
}

Ed25519Signer::Ed25519Signer() {
  if (sodium_init() < 0) {
    throw std::runtime_error("libsodium initialization failed");
  }
}

KeyPair Ed25519Signer::keypair_from_seed(
    std::span<const std::uint8_t> seed) const {
  if (seed.size() != crypto_sign_SEEDBYTES) {
    throw std::invalid_argument("ed25519 seed must be 32 bytes");
  }
  KeyPair kp;
  kp.secret.resize(crypto_sign_SECRETKEYBYTES);
  kp.public_key.resize(crypto_sign_PUBLICKEYBYTES);
  crypto_sign_seed_keypair(kp.public_key.data(), kp.secret.data(), seed.data());
  return kp;
}

Bytes Ed25519Signer::sign(const Bytes& secret,
                          std::span<const std::uint8_t> message) const {
  Bytes sig(crypto_sign_BYTES);
  if (crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                           secret.data()) != 0) {
    throw std::runtime_error("ed25519 signing failed");
  }
  return sig;
}

bool Ed25519Signer::verify(const Bytes& public_key,
                           std::span<const std::uint8_t> message,
                           const Bytes& signature) const {
  if (signature.size() != crypto_sign_BYTES ||
      public_key.size() != crypto_sign_PUBLICKEYBYTES) {
    return false;
  }
  return crypto_sign_verify_detached(signature.data(), message.data(),
                                     message.size(), public_key.data()) == 0;
}

std::shared_ptr<const SignatureProvider> make_signer(const std::string& scheme) {
  if (scheme == "keyed-sha256") return std::make_shared<KeyedHashSigner>();
  if (scheme == "ed25519") return std::make_shared<Ed25519Signer>();
  throw ConfigError("unknown signature scheme: " + scheme);
}

Bytes seed_from_label(const std::string& label) {
  const Digest d = sha256(std::span(
      reinterpret_cast<const std::uint8_t*>(label.data()), label.size()));
  return Bytes(d.begin(), d.end());
}

} // namespace ciota
