#pragma once

#include "ciota/digest.hpp"

#include <map>
#include <memory>
#include <span>
#include <string>

namespace ciota {

using AgentId = std::string;

struct KeyPair {
  Bytes secret;
  Bytes public_key;
};

/// Public keys of every agent allowed to contribute records.
using Keyring = std::map<AgentId, Bytes>;

/// Signing backend used for records. Implementations must be safe for
/// concurrent verify() calls.
class SignatureProvider {
public:
  virtual ~SignatureProvider() = default;

  virtual std::string scheme() const = 0;

  /// Deterministically derive a key pair from a 32-byte seed.
  virtual KeyPair keypair_from_seed(std::span<const std::uint8_t> seed) const = 0;

  virtual Bytes sign(const Bytes& secret,
                     std::span<const std::uint8_t> message) const = 0;

  virtual bool verify(const Bytes& public_key,
                      std::span<const std::uint8_t> message,
                      const Bytes& signature) const = 0;
};

/// Deterministic keyed-hash signer for simulations and test vectors.
/// The "signature" is a nested SHA-256 MAC and the public key equals the
/// secret, i.e. this is a shared-secret scheme with no asymmetry. Never use
/// outside of simulation.
class KeyedHashSigner final : public SignatureProvider {
public:
  std::string scheme() const override { return "keyed-sha256"; }
  KeyPair keypair_from_seed(std::span<const std::uint8_t> seed) const override;
  Bytes sign(const Bytes& secret,
             std::span<const std::uint8_t> message) const override;
  bool verify(const Bytes& public_key, std::span<const std::uint8_t> message,
              const Bytes& signature) const override;
};

/// Ed25519 signatures (libsodium) for realistic runs.
class Ed25519Signer final : public SignatureProvider {
public:
  Ed25519Signer();
  std::string scheme() const override { return "ed25519"; }
  KeyPair keypair_from_seed(std::span<const std::uint8_t> seed) const override;
  Bytes sign(const Bytes& secret,
             std::span<const std::uint8_t> message) const override;
  bool verify(const Bytes& public_key, std::span<const std::uint8_t> message,
              const Bytes& signature) const override;
};

std::shared_ptr<const SignatureProvider> make_signer(const std::string& scheme);

/// 32-byte seed derived from a human-readable label, for reproducible keys
/// in simulations and tests.
Bytes seed_from_label(const std::string& label);

} // namespace ciota
