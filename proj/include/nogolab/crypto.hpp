// crypto.hpp
// Public-key encryption with an unclonable-channel-resistant quantum secret
// key, over abstract witness-encryption and instance-sampler interfaces.
//
// The toy witness encryption here is deliberately INSECURE: the pad is
// derivable from public blob data. Its only role is to make the
// construction's plumbing executable for correctness tests.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nogolab/complexity.hpp"
#include "nogolab/nogo.hpp"

namespace nogolab::crypto {

using qcore::DensityMatrix;
using qcore::PureState;

// Ciphertext blob, version 1, little-endian lengths:
//   u8 version | u32 instance-id length | instance-id bytes
//   | u32 message length | xored-message bytes | u64 nonce
struct Ciphertext {
  std::vector<uint8_t> blob;
};

struct WitnessEncryption {
  std::function<Ciphertext(const std::string& instance_id,
                           const std::vector<uint8_t>& message, RngStream& rng)> enc;
  // message or nullopt (bottom)
  std::function<std::optional<std::vector<uint8_t>>(const std::string& instance_id,
                                                    const Ciphertext& ct,
                                                    const DensityMatrix& witness)> dec;
};

struct KeyPair {
  std::string pk;  // classical instance description
  PureState sk;    // the clonable witness
};

struct NePke {
  complexity::RohcInstance inst;
  KeyPair keys;
};

// INSECURE toy WE: pad = prf(instance-id, nonce), released iff the supplied
// verifier accepts the witness (simulated trusted evaluation).
WitnessEncryption make_toy_witness_encryption(
    std::function<double(const std::string& instance_id, const DensityMatrix& witness)> verify,
    double accept_threshold = 0.5);

// Default YES-instance sampler wraps the hidden-cloner problem generator
// with witness psi_z.
NePke ne_gen(int m, int n, RngStream& rng);

// The instance id used as pk (function table text + z).
std::string instance_id(const complexity::RohcInstance& inst);

// WE bound to a generated scheme's trusted verifier.
WitnessEncryption scheme_witness_encryption(const NePke& scheme);

Ciphertext ne_enc(const WitnessEncryption& we, const std::string& pk,
                  const std::vector<uint8_t>& message, RngStream& rng);

struct DecResult {
  std::optional<std::vector<uint8_t>> message;  // nullopt = bottom
  DensityMatrix refreshed_sk;  // post-measurement key (the disturbed rho~)
};

DecResult ne_dec(const WitnessEncryption& we, const NePke& scheme,
                 const DensityMatrix& sk, const Ciphertext& ct);

// Clone the secret key through the instance's oracle; returns the two
// single-register keys (exact partial traces of the two-register output).
std::pair<DensityMatrix, DensityMatrix> clone_secret_key(const NePke& scheme,
                                                         const PureState& sk);

// Exfiltration game demo: the key is squeezed through a classical channel
// (send/receive), the received key decrypts a challenge ciphertext of one
// of two fixed messages. Reports |W0 - W1|; no hardness claim is made.
double exfiltration_advantage(const NePke& scheme, const WitnessEncryption& we,
                              const nogo::TelegraphProtocol& channel,
                              int trials, RngStream& rng);

}  // namespace nogolab::crypto
