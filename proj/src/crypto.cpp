#include "nogolab/crypto.hpp"

#include <cstring>

namespace nogolab::crypto {

namespace {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// INSECURE: anyone holding the blob can recompute this pad.
std::vector<uint8_t> pad_bytes(const std::string& instance, uint64_t nonce, size_t len) {
  RngStream prf(fnv1a(instance) ^ nonce);
  std::vector<uint8_t> pad(len);
  for (auto& b : pad) b = uint8_t(prf.next_u64() & 0xff);
  return pad;
}

void put_u32(std::vector<uint8_t>& v, uint32_t x) {
  for (int i = 0; i < 4; ++i) v.push_back(uint8_t((x >> (8 * i)) & 0xff));
}
void put_u64(std::vector<uint8_t>& v, uint64_t x) {
  for (int i = 0; i < 8; ++i) v.push_back(uint8_t((x >> (8 * i)) & 0xff));
}
uint32_t get_u32(const std::vector<uint8_t>& v, size_t at) {
  uint32_t x = 0;
  for (int i = 0; i < 4; ++i) x |= uint32_t(v.at(at + i)) << (8 * i);
  return x;
}
uint64_t get_u64(const std::vector<uint8_t>& v, size_t at) {
  uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= uint64_t(v.at(at + i)) << (8 * i);
  return x;
}

struct ParsedBlob {
  std::string instance;
  std::vector<uint8_t> xored;
  uint64_t nonce = 0;
};

ParsedBlob parse_blob(const Ciphertext& ct) {
  const auto& b = ct.blob;
  if (b.empty() || b[0] != 1) throw InconsistentInputs("unknown ciphertext version");
  size_t at = 1;
  uint32_t ilen = get_u32(b, at);
  at += 4;
  ParsedBlob out;
  out.instance.assign(b.begin() + at, b.begin() + at + ilen);
  at += ilen;
  uint32_t mlen = get_u32(b, at);
  at += 4;
  out.xored.assign(b.begin() + at, b.begin() + at + mlen);
  at += mlen;
  out.nonce = get_u64(b, at);
  return out;
}

Mat partial_trace_first(const Mat& rho, Eigen::Index d) {
  // trace out the first register of a d*d two-register state
  Mat out = Mat::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    out += rho.block(a * d, a * d, d, d);
  return out;
}

Mat partial_trace_second(const Mat& rho, Eigen::Index d) {
  Mat out = Mat::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index y = 0; y < d; ++y)
        out(a, b) += rho(a * d + y, b * d + y);
  return out;
}

}  // namespace

WitnessEncryption make_toy_witness_encryption(
    std::function<double(const std::string&, const DensityMatrix&)> verify,
    double accept_threshold) {
  WitnessEncryption we;
  we.enc = [](const std::string& instance, const std::vector<uint8_t>& message,
              RngStream& rng) -> Ciphertext {
    if (message.empty()) throw InconsistentInputs("zero-length message");
    const uint64_t nonce = rng.next_u64();
    auto pad = pad_bytes(instance, nonce, message.size());
    Ciphertext ct;
    ct.blob.push_back(1);  // version
    put_u32(ct.blob, uint32_t(instance.size()));
    ct.blob.insert(ct.blob.end(), instance.begin(), instance.end());
    put_u32(ct.blob, uint32_t(message.size()));
    for (size_t i = 0; i < message.size(); ++i) ct.blob.push_back(message[i] ^ pad[i]);
    put_u64(ct.blob, nonce);
    return ct;
  };
  we.dec = [verify, accept_threshold](const std::string& instance, const Ciphertext& ct,
                                      const DensityMatrix& witness)
      -> std::optional<std::vector<uint8_t>> {
    ParsedBlob pb = parse_blob(ct);
    if (pb.instance != instance) return std::nullopt;
    // simulated trusted evaluation: pad released only on acceptance
    if (verify(instance, witness) < accept_threshold) return std::nullopt;
    auto pad = pad_bytes(pb.instance, pb.nonce, pb.xored.size());
    std::vector<uint8_t> msg(pb.xored.size());
    for (size_t i = 0; i < msg.size(); ++i) msg[i] = pb.xored[i] ^ pad[i];
    return msg;
  };
  return we;
}

std::string instance_id(const complexity::RohcInstance& inst) {
  std::string id = scheme::to_text(inst.h);
  id += "z=" + std::to_string(inst.z ? *inst.z : ~0u);
  return id;
}

NePke ne_gen(int m, int n, RngStream& rng) {
  NePke s;
  s.inst = complexity::generate_rohc(m, n, complexity::Truth::YES, rng);
  if (!s.inst.z) throw SamplerFailure();
  s.keys.pk = instance_id(s.inst);
  s.keys.sk = scheme::preimage_state(s.inst.h, *s.inst.z);
  return s;
}

WitnessEncryption scheme_witness_encryption(const NePke& scheme) {
  auto inst = scheme.inst;
  auto expected_id = instance_id(inst);
  return make_toy_witness_encryption(
      [inst, expected_id](const std::string& id, const DensityMatrix& witness) -> double {
        if (id != expected_id) return 0.0;
        // acceptance probability of the instance's verifier on the witness
        Mat m = complexity::acceptance_operator(inst);
        return (m * witness.rho).trace().real();
      });
}

Ciphertext ne_enc(const WitnessEncryption& we, const std::string& pk,
                  const std::vector<uint8_t>& message, RngStream& rng) {
  return we.enc(pk, message, rng);  // pure delegation
}

DecResult ne_dec(const WitnessEncryption& we, const NePke& scheme,
                 const DensityMatrix& sk, const Ciphertext& ct) {
  // combined verifier-cloner step: measure the verifier projector, keep the
  // exact post-measurement mixture as the refreshed key
  Mat p = complexity::acceptance_operator(scheme.inst);
  const Eigen::Index d = p.rows();
  if (sk.dim() != d) throw DimensionMismatch("sk space");
  Mat q = Mat::Identity(d, d) - p;
  DecResult out;
  out.refreshed_sk.rho = p * sk.rho * p + q * sk.rho * q;
  out.refreshed_sk.dim_tag = sk.dim_tag;
  out.message = we.dec(scheme.keys.pk, ct, sk);
  return out;
}

std::pair<DensityMatrix, DensityMatrix> clone_secret_key(const NePke& scheme,
                                                         const PureState& sk) {
  DensityMatrix two = complexity::rohc_clone(scheme.inst, sk);
  const Eigen::Index d = sk.dim();
  DensityMatrix first, second;
  first.rho = partial_trace_second(two.rho, d);
  first.dim_tag = sk.dim_tag;
  second.rho = partial_trace_first(two.rho, d);
  second.dim_tag = sk.dim_tag;
  return {first, second};
}

double exfiltration_advantage(const NePke& scheme, const WitnessEncryption& we,
                              const nogo::TelegraphProtocol& channel,
                              int trials, RngStream& rng) {
  const std::vector<uint8_t> m0 = {0x00, 0x11, 0x22, 0x33};
  const std::vector<uint8_t> m1 = {0xff, 0xee, 0xdd, 0xcc};
  // W_b = Pr[adversary outputs 1 | challenge encrypts m_b]
  int ones[2] = {0, 0};
  int counts[2] = {0, 0};
  for (int t = 0; t < trials; ++t) {
    RngStream trial = rng.child(uint64_t(t));
    const int b = int(trial.below(2));
    Ciphertext ct = ne_enc(we, scheme.keys.pk, b ? m1 : m0, trial);
    // the key is squeezed through the classical channel
    std::string msg = channel.send(scheme.keys.sk, trial);
    DensityMatrix leaked = channel.receive(msg);
    auto got = we.dec(scheme.keys.pk, ct, leaked);
    int guess;
    if (got && *got == m1) guess = 1;
    else if (got && *got == m0) guess = 0;
    else guess = int(trial.below(2));
    ++counts[b];
    if (guess == 1) ++ones[b];
  }
  const double w0 = counts[0] ? double(ones[0]) / counts[0] : 0.0;
  const double w1 = counts[1] ? double(ones[1]) / counts[1] : 0.0;
  return std::abs(w0 - w1);
}

}  // namespace nogolab::crypto
