#include "nogolab/scheme.hpp"

#include <sstream>

namespace nogolab::scheme {

void validate(const ClassicalFunction& f) {
  if (f.m < 1 || f.n < 1 || f.n > f.m) throw InconsistentInputs("bad widths");
  if (f.table.size() != (size_t(1) << f.m)) throw InconsistentInputs("table length");
  const uint32_t bound = uint32_t(1) << f.n;
  for (uint32_t v : f.table)
    if (v >= bound) throw InconsistentInputs("table entry out of codomain");
}

PureState bot_state(int m) {
  Vec v = Vec::Zero(aug_dim(m));
  v(bot_index(m)) = 1.0;
  return PureState(std::move(v), "augmented(" + std::to_string(m) + ")");
}

ClassicalFunction sample_random_function(int m, int n, RngStream& rng, bool strict_mode) {
  if (n < 1 || n > m) throw InconsistentInputs("need 1 <= n <= m");
  if (m > m_cap()) throw CapExceeded("m=" + std::to_string(m) + " exceeds cap " + std::to_string(m_cap()));
  if (strict_mode && m < 2 * n) throw InconsistentInputs("strict mode requires m >= 2n");
  ClassicalFunction f;
  f.m = m;
  f.n = n;
  f.table.resize(size_t(1) << m);
  for (auto& v : f.table) v = static_cast<uint32_t>(rng.below(uint64_t(1) << n));
  return f;
}

std::vector<uint32_t> preimages(const ClassicalFunction& f, uint32_t z) {
  std::vector<uint32_t> xs;
  for (uint32_t x = 0; x < f.table.size(); ++x)
    if (f.table[x] == z) xs.push_back(x);
  return xs;
}

std::set<uint32_t> image_labels(const ClassicalFunction& f) {
  return std::set<uint32_t>(f.table.begin(), f.table.end());
}

PureState preimage_state(const ClassicalFunction& f, uint32_t z) {
  auto xs = preimages(f, z);
  if (xs.empty()) throw NoPreimage("label has no preimage");
  Vec v = Vec::Zero(aug_dim(f.m));
  const double a = 1.0 / std::sqrt(double(xs.size()));
  for (uint32_t x : xs) v(x) = a;
  return PureState(std::move(v), "augmented(" + std::to_string(f.m) + ")");
}

OperatorMatrix xor_oracle(const ClassicalFunction& f) {
  validate(f);
  const Eigen::Index d = Eigen::Index(1) << (f.m + f.n);
  Mat u = Mat::Zero(d, d);
  const uint32_t ymask = (uint32_t(1) << f.n) - 1;
  for (Eigen::Index idx = 0; idx < d; ++idx) {
    const uint32_t x = static_cast<uint32_t>(idx >> f.n);
    const uint32_t y = static_cast<uint32_t>(idx) & ymask;
    const Eigen::Index out = (Eigen::Index(x) << f.n) | (y ^ f.table[x]);
    u(out, idx) = 1.0;
  }
  OperatorMatrix op;
  op.mat = std::move(u);
  op.kind = qcore::OpKind::unitary;
  return op;
}

OperatorMatrix cloning_oracle_for_set(const std::vector<PureState>& states, int m) {
  const Eigen::Index d = aug_dim(m);
  const Eigen::Index bot = bot_index(m);
  const double tol = default_tol();
  for (size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != d) throw DimensionMismatch("state dim vs augmented(m)");
    if (std::abs(states[i].amp(bot)) > tol)
      throw NotOrthonormal("set state overlaps the bottom symbol");
    if (std::abs(states[i].amp.norm() - 1.0) > tol) throw NotOrthonormal("not normalized");
    for (size_t j = i + 1; j < states.size(); ++j)
      if (std::abs(states[i].amp.dot(states[j].amp)) > tol)
        throw NotOrthonormal("set states not orthogonal");
  }

  Mat c = Mat::Identity(d * d, d * d);
  // Each term is rank-limited with support on supp(psi) u {bot}; touch only
  // those entries instead of materializing a d^2 x d^2 kron per state.
  for (const auto& s : states) {
    std::vector<Eigen::Index> supp;
    for (Eigen::Index i = 0; i < d; ++i)
      if (std::abs(s.amp(i)) > 0) supp.push_back(i);
    std::vector<Eigen::Index> supp_bot = supp;
    supp_bot.push_back(bot);
    auto kval = [&](Eigen::Index r, Eigen::Index cidx) -> cx {
      // K = psi<bot| + bot<psi| - bot<bot| - psi<psi|
      cx v = 0.0;
      if (cidx == bot) v += s.amp(r);
      if (r == bot) v += std::conj(s.amp(cidx));
      if (r == bot && cidx == bot) v -= 1.0;
      v -= s.amp(r) * std::conj(s.amp(cidx));
      return v;
    };
    for (Eigen::Index a : supp)
      for (Eigen::Index b : supp_bot)
        for (Eigen::Index e : supp)
          for (Eigen::Index g : supp_bot) {
            cx outer = s.amp(a) * std::conj(s.amp(e));
            c(a * d + b, e * d + g) += outer * kval(b, g);
          }
  }
  OperatorMatrix op;
  op.mat = std::move(c);
  op.kind = qcore::OpKind::general;  // unitarity asserted by tests, not ctor (size)
  return op;
}

OperatorMatrix full_cloning_oracle(const ClassicalFunction& f) {
  validate(f);
  if (f.m > m_cap()) throw CapExceeded();
  std::vector<PureState> set;
  for (uint32_t z : image_labels(f)) set.push_back(preimage_state(f, z));
  return cloning_oracle_for_set(set, f.m);
}

OperatorMatrix z_cloning_oracle(const ClassicalFunction& f, uint32_t z) {
  return cloning_oracle_for_set({preimage_state(f, z)}, f.m);
}

SchemeInstance make_scheme(const ClassicalFunction& h) {
  SchemeInstance inst;
  inst.h = h;
  inst.xor_oracle = xor_oracle(h);
  inst.clone_oracle = full_cloning_oracle(h);
  inst.labels_in_image = image_labels(h);
  return inst;
}

uint32_t sample_label(const ClassicalFunction& h, RngStream& rng) {
  return h.table[rng.below(h.table.size())];
}

std::vector<double> sample_label_distribution(const ClassicalFunction& h) {
  std::vector<double> p(size_t(1) << h.n, 0.0);
  for (uint32_t v : h.table) p[v] += 1.0 / double(h.table.size());
  return p;
}

double verify(const PureState& state, uint32_t z, const ClassicalFunction& f) {
  return qcore::pure_fidelity(state, preimage_state(f, z));
}

double verify(const qcore::DensityMatrix& state, uint32_t z, const ClassicalFunction& f) {
  return qcore::fidelity(state, preimage_state(f, z));
}

namespace {
std::string bits(uint32_t v, int width) {
  std::string s(width, '0');
  for (int i = 0; i < width; ++i)
    if (v & (uint32_t(1) << (width - 1 - i))) s[i] = '1';
  return s;
}
}  // namespace

std::string to_text(const ClassicalFunction& f) {
  std::ostringstream os;
  for (uint32_t x = 0; x < f.table.size(); ++x)
    os << bits(x, f.m) << " " << bits(f.table[x], f.n) << "\n";
  return os.str();
}

ClassicalFunction from_text(const std::string& text) {
  std::istringstream is(text);
  std::string xs, ys;
  std::vector<std::pair<std::string, std::string>> rows;
  while (is >> xs >> ys) rows.emplace_back(xs, ys);
  if (rows.empty()) throw InconsistentInputs("empty fixture");
  ClassicalFunction f;
  f.m = static_cast<int>(rows[0].first.size());
  f.n = static_cast<int>(rows[0].second.size());
  f.table.assign(size_t(1) << f.m, 0);
  if (rows.size() != f.table.size()) throw InconsistentInputs("fixture row count");
  for (auto& [xbits, ybits] : rows) {
    uint32_t x = 0, y = 0;
    for (char c : xbits) x = (x << 1) | uint32_t(c == '1');
    for (char c : ybits) y = (y << 1) | uint32_t(c == '1');
    f.table[x] = y;
  }
  validate(f);
  return f;
}

}  // namespace nogolab::scheme
