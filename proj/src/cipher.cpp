#include "henchman/cipher.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace henchman::cipher {

std::uint64_t index_count(double v) {
  if (v < 0.0) throw std::invalid_argument("index_count: negative exponent");
  if (v > 40.0) throw guard_error("index_count: 2^" + std::to_string(v) + " is out of range");
  // Tolerate double rounding in n*R without disturbing genuine ceilings.
  return static_cast<std::uint64_t>(std::ceil(std::exp2(v) - 1e-9));
}

Codebook build_codebook(std::uint64_t seed, int n, double R, double R0,
                        const Distribution& generator, std::uint64_t max_symbols) {
  if (n < 1) throw std::invalid_argument("build_codebook: n must be >= 1");
  if (R < 0.0 || R0 < 0.0) throw std::invalid_argument("build_codebook: rates must be >= 0");
  Codebook cb{n, R, R0, seed, generator, 0, 0, {}};
  const std::uint64_t m = index_count(n * R);
  const std::uint64_t k = index_count(n * R0);
  const std::uint64_t symbols = m * k * static_cast<std::uint64_t>(n);
  if (symbols > max_symbols) {
    throw guard_error("build_codebook: " + std::to_string(symbols) +
                      " symbols exceed the memory budget of " + std::to_string(max_symbols));
  }
  cb.M = static_cast<int>(m);
  cb.K = static_cast<int>(k);
  cb.entries.reserve(m * k);
  Rng rng(seed, "codebook");
  for (std::uint64_t i = 0; i < m * k; ++i) {
    cb.entries.push_back(Sequence::iid(n, generator, rng));
  }
  return cb;
}

namespace {

double likelihood(const CipherCode& code, const Sequence& x, const Sequence& y) {
  double w = 1.0;
  for (int i = 0; i < x.length(); ++i) {
    w *= code.x_given_y->at(y[i], x[i]);
    if (w == 0.0) return 0.0;
  }
  return w;
}

}  // namespace

EncodeResult likelihood_encode(const CipherCode& code, const Sequence& x, int k, Rng& rng) {
  const Codebook& cb = code.codebook;
  if (k < 0 || k >= cb.K) throw std::invalid_argument("likelihood_encode: key index out of range");
  if (code.lossless()) {
    std::vector<int> matches;
    for (int m = 0; m < cb.M; ++m) {
      if (cb.at(m, k) == x) matches.push_back(m);
    }
    if (matches.empty()) return {0, true};
    return {matches[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(matches.size())))],
            false};
  }
  std::vector<double> w(static_cast<std::size_t>(cb.M));
  double total = 0.0;
  for (int m = 0; m < cb.M; ++m) {
    w[static_cast<std::size_t>(m)] = likelihood(code, x, cb.at(m, k));
    total += w[static_cast<std::size_t>(m)];
  }
  if (total <= 0.0) return {0, true};
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (int m = 0; m < cb.M; ++m) {
    acc += w[static_cast<std::size_t>(m)];
    if (u < acc) return {m, false};
  }
  return {cb.M - 1, false};
}

Sequence decode(const CipherCode& code, int m, int k) {
  const Codebook& cb = code.codebook;
  if (m < 0 || m >= cb.M || k < 0 || k >= cb.K) {
    throw std::invalid_argument("decode: index out of range");
  }
  return cb.at(m, k);
}

double JointTable::total() const {
  double t = 0.0;
  for (double v : p) t += v;
  return t;
}

double JointTable::tv(const JointTable& other) const {
  if (p.size() != other.p.size()) throw std::invalid_argument("JointTable::tv: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - other.p[i]);
  return 0.5 * acc;
}

std::vector<double> JointTable::x_marginal() const {
  const std::size_t nx = p.size() / (static_cast<std::size_t>(M) * K);
  std::vector<double> m(nx, 0.0);
  for (std::size_t xr = 0; xr < nx; ++xr) {
    for (int mk = 0; mk < M * K; ++mk) m[xr] += p[xr * M * K + static_cast<std::size_t>(mk)];
  }
  return m;
}

std::vector<double> JointTable::mk_marginal() const {
  const std::size_t nx = p.size() / (static_cast<std::size_t>(M) * K);
  std::vector<double> m(static_cast<std::size_t>(M) * K, 0.0);
  for (std::size_t xr = 0; xr < nx; ++xr) {
    for (std::size_t mk = 0; mk < m.size(); ++mk) m[mk] += p[xr * M * K + mk];
  }
  return m;
}

namespace {

JointTable make_table(const CipherCode& code, std::uint64_t cell_guard) {
  const Codebook& cb = code.codebook;
  const int ax = code.x_alphabet();
  const double log2cells = cb.n * std::log2(static_cast<double>(ax)) +
                           std::log2(static_cast<double>(cb.M)) +
                           std::log2(static_cast<double>(cb.K));
  if (log2cells > std::log2(static_cast<double>(cell_guard))) {
    throw guard_error("joint table needs 2^" + std::to_string(log2cells) +
                      " cells, over the guard of " + std::to_string(cell_guard));
  }
  JointTable t;
  t.n = cb.n;
  t.ax = ax;
  t.M = cb.M;
  t.K = cb.K;
  std::uint64_t nx = 1;
  for (int i = 0; i < cb.n; ++i) nx *= static_cast<std::uint64_t>(ax);
  t.p.assign(nx * cb.M * cb.K, 0.0);
  return t;
}

double source_prob(const CipherCode& code, const Sequence& x) {
  // The source law is the generator (lossless) or the channel-smeared
  // generator marginal (lossy).
  if (code.lossless()) {
    double p = 1.0;
    for (std::uint8_t s : x.symbols) p *= code.codebook.generator[s];
    return p;
  }
  const Distribution& py = code.codebook.generator;
  double p = 1.0;
  for (std::uint8_t s : x.symbols) {
    double px = 0.0;
    for (int y = 0; y < py.size(); ++y) px += py[y] * code.x_given_y->at(y, s);
    p *= px;
  }
  return p;
}

}  // namespace

JointTable induced_joint(const CipherCode& code, std::uint64_t cell_guard) {
  JointTable t = make_table(code, cell_guard);
  const Codebook& cb = code.codebook;
  const std::uint64_t nx = t.p.size() / (static_cast<std::uint64_t>(cb.M) * cb.K);
  std::vector<double> w(static_cast<std::size_t>(cb.M));
  for (std::uint64_t xr = 0; xr < nx; ++xr) {
    const Sequence x = Sequence::from_rank(xr, cb.n, t.ax);
    const double px = source_prob(code, x);
    for (int k = 0; k < cb.K; ++k) {
      double total = 0.0;
      if (code.lossless()) {
        for (int m = 0; m < cb.M; ++m) {
          w[static_cast<std::size_t>(m)] = cb.at(m, k) == x ? 1.0 : 0.0;
          total += w[static_cast<std::size_t>(m)];
        }
      } else {
        for (int m = 0; m < cb.M; ++m) {
          w[static_cast<std::size_t>(m)] = likelihood(code, x, cb.at(m, k));
          total += w[static_cast<std::size_t>(m)];
        }
      }
      if (total <= 0.0) {
        // encoder fallback: all conditional mass on message 0
        t.p[(xr * cb.M + 0) * cb.K + static_cast<std::size_t>(k)] += px / cb.K;
      } else {
        for (int m = 0; m < cb.M; ++m) {
          t.p[(xr * cb.M + static_cast<std::uint64_t>(m)) * cb.K + static_cast<std::size_t>(k)] +=
              px / cb.K * (w[static_cast<std::size_t>(m)] / total);
        }
      }
    }
  }
  return t;
}

JointTable ideal_joint(const CipherCode& code, std::uint64_t cell_guard) {
  JointTable t = make_table(code, cell_guard);
  const Codebook& cb = code.codebook;
  const double unit = 1.0 / (static_cast<double>(cb.M) * cb.K);
  if (code.lossless()) {
    for (int m = 0; m < cb.M; ++m) {
      for (int k = 0; k < cb.K; ++k) {
        const std::uint64_t xr = cb.at(m, k).rank(t.ax);
        t.p[(xr * cb.M + static_cast<std::uint64_t>(m)) * cb.K + static_cast<std::size_t>(k)] +=
            unit;
      }
    }
    return t;
  }
  const std::uint64_t nx = t.p.size() / (static_cast<std::uint64_t>(cb.M) * cb.K);
  for (std::uint64_t xr = 0; xr < nx; ++xr) {
    const Sequence x = Sequence::from_rank(xr, cb.n, t.ax);
    for (int m = 0; m < cb.M; ++m) {
      for (int k = 0; k < cb.K; ++k) {
        t.p[(xr * cb.M + static_cast<std::uint64_t>(m)) * cb.K + static_cast<std::size_t>(k)] =
            unit * likelihood(code, x, cb.at(m, k));
      }
    }
  }
  return t;
}

std::vector<double> conditional_given_message(const CipherCode& code, int m,
                                              std::uint64_t cell_guard) {
  const Codebook& cb = code.codebook;
  if (m < 0 || m >= cb.M) throw std::invalid_argument("conditional_given_message: bad index");
  const int ax = code.x_alphabet();
  const double log2cells = cb.n * std::log2(static_cast<double>(ax));
  if (log2cells > std::log2(static_cast<double>(cell_guard))) {
    throw guard_error("conditional_given_message: x-space exceeds the table guard");
  }
  std::uint64_t nx = 1;
  for (int i = 0; i < cb.n; ++i) nx *= static_cast<std::uint64_t>(ax);
  std::vector<double> q(nx, 0.0);
  if (code.lossless()) {
    for (int k = 0; k < cb.K; ++k) q[cb.at(m, k).rank(ax)] += 1.0 / cb.K;
    return q;
  }
  for (std::uint64_t xr = 0; xr < nx; ++xr) {
    const Sequence x = Sequence::from_rank(xr, cb.n, ax);
    for (int k = 0; k < cb.K; ++k) {
      q[xr] += likelihood(code, x, cb.at(m, k)) / cb.K;
    }
  }
  return q;
}

}  // namespace henchman::cipher
