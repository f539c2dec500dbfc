#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "henchman/prob.hpp"

namespace henchman::cipher {

// Random codebook indexed by (message, key): ceil(2^{nR}) x ceil(2^{nR0})
// sequences drawn i.i.d. from the generator distribution. Reproducible from
// the seed.
struct Codebook {
  int n = 0;
  double R = 0.0, R0 = 0.0;
  std::uint64_t seed = 0;
  Distribution generator;
  int M = 0, K = 0;
  std::vector<Sequence> entries;  // index m*K + k

  const Sequence& at(int m, int k) const { return entries[static_cast<std::size_t>(m) * K + k]; }
};

// ceil(2^v) with protection against double rounding of v.
std::uint64_t index_count(double v);

Codebook build_codebook(std::uint64_t seed, int n, double R, double R0,
                        const Distribution& generator,
                        std::uint64_t max_symbols = std::uint64_t(1) << 24);

// Lossless mode: the codebook holds x-sequences and the encoder matches
// exactly. Lossy mode: the codebook holds y-sequences and x_given_y supplies
// the per-letter likelihoods P_{X|Y}.
struct CipherCode {
  Codebook codebook;
  std::optional<Channel> x_given_y;

  bool lossless() const { return !x_given_y.has_value(); }
  int x_alphabet() const {
    return lossless() ? codebook.generator.size() : x_given_y->output_size();
  }
};

struct EncodeResult {
  int m = 0;
  bool fallback = false;  // no matching codeword / zero likelihood normalizer
};

// Stochastic likelihood encoder. Lossless: uniform over the messages whose
// key-k codeword equals x (index 0 when there is none). Lossy: message drawn
// proportionally to prod_i P_{X|Y}(x_i | y_i(m,k)).
EncodeResult likelihood_encode(const CipherCode& code, const Sequence& x, int k, Rng& rng);

Sequence decode(const CipherCode& code, int m, int k);

// Exact joint table over (x^n, m, k), dense in the rank of x^n.
struct JointTable {
  int n = 0, ax = 0, M = 0, K = 0;
  std::vector<double> p;  // index (x_rank * M + m) * K + k

  double at(std::uint64_t xr, int m, int k) const {
    return p[(xr * M + m) * K + static_cast<std::size_t>(k)];
  }
  double total() const;
  double tv(const JointTable& other) const;
  std::vector<double> x_marginal() const;   // over x ranks
  std::vector<double> mk_marginal() const;  // index m*K + k
};

// System-induced joint P(x)^n * 1/K * P(m | x, k).
JointTable induced_joint(const CipherCode& code, std::uint64_t cell_guard = std::uint64_t(1) << 22);
// Idealized joint: uniform (m,k), x from the indexed codeword.
JointTable ideal_joint(const CipherCode& code, std::uint64_t cell_guard = std::uint64_t(1) << 22);

// Q_{X^n | M = m} under the idealized distribution, dense over x ranks.
std::vector<double> conditional_given_message(const CipherCode& code, int m,
                                              std::uint64_t cell_guard = std::uint64_t(1) << 22);

}  // namespace henchman::cipher
