#include <doctest.h>

#include <cmath>
#include <map>

#include "henchman/cipher.hpp"

using namespace henchman;
using namespace henchman::cipher;

TEST_CASE("codebook construction and determinism") {
  const auto gen = Distribution::bernoulli(0.5);
  const auto a = build_codebook(99, 4, 1.0, 0.5, gen);
  CHECK(a.M == 16);
  CHECK(a.K == 4);  // ceil(2^2)
  CHECK(a.entries.size() == 64);
  const auto b = build_codebook(99, 4, 1.0, 0.5, gen);
  for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(a.entries[i] == b.entries[i]);
  const auto c = build_codebook(100, 4, 1.0, 0.5, gen);
  bool all_equal = true;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (!(a.entries[i] == c.entries[i])) all_equal = false;
  }
  CHECK_FALSE(all_equal);
  CHECK_THROWS_AS(build_codebook(1, 24, 1.0, 0.0, gen), guard_error);
}

TEST_CASE("codebook symbol frequency concentrates on the generator") {
  const auto gen = Distribution::bernoulli(0.3);
  const auto cb = build_codebook(7, 10, 1.0, 0.2, gen);
  std::uint64_t ones = 0, total = 0;
  for (const auto& s : cb.entries) {
    for (auto v : s.symbols) {
      ones += v;
      ++total;
    }
  }
  const double freq = static_cast<double>(ones) / total;
  const double sigma = std::sqrt(0.3 * 0.7 / total);
  CHECK(std::abs(freq - 0.3) <= 3.0 * sigma);
}

TEST_CASE("lossless likelihood encoder") {
  // Hand-built codebook: M=2, K=1, n=2.
  Codebook cb{2, 0.5, 0.0, 0, Distribution::bernoulli(0.5), 2, 1,
              {Sequence{0, 1}, Sequence{1, 1}}};
  CipherCode code{cb, std::nullopt};
  Rng rng(1, "enc-test");
  // unique match -> deterministic message
  auto r = likelihood_encode(code, Sequence{1, 1}, 0, rng);
  CHECK(r.m == 1);
  CHECK_FALSE(r.fallback);
  // no match -> arbitrary-index fallback 0
  r = likelihood_encode(code, Sequence{0, 0}, 0, rng);
  CHECK(r.m == 0);
  CHECK(r.fallback);
  // decode is a table lookup
  CHECK(decode(code, 1, 0) == Sequence{1, 1});
  CHECK_THROWS_AS(decode(code, 2, 0), std::invalid_argument);
}

TEST_CASE("lossy encoder with identity channel reduces to lossless") {
  // The indicator is the noiseless limit of the likelihood: the exact encoder
  // conditionals (hence the induced joints) coincide.
  const auto cbl = build_codebook(5, 3, 1.0, 0.5, Distribution::bernoulli(0.4));
  CipherCode lossless{cbl, std::nullopt};
  CipherCode lossy{cbl, Channel::identity(2)};
  const auto a = induced_joint(lossless);
  const auto b = induced_joint(lossy);
  CHECK(a.tv(b) == doctest::Approx(0.0).epsilon(1e-12));
  // fallback events also coincide
  for (std::uint64_t xr = 0; xr < 8; ++xr) {
    const Sequence x = Sequence::from_rank(xr, 3, 2);
    for (int k = 0; k < cbl.K; ++k) {
      Rng r1(11, "enc"), r2(11, "enc");
      CHECK(likelihood_encode(lossless, x, k, r1).fallback ==
            likelihood_encode(lossy, x, k, r2).fallback);
    }
  }
}

TEST_CASE("decoder error rate: exact oracle vs Monte Carlo, decreasing in n") {
  const double p = 0.3;
  const auto gen = Distribution::bernoulli(p);
  const double R = entropy(gen) + 0.3;
  double prev_oracle = 1.0;
  for (int n : {4, 6, 8}) {
    const int M = static_cast<int>(index_count(n * R));
    // exact: P[error] = sum_x P(x) (1 - P(x))^M  (no codeword matches x)
    double oracle = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double px = std::pow(p, k) * std::pow(1.0 - p, n - k);
      double comb = 1.0;
      for (int i = 1; i <= k; ++i) comb = comb * (n - k + i) / i;
      oracle += comb * px * std::pow(1.0 - px, M);
    }
    CHECK(oracle < prev_oracle);
    prev_oracle = oracle;
    if (n == 8) CHECK(oracle < 0.15);

    int errors = 0, trials = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto cb = build_codebook(seed, n, R, 0.25, gen);
      CipherCode code{cb, std::nullopt};
      Rng src(seed, "source"), enc(seed, "encoder"), key(seed, "key");
      for (int t = 0; t < 8; ++t) {
        const Sequence x = Sequence::iid(n, gen, src);
        const int k = key.uniform_int(cb.K);
        const auto er = likelihood_encode(code, x, k, enc);
        if (!(decode(code, er.m, k) == x)) ++errors;
        ++trials;
      }
    }
    const double mc = static_cast<double>(errors) / trials;
    const double sigma = std::sqrt(oracle * (1.0 - oracle) / trials);
    CHECK(std::abs(mc - oracle) <= 4.0 * sigma + 1e-9);
  }
}

TEST_CASE("exact joint tables") {
  const auto gen = Distribution::bernoulli(0.3);
  const auto cb = build_codebook(3, 3, 1.2, 0.4, gen);
  CipherCode code{cb, std::nullopt};
  const auto ind = induced_joint(code);
  const auto idl = ideal_joint(code);
  CHECK(ind.total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(idl.total() == doctest::Approx(1.0).epsilon(1e-12));
  // induced x-marginal is exactly the product source
  const auto xm = ind.x_marginal();
  for (std::uint64_t xr = 0; xr < xm.size(); ++xr) {
    const Sequence x = Sequence::from_rank(xr, 3, 2);
    double px = 1.0;
    for (auto s : x.symbols) px *= gen[s];
    CHECK(xm[xr] == doctest::Approx(px).epsilon(1e-12));
  }
  // ideal (m,k)-marginal is exactly uniform, hence M independent of K
  const auto mk = idl.mk_marginal();
  for (double v : mk) CHECK(v == doctest::Approx(1.0 / (cb.M * cb.K)).epsilon(1e-12));
  // guard trips on oversized tables
  const auto big = build_codebook(3, 18, 1.0, 0.0, gen, std::uint64_t(1) << 24);
  CHECK_THROWS_AS(induced_joint(CipherCode{big, std::nullopt}), guard_error);
}

TEST_CASE("pushing both joints through the decoder preserves TV") {
  const auto gen = Distribution::bernoulli(0.4);
  const auto cb = build_codebook(21, 2, 1.0, 0.5, gen);
  CipherCode code{cb, std::nullopt};
  const auto ind = induced_joint(code);
  const auto idl = ideal_joint(code);
  const double tv = ind.tv(idl);
  // decoded sequence is a deterministic function of (m,k): appending it
  // permutes cells, leaving TV unchanged
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> pushed_ind, pushed_idl;
  for (std::uint64_t xr = 0; xr < 4; ++xr) {
    for (int m = 0; m < cb.M; ++m) {
      for (int k = 0; k < cb.K; ++k) {
        const std::uint64_t xhat = cb.at(m, k).rank(2);
        const auto key = std::make_pair(xr * 100 + xhat, static_cast<std::uint64_t>(m * cb.K + k));
        pushed_ind[key] += ind.at(xr, m, k);
        pushed_idl[key] += idl.at(xr, m, k);
      }
    }
  }
  double tv_pushed = 0.0;
  for (const auto& [key, v] : pushed_ind) tv_pushed += std::abs(v - pushed_idl[key]);
  tv_pushed *= 0.5;
  CHECK(tv_pushed == doctest::Approx(tv).epsilon(1e-12));
  // marginalizing (m,k) away can only reduce TV
  std::map<std::uint64_t, double> m_ind, m_idl;
  for (std::uint64_t xr = 0; xr < 4; ++xr) {
    for (int m = 0; m < cb.M; ++m) {
      for (int k = 0; k < cb.K; ++k) {
        const std::uint64_t xhat = cb.at(m, k).rank(2);
        m_ind[xr * 100 + xhat] += ind.at(xr, m, k);
        m_idl[xr * 100 + xhat] += idl.at(xr, m, k);
      }
    }
  }
  double tv_marg = 0.0;
  for (const auto& [key, v] : m_ind) tv_marg += std::abs(v - m_idl[key]);
  tv_marg *= 0.5;
  CHECK(tv_marg <= tv + 1e-12);
}

TEST_CASE("soft covering trend and negative control at desk scale") {
  const auto gen = Distribution::bernoulli(0.3);
  const double H = entropy(gen);
  auto mean_tv = [&](double R, int n, int seeds) {
    double acc = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const auto cb = build_codebook(static_cast<std::uint64_t>(s), n, R, 0.25, gen);
      CipherCode code{cb, std::nullopt};
      acc += induced_joint(code).tv(ideal_joint(code));
    }
    return acc / seeds;
  };
  // above-entropy rate: TV shrinks with n (light version; the acceptance
  // suite runs the full averaging)
  CHECK(mean_tv(H + 0.25, 6, 8) < mean_tv(H + 0.25, 2, 8));
  // below-entropy rate: TV stays large
  CHECK(mean_tv(H - 0.25, 6, 8) > 0.2);
  CHECK(mean_tv(H - 0.25, 8, 4) > 0.2);
}

TEST_CASE("conditional given message") {
  // lossless with distinct k-entries: uniform with mass 1/K
  Codebook cb{2, 0.5, 0.5, 0, Distribution::bernoulli(0.5), 2, 2,
              {Sequence{0, 0}, Sequence{0, 1}, Sequence{1, 0}, Sequence{1, 1}}};
  CipherCode code{cb, std::nullopt};
  auto q0 = conditional_given_message(code, 0);
  CHECK(q0[Sequence{0, 0}.rank(2)] == doctest::Approx(0.5));
  CHECK(q0[Sequence{0, 1}.rank(2)] == doctest::Approx(0.5));
  // duplicated codeword: mass proportional to multiplicity
  Codebook dup{2, 0.5, 0.5, 0, Distribution::bernoulli(0.5), 2, 2,
               {Sequence{0, 0}, Sequence{0, 0}, Sequence{1, 0}, Sequence{1, 1}}};
  auto qd = conditional_given_message(CipherCode{dup, std::nullopt}, 0);
  CHECK(qd[Sequence{0, 0}.rank(2)] == doctest::Approx(1.0));
  // lossy with identity channel matches the lossless table
  auto qi = conditional_given_message(CipherCode{cb, Channel::identity(2)}, 0);
  for (std::size_t i = 0; i < q0.size(); ++i) CHECK(qi[i] == doctest::Approx(q0[i]));
}

TEST_CASE("lossy ideal joint averages to the product law over micro-codebooks") {
  // n=1, M=K=2: enumerate all 2^4 codebooks exactly.
  const auto py = Distribution::bernoulli(0.5);
  const auto x_given_y = Channel::binary_symmetric(0.1);
  double exy[2][2] = {{0, 0}, {0, 0}};
  for (int mask = 0; mask < 16; ++mask) {
    double pcb = 1.0;
    std::vector<Sequence> entries;
    for (int slot = 0; slot < 4; ++slot) {
      const int y = (mask >> slot) & 1;
      entries.push_back(Sequence{y});
      pcb *= py[y];
    }
    Codebook cb{1, 1.0, 1.0, 0, py, 2, 2, entries};
    CipherCode code{cb, x_given_y};
    // Q(x, y) = sum_{m,k} 1/(MK) 1{y(m,k)=y} P(x|y)
    for (int m = 0; m < 2; ++m) {
      for (int k = 0; k < 2; ++k) {
        const int y = cb.at(m, k)[0];
        for (int x = 0; x < 2; ++x) {
          exy[x][y] += pcb * 0.25 * x_given_y.at(y, x);
        }
      }
    }
  }
  const auto joint = JointDistribution::from_source_channel(py, x_given_y);  // (y, x)
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      CHECK(exy[x][y] == doctest::Approx(joint.at(y, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("lossy ideal joint averages to the product law at n=2") {
  // M=K=2, n=2: 2^8 codebooks, averaged exactly.
  const auto py = Distribution::bernoulli(0.4);
  const auto x_given_y = Channel::binary_symmetric(0.2);
  std::vector<double> exy(16, 0.0);  // (x_rank, y_rank) over 4x4
  for (int mask = 0; mask < 256; ++mask) {
    double pcb = 1.0;
    std::vector<Sequence> entries;
    for (int slot = 0; slot < 4; ++slot) {
      const int y0 = (mask >> (2 * slot)) & 1, y1 = (mask >> (2 * slot + 1)) & 1;
      entries.push_back(Sequence{y0, y1});
      pcb *= py[y0] * py[y1];
    }
    Codebook cb{2, 0.5, 0.5, 0, py, 2, 2, entries};
    for (int m = 0; m < 2; ++m) {
      for (int k = 0; k < 2; ++k) {
        const Sequence& y = cb.at(m, k);
        for (std::uint64_t xr = 0; xr < 4; ++xr) {
          const Sequence x = Sequence::from_rank(xr, 2, 2);
          double w = 1.0;
          for (int i = 0; i < 2; ++i) w *= x_given_y.at(y[i], x[i]);
          exy[xr * 4 + y.rank(2)] += pcb * 0.25 * w;
        }
      }
    }
  }
  const auto pxy = JointDistribution::from_source_channel(py, x_given_y);  // (y, x)
  for (std::uint64_t xr = 0; xr < 4; ++xr) {
    const Sequence x = Sequence::from_rank(xr, 2, 2);
    for (std::uint64_t yr = 0; yr < 4; ++yr) {
      const Sequence y = Sequence::from_rank(yr, 2, 2);
      double want = 1.0;
      for (int i = 0; i < 2; ++i) want *= pxy.at(y[i], x[i]);
      CHECK(exy[xr * 4 + yr] == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("message conditionals agree with the ideal table") {
  const auto cb = build_codebook(13, 3, 1.0, 0.5, Distribution::bernoulli(0.3));
  for (const bool lossy : {false, true}) {
    CipherCode code{cb, lossy ? std::optional<Channel>(Channel::binary_symmetric(0.2))
                              : std::nullopt};
    const auto idl = ideal_joint(code);
    for (int m = 0; m < cb.M; ++m) {
      const auto q = conditional_given_message(code, m);
      double pm = 0.0;
      std::vector<double> from_table(q.size(), 0.0);
      for (std::uint64_t xr = 0; xr < q.size(); ++xr) {
        for (int k = 0; k < cb.K; ++k) {
          from_table[xr] += idl.at(xr, m, k);
          pm += idl.at(xr, m, k);
        }
      }
      for (std::uint64_t xr = 0; xr < q.size(); ++xr) {
        CHECK(q[xr] / cb.M == doctest::Approx(from_table[xr]).epsilon(1e-12));
      }
      CHECK(pm == doctest::Approx(1.0 / cb.M).epsilon(1e-9));
    }
  }
}
