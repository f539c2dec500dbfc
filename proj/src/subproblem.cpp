#include "henchman/subproblem.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace henchman::subproblem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Binomial coefficients are exact in doubles for the sizes used here (n <= 34).
double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// Exact sum over x^n of prod_i P(x_i | y_i) under joint constraints, grouped
// by (y_i, z_i) cells: within a cell the contribution depends only on the
// x-symbol counts, so the sum collapses to composition enumeration with
// multinomial weights.
//
// Returns sum of P[x | y] over x with total distortion <= dist_budget and,
// when `pxy` is given, empirical joint type of (x, y) within `delta` of it
// (strict).
double grouped_sum(const Sequence& y, const Sequence* z, const Channel& x_given_y,
                   const DistortionMatrix& d, double dist_budget,
                   const JointDistribution* pxy, double delta) {
  const int n = y.length();
  const int ax = x_given_y.output_size();
  const int ay = x_given_y.input_size();
  // group key: y-symbol * (nz or 1) + z-symbol
  const int nz = z ? d.cols() : 1;
  std::vector<int> group_size(static_cast<std::size_t>(ay) * nz, 0);
  for (int i = 0; i < n; ++i) {
    group_size[static_cast<std::size_t>(y[i]) * nz + (z ? (*z)[i] : 0)] += 1;
  }
  struct Group {
    int b = 0, c = 0, size = 0;
  };
  std::vector<Group> groups;
  for (int b = 0; b < ay; ++b) {
    for (int c = 0; c < nz; ++c) {
      const int s = group_size[static_cast<std::size_t>(b) * nz + c];
      if (s > 0) groups.push_back({b, c, s});
    }
  }

  std::vector<int> joint_counts(pxy ? static_cast<std::size_t>(ax) * ay : 0, 0);
  double total = 0.0;

  std::function<void(std::size_t, double, double)> rec_group = [&](std::size_t gi, double weight,
                                                                   double dist) {
    if (dist > dist_budget + 1e-9) return;  // distortion only grows
    if (gi == groups.size()) {
      if (pxy) {
        double tv = 0.0;
        for (int a = 0; a < ax; ++a) {
          for (int b = 0; b < ay; ++b) {
            tv += std::abs(static_cast<double>(joint_counts[static_cast<std::size_t>(a) * ay + b]) / n -
                           pxy->at(a, b));
          }
        }
        if (0.5 * tv >= delta) return;
      }
      total += weight;
      return;
    }
    const Group& g = groups[gi];
    // Compositions of the group over x-symbols, with running multinomial weight.
    std::vector<int> counts(static_cast<std::size_t>(ax), 0);
    std::function<void(int, int, double, double)> comp = [&](int a, int left, double w,
                                                             double dd) {
      if (dd > dist_budget + 1e-9) return;
      if (a == ax - 1) {
        counts[static_cast<std::size_t>(a)] = left;
        const double pa = x_given_y.at(g.b, a);
        if (pa == 0.0 && left > 0) return;
        const double w2 = w * (left > 0 ? std::pow(pa, left) : 1.0);
        const double dd2 = dd + left * (z ? d.at(a, g.c) : 0.0);
        if (dd2 > dist_budget + 1e-9) return;
        if (pxy) {
          for (int s = 0; s < ax; ++s) {
            joint_counts[static_cast<std::size_t>(s) * ay + g.b] += counts[static_cast<std::size_t>(s)];
          }
        }
        rec_group(gi + 1, w2, dd2);
        if (pxy) {
          for (int s = 0; s < ax; ++s) {
            joint_counts[static_cast<std::size_t>(s) * ay + g.b] -= counts[static_cast<std::size_t>(s)];
          }
        }
        return;
      }
      const double pa = x_given_y.at(g.b, a);
      for (int k = 0; k <= left; ++k) {
        if (pa == 0.0 && k > 0) break;
        counts[static_cast<std::size_t>(a)] = k;
        const double w2 = w * binom(left, k) * (k > 0 ? std::pow(pa, k) : 1.0);
        const double dd2 = dd + k * (z ? d.at(a, g.c) : 0.0);
        comp(a + 1, left - k, w2, dd2);
      }
    };
    comp(0, g.size, weight, dist);
  };
  rec_group(0, 1.0, 0.0);
  return total;
}

}  // namespace

JointDistribution Instance::joint() const {
  if (!noisy()) throw std::invalid_argument("Instance::joint: lossless instance");
  const Distribution& py = codebook.generator;
  const int ax = x_given_y->output_size();
  std::vector<double> m(static_cast<std::size_t>(ax) * py.size());
  for (int x = 0; x < ax; ++x) {
    for (int y = 0; y < py.size(); ++y) {
      m[static_cast<std::size_t>(x) * py.size() + y] = py[y] * x_given_y->at(y, x);
    }
  }
  return JointDistribution(ax, py.size(), std::move(m));
}

double xi_term(const Instance& inst, int j, const Sequence& z, double delta) {
  const cipher::Codebook& cb = inst.codebook;
  if (cb.K != 1) throw std::invalid_argument("subproblem: codebook must be single-indexed");
  const Sequence& w = cb.at(j, 0);
  if (!inst.noisy()) {
    return (avg_distortion(w, z, inst.d) <= inst.D + 1e-12 &&
            is_typical(w, cb.generator, delta))
               ? 1.0
               : 0.0;
  }
  const JointDistribution pxy = inst.joint();
  return grouped_sum(w, &z, *inst.x_given_y, inst.d, inst.D * cb.n, &pxy, delta);
}

double typical_mass(const Instance& inst, int j, double delta) {
  const cipher::Codebook& cb = inst.codebook;
  const Sequence& w = cb.at(j, 0);
  if (!inst.noisy()) return is_typical(w, cb.generator, delta) ? 1.0 : 0.0;
  const JointDistribution pxy = inst.joint();
  return grouped_sum(w, nullptr, *inst.x_given_y, inst.d, kInf, &pxy, delta);
}

double xi_sum(const Instance& inst, const Sequence& z, double delta) {
  double acc = 0.0;
  for (int j = 0; j < inst.codebook.M; ++j) acc += xi_term(inst, j, z, delta);
  return acc;
}

namespace {

// Exact coverage probability of a z-subset for codeword j (noisy mode sums
// over the x-space, guarded small).
double subset_mass(const Instance& inst, int j, const std::vector<Sequence>& subset) {
  const cipher::Codebook& cb = inst.codebook;
  const Sequence& w = cb.at(j, 0);
  if (!inst.noisy()) {
    for (const Sequence& z : subset) {
      if (avg_distortion(w, z, inst.d) <= inst.D + 1e-12) return 1.0;
    }
    return 0.0;
  }
  const int ax = inst.x_alphabet();
  std::uint64_t nx = 1;
  for (int i = 0; i < cb.n; ++i) nx *= static_cast<std::uint64_t>(ax);
  double acc = 0.0;
  for (std::uint64_t xr = 0; xr < nx; ++xr) {
    const Sequence x = Sequence::from_rank(xr, cb.n, ax);
    double p = 1.0;
    for (int i = 0; i < cb.n; ++i) p *= inst.x_given_y->at(w[i], x[i]);
    if (p == 0.0) continue;
    for (const Sequence& z : subset) {
      if (avg_distortion(x, z, inst.d) <= inst.D + 1e-12) {
        acc += p;
        break;
      }
    }
  }
  return acc;
}

SuccessBounds exact_success(const Instance& inst, std::uint64_t L, std::uint64_t nzn) {
  const cipher::Codebook& cb = inst.codebook;
  const int nz = inst.d.cols();
  std::vector<Sequence> zs;
  zs.reserve(nzn);
  for (std::uint64_t zr = 0; zr < nzn; ++zr) zs.push_back(Sequence::from_rank(zr, cb.n, nz));
  const std::size_t pick = std::min<std::size_t>(static_cast<std::size_t>(L), zs.size());
  double best = 0.0;
  std::vector<std::size_t> idx(pick);
  for (std::size_t i = 0; i < pick; ++i) idx[i] = i;
  while (true) {
    std::vector<Sequence> subset;
    subset.reserve(pick);
    for (std::size_t i : idx) subset.push_back(zs[i]);
    double acc = 0.0;
    for (int j = 0; j < cb.M; ++j) acc += subset_mass(inst, j, subset);
    best = std::max(best, acc / cb.M);
    std::size_t i = pick;
    bool done = true;
    while (i > 0) {
      --i;
      if (idx[i] != i + zs.size() - pick) {
        ++idx[i];
        for (std::size_t j2 = i + 1; j2 < pick; ++j2) idx[j2] = idx[j2 - 1] + 1;
        done = false;
        break;
      }
    }
    if (done) break;
  }
  return {best, best, true};
}

// All-binary Hamming fast path helpers.
bool hamming_like(const DistortionMatrix& d) {
  return d.rows() == 2 && d.cols() == 2 && d.at(0, 0) == 0.0 && d.at(1, 1) == 0.0 &&
         d.at(0, 1) == d.at(1, 0);
}

SuccessBounds interval_success(const Instance& inst, std::uint64_t L, std::uint64_t nzn) {
  const cipher::Codebook& cb = inst.codebook;
  const int n = cb.n;
  const int nz = inst.d.cols();
  const int M = cb.M;
  const double delta = inst.delta;

  if (!inst.noisy()) {
    // Coverage bitmask per candidate z over the M codewords.
    const std::size_t words = (static_cast<std::size_t>(M) + 63) / 64;
    std::vector<std::uint64_t> ranks(static_cast<std::size_t>(M));
    std::vector<char> typical(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) {
      ranks[static_cast<std::size_t>(j)] = cb.at(j, 0).rank(inst.x_alphabet());
      typical[static_cast<std::size_t>(j)] = is_typical(cb.at(j, 0), cb.generator, delta) ? 1 : 0;
    }
    double p_atypical = 0.0;
    for (int j = 0; j < M; ++j) p_atypical += typical[static_cast<std::size_t>(j)] ? 0.0 : 1.0;
    p_atypical /= M;

    const bool fast = inst.x_alphabet() == 2 && hamming_like(inst.d);
    const double unit = fast ? inst.d.at(0, 1) : 0.0;

    std::vector<std::vector<std::uint64_t>> cover(nzn,
                                                  std::vector<std::uint64_t>(words, 0));
    double max_xi = 0.0;
    for (std::uint64_t zr = 0; zr < nzn; ++zr) {
      const Sequence z = Sequence::from_rank(zr, n, nz);
      double xi = 0.0;
      for (int j = 0; j < M; ++j) {
        double dist;
        if (fast) {
          dist = unit *
                 static_cast<double>(std::popcount(ranks[static_cast<std::size_t>(j)] ^ zr)) / n;
        } else {
          dist = avg_distortion(cb.at(j, 0), z, inst.d);
        }
        if (dist <= inst.D + 1e-12) {
          cover[zr][static_cast<std::size_t>(j) / 64] |= std::uint64_t(1) << (j % 64);
          if (typical[static_cast<std::size_t>(j)]) xi += 1.0;
        }
      }
      max_xi = std::max(max_xi, xi);
    }
    const double upper = std::min(1.0, p_atypical + static_cast<double>(L) * max_xi / M);

    // Greedy max coverage.
    std::vector<std::uint64_t> covered(words, 0);
    std::size_t covered_count = 0;
    for (std::uint64_t pickn = 0; pickn < L && covered_count < static_cast<std::size_t>(M);
         ++pickn) {
      std::size_t best_gain = 0;
      std::uint64_t best_z = 0;
      for (std::uint64_t zr = 0; zr < nzn; ++zr) {
        std::size_t gain = 0;
        for (std::size_t w = 0; w < words; ++w) {
          gain += static_cast<std::size_t>(std::popcount(cover[zr][w] & ~covered[w]));
        }
        if (gain > best_gain) {
          best_gain = gain;
          best_z = zr;
        }
      }
      if (best_gain == 0) break;
      for (std::size_t w = 0; w < words; ++w) covered[w] |= cover[best_z][w];
      covered_count += best_gain;
    }
    const double lower = static_cast<double>(covered_count) / M;
    return {lower, std::max(lower, upper), false};
  }

  // Noisy variant: per-(j, z) conditional probabilities, exact.
  if (nzn > (std::uint64_t(1) << 10) || M > (1 << 10)) {
    throw guard_error("best_code_success: noisy interval mode limited to 2^10 words");
  }
  const JointDistribution pxy = inst.joint();
  double mean_atypical = 0.0;
  for (int j = 0; j < M; ++j) mean_atypical += 1.0 - typical_mass(inst, j, delta);
  mean_atypical /= M;

  std::vector<std::vector<double>> pcov(nzn, std::vector<double>(static_cast<std::size_t>(M)));
  double max_zeta = 0.0;
  for (std::uint64_t zr = 0; zr < nzn; ++zr) {
    const Sequence z = Sequence::from_rank(zr, n, nz);
    double zeta = 0.0;
    for (int j = 0; j < M; ++j) {
      const Sequence& w = cb.at(j, 0);
      // coverage without typicality (for the achievable side)
      pcov[zr][static_cast<std::size_t>(j)] =
          grouped_sum(w, &z, *inst.x_given_y, inst.d, inst.D * n, nullptr, 0.0);
      zeta += grouped_sum(w, &z, *inst.x_given_y, inst.d, inst.D * n, &pxy, delta);
    }
    max_zeta = std::max(max_zeta, zeta / M);
  }
  const double upper = std::min(1.0, mean_atypical + static_cast<double>(L) * max_zeta);

  // Greedy on the single-word coverage lower bound.
  std::vector<double> cur(static_cast<std::size_t>(M), 0.0);
  for (std::uint64_t pickn = 0; pickn < L; ++pickn) {
    double best_gain = 0.0;
    std::uint64_t best_z = 0;
    for (std::uint64_t zr = 0; zr < nzn; ++zr) {
      double gain = 0.0;
      for (int j = 0; j < M; ++j) {
        gain += std::max(0.0, pcov[zr][static_cast<std::size_t>(j)] - cur[static_cast<std::size_t>(j)]);
      }
      if (gain > best_gain) {
        best_gain = gain;
        best_z = zr;
      }
    }
    if (best_gain <= 0.0) break;
    for (int j = 0; j < M; ++j) {
      cur[static_cast<std::size_t>(j)] =
          std::max(cur[static_cast<std::size_t>(j)], pcov[best_z][static_cast<std::size_t>(j)]);
    }
  }
  double lower = 0.0;
  for (int j = 0; j < M; ++j) lower += cur[static_cast<std::size_t>(j)];
  lower /= M;
  return {lower, std::max(lower, upper), false};
}

}  // namespace

namespace {

std::uint64_t checked_word_count(const Instance& inst) {
  const int nz = inst.d.cols();
  const double log2_nzn = inst.codebook.n * std::log2(static_cast<double>(nz));
  if (log2_nzn > 16.0) {
    throw guard_error("best_code_success: reconstruction space exceeds 2^16 sequences");
  }
  std::uint64_t nzn = 1;
  for (int i = 0; i < inst.codebook.n; ++i) nzn *= static_cast<std::uint64_t>(nz);
  return nzn;
}

}  // namespace

SuccessBounds best_code_success(const Instance& inst) {
  const cipher::Codebook& cb = inst.codebook;
  if (cb.K != 1) throw std::invalid_argument("best_code_success: codebook must be single-indexed");
  const std::uint64_t L = cipher::index_count(cb.n * inst.R);
  const std::uint64_t nzn = checked_word_count(inst);
  const bool tiny = inst.x_alphabet() == 2 && inst.d.cols() == 2 && cb.n <= 3 && L <= 4;
  if (tiny) return exact_success(inst, L, nzn);
  return interval_success(inst, L, nzn);
}

SuccessBounds success_interval(const Instance& inst) {
  const cipher::Codebook& cb = inst.codebook;
  if (cb.K != 1) throw std::invalid_argument("success_interval: codebook must be single-indexed");
  const std::uint64_t L = cipher::index_count(cb.n * inst.R);
  return interval_success(inst, L, checked_word_count(inst));
}

double chernoff_binary(double m, double p, double k) {
  if (m < 1.0 || p < 0.0 || p > 1.0 || k <= 0.0) {
    throw std::invalid_argument("chernoff_binary: need m >= 1, p in [0,1], k > 0");
  }
  return std::pow(std::exp(1.0) * m * p / k, k);
}

double chernoff_bounded(double m, double p, double k, double a) {
  if (a <= 0.0 || p < 0.0 || p > a) {
    throw std::invalid_argument("chernoff_bounded: need a > 0 and p in [0,a]");
  }
  if (m < 1.0 || k <= 0.0) throw std::invalid_argument("chernoff_bounded: need m >= 1, k > 0");
  return std::pow(std::exp(1.0) * m * p / k, k / a);
}

double TauDescriptor::value(int n) const {
  switch (kind) {
    case Kind::Polynomial: return c / std::pow(static_cast<double>(n), power);
    case Kind::SqrtExp: return c * std::exp2(-std::sqrt(static_cast<double>(n)));
  }
  return 0.0;
}

RegimeCheck check_regime(const DecayParams& p, const rd::Options& opts) {
  RegimeCheck rc;
  if (!p.x_given_y) {
    rc.r_d = rd::rate_at(p.generator, p.d, p.D, opts);
    rc.threshold = std::min(rc.r_d, p.R_C);
  } else {
    const Distribution& py = p.generator;
    const int ax = p.x_given_y->output_size();
    std::vector<double> px(static_cast<std::size_t>(ax), 0.0);
    std::vector<double> joint(static_cast<std::size_t>(ax) * py.size());
    for (int x = 0; x < ax; ++x) {
      for (int y = 0; y < py.size(); ++y) {
        const double v = py[y] * p.x_given_y->at(y, x);
        joint[static_cast<std::size_t>(x) * py.size() + y] = v;
        px[static_cast<std::size_t>(x)] += v;
      }
    }
    rc.r_d = rd::rate_at(Distribution(px), p.d, p.D, opts);
    rc.r_yd = rd::side_info_rate_at(JointDistribution(ax, py.size(), joint), p.d, p.D, opts);
    rc.threshold = std::min(rc.r_d, rc.r_yd + p.R_C);
  }
  rc.refused = p.R >= rc.threshold;
  return rc;
}

std::vector<DecayRow> decay_experiment(const DecayParams& p, const rd::Options& opts) {
  const RegimeCheck rc = check_regime(p, opts);
  if (rc.refused) {
    throw regime_error(
        "decay_experiment: refused, description rate R=" + std::to_string(p.R) +
        " is not below min{R(D), R_Y(D) + R_C} = " + std::to_string(rc.threshold));
  }
  std::vector<DecayRow> rows;
  for (int n : p.ns) {
    for (std::uint64_t seed : p.seeds) {
      Instance inst{cipher::build_codebook(seed, n, p.R_C, 0.0, p.generator), p.x_given_y, p.d,
                    p.R, p.D, p.delta};
      const SuccessBounds b = best_code_success(inst);
      DecayRow row;
      row.n = n;
      row.seed = seed;
      row.lower = b.lower;
      row.upper = b.upper;
      row.tau = p.tau.value(n);
      row.exceeds = row.upper > row.tau;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace henchman::subproblem
