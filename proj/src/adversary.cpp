#include "henchman/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "henchman/types_util.hpp"

namespace henchman::adversary {

double list_min_distortion(const std::vector<Sequence>& list, const Sequence& x,
                           const DistortionMatrix& d) {
  double best = std::numeric_limits<double>::infinity();
  for (const Sequence& z : list) best = std::min(best, avg_distortion(x, z, d));
  return best;
}

HenchmanCode list_to_henchman(const ReconstructionList& list, int n, int x_alphabet,
                              const DistortionMatrix& d) {
  for (const auto& lst : list.lists) {
    if (lst.empty() || static_cast<int>(lst.size()) > list.list_cap) {
      throw std::invalid_argument("list_to_henchman: list size violates the rate cap");
    }
  }
  HenchmanCode h;
  h.n = n;
  h.x_alphabet = x_alphabet;
  h.M = static_cast<int>(list.lists.size());
  h.list_cap = list.list_cap;
  h.decoder = list.lists;
  std::uint64_t nx = 1;
  for (int i = 0; i < n; ++i) nx *= static_cast<std::uint64_t>(x_alphabet);
  h.encoder.assign(nx * static_cast<std::uint64_t>(h.M), 0);
  for (std::uint64_t xr = 0; xr < nx; ++xr) {
    const Sequence x = Sequence::from_rank(xr, n, x_alphabet);
    for (int m = 0; m < h.M; ++m) {
      const auto& lst = list.for_message(m);
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < lst.size(); ++j) {
        const double v = avg_distortion(x, lst[j], d);
        if (v < best_d) {
          best_d = v;
          best = static_cast<int>(j);
        }
      }
      h.encoder[xr * static_cast<std::uint64_t>(h.M) + static_cast<std::uint64_t>(m)] = best;
    }
  }
  return h;
}

ReconstructionList henchman_to_list(const HenchmanCode& h) {
  ReconstructionList list;
  list.list_cap = h.list_cap;
  list.lists = h.decoder;
  return list;
}

namespace {

// Mass of the x's whose best list entry still sits at distortion >= D, i.e.
// P[d >= D | this message] for the candidate list. Accumulated in ascending
// x-rank order so that independent enumeration routes sum identically.
double uncovered_mass(const std::vector<double>& px_given_m, const std::vector<Sequence>& subset,
                      int n, int ax, double D, const DistortionMatrix& d) {
  double acc = 0.0;
  for (std::uint64_t xr = 0; xr < px_given_m.size(); ++xr) {
    if (px_given_m[xr] == 0.0) continue;
    const Sequence x = Sequence::from_rank(xr, n, ax);
    if (!(list_min_distortion(subset, x, d) < D)) acc += px_given_m[xr];
  }
  return acc;
}

}  // namespace

double optimal_attack_value(const cipher::CipherCode& code, double RL, double D,
                            const DistortionMatrix& d_e) {
  const cipher::Codebook& cb = code.codebook;
  const int n = cb.n;
  const int ax = code.x_alphabet();
  const int nz = d_e.cols();
  const std::uint64_t L = cipher::index_count(n * RL);
  if (ax != 2 || nz != 2 || n > 3 || L > 4) {
    throw guard_error("optimal_attack_value: exhaustive guard is binary, n <= 3, list size <= 4");
  }
  const cipher::JointTable joint = cipher::induced_joint(code);
  std::uint64_t nx = 1;
  for (int i = 0; i < n; ++i) nx *= static_cast<std::uint64_t>(ax);
  std::uint64_t nzn = 1;
  for (int i = 0; i < n; ++i) nzn *= static_cast<std::uint64_t>(nz);

  std::vector<Sequence> zs;
  zs.reserve(nzn);
  for (std::uint64_t zr = 0; zr < nzn; ++zr) zs.push_back(Sequence::from_rank(zr, n, nz));

  const std::size_t pick = std::min<std::size_t>(static_cast<std::size_t>(L), zs.size());
  double value = 0.0;
  for (int m = 0; m < cb.M; ++m) {
    std::vector<double> px_m(nx, 0.0);
    for (std::uint64_t xr = 0; xr < nx; ++xr) {
      for (int k = 0; k < cb.K; ++k) px_m[xr] += joint.at(xr, m, k);
    }
    // minimize the uncovered mass over all subsets of Z^n of the chosen size
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(pick);
    for (std::size_t i = 0; i < pick; ++i) idx[i] = i;
    while (true) {
      std::vector<Sequence> subset;
      subset.reserve(pick);
      for (std::size_t i : idx) subset.push_back(zs[i]);
      best = std::min(best, uncovered_mass(px_m, subset, n, ax, D, d_e));
      // next combination
      std::size_t i = pick;
      bool done = true;
      while (i > 0) {
        --i;
        if (idx[i] != i + zs.size() - pick) {
          ++idx[i];
          for (std::size_t j = i + 1; j < pick; ++j) idx[j] = idx[j - 1] + 1;
          done = false;
          break;
        }
      }
      if (done) break;
    }
    value += best;
  }
  return value;
}

ReconstructionList p2p_attack(const Distribution& px, const DistortionMatrix& d_e, double RL,
                              int n, std::uint64_t seed, const rd::Options& opts) {
  const rd::RDPoint pt = rd::distortion_rate_point(px, d_e, RL, opts);
  // Output marginal of the optimal test channel.
  std::vector<double> qz(static_cast<std::size_t>(d_e.cols()), 0.0);
  for (int x = 0; x < px.size(); ++x) {
    for (int z = 0; z < d_e.cols(); ++z) qz[static_cast<std::size_t>(z)] += px[x] * pt.test_channel.at(x, z);
  }
  double total = 0.0;
  for (double v : qz) total += v;
  for (auto& v : qz) v /= total;
  const Distribution marginal(qz);

  const std::uint64_t L = cipher::index_count(n * RL);
  ReconstructionList list;
  list.list_cap = static_cast<int>(L);
  list.lists.resize(1);
  Rng rng(seed, "p2p-attack");
  for (std::uint64_t i = 0; i < L; ++i) {
    list.lists.front().push_back(Sequence::iid(n, marginal, rng));
  }
  return list;
}

KeyEnumResult key_enumeration_attack(const cipher::CipherCode& code, const Sequence& x, int m,
                                     const DistortionMatrix& d_e) {
  KeyEnumResult res;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < code.codebook.K; ++k) {
    const Sequence z = cipher::decode(code, m, k);
    const double v = avg_distortion(x, z, d_e);
    if (v < best) {
      best = v;
      res.key_index = k;
      res.z = z;
    }
  }
  res.distortion = best;
  return res;
}

JointTypeDiagnostic joint_type_diagnostic(const Sequence& x, const Sequence& y, double rate,
                                          double d_b_target, const Distribution& px,
                                          const DistortionMatrix& d_b, double eps) {
  if (x.length() != y.length() || x.length() == 0) {
    throw std::invalid_argument("joint_type_diagnostic: length mismatch");
  }
  const JointDistribution t = empirical_joint_type(x, y, d_b.rows(), d_b.cols());
  JointTypeDiagnostic diag;
  diag.mutual_info = mutual_information(t);
  for (int a = 0; a < t.rows(); ++a) {
    for (int b = 0; b < t.cols(); ++b) diag.fidelity += t.at(a, b) * d_b.at(a, b);
  }
  diag.marginal_tv = tv_distance(t.row_marginal(), px);
  diag.in_set = diag.mutual_info <= rate + eps && diag.fidelity <= d_b_target + eps &&
                diag.marginal_tv <= eps;
  return diag;
}

TypecoverResult typecover_attack(const Sequence& x, const Sequence& y, double r,
                                 const DistortionMatrix& d_e, double tau, double slack_budget,
                                 const rd::Options& opts) {
  if (x.length() != y.length()) throw std::invalid_argument("typecover_attack: length mismatch");
  if (r < 0.0) throw std::invalid_argument("typecover_attack: rate must be >= 0");
  const int n = x.length();
  const int ax = d_e.rows();
  int ay = 0;
  for (std::uint8_t s : y.symbols) ay = std::max<int>(ay, s + 1);
  ay = std::max(ay, 2);

  types::TypeIndex jt;
  jt.n = n;
  jt.ax = ax;
  jt.ay = ay;
  jt.counts.assign(static_cast<std::size_t>(ax) * ay, 0);
  for (int i = 0; i < n; ++i) {
    jt.counts[static_cast<std::size_t>(x[i]) * ay + y[i]] += 1;
  }

  const types::CoveringCodebook cb =
      types::covering_codebook(y, jt, r, tau, d_e, slack_budget, opts);
  TypecoverResult res;
  res.covered = cb.guarantee;
  res.promised_distortion = cb.cover_radius;
  res.slack_bits = cb.slack_bits;
  const double type_bits =
      std::log2(static_cast<double>(types::count_weak_compositions(n, ax * ay)));
  if (cb.entries.empty()) {
    res.z = y;  // degenerate; reported uncovered unless the shell was empty
    res.description_bits = type_bits;
    res.achieved_distortion = avg_distortion(x, res.z, d_e);
    return res;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Sequence& z : cb.entries) {
    const double v = avg_distortion(x, z, d_e);
    if (v < best) {
      best = v;
      res.z = z;
    }
  }
  res.achieved_distortion = best;
  res.description_bits = type_bits + std::log2(static_cast<double>(cb.entries.size()));
  return res;
}

}  // namespace henchman::adversary
