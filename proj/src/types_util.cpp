#include "henchman/types_util.hpp"

#include <algorithm>
#include <cmath>

namespace henchman::types {

std::vector<int> TypeIndex::x_counts() const {
  if (ay == 0) return counts;
  std::vector<int> xs(static_cast<std::size_t>(ax), 0);
  for (int a = 0; a < ax; ++a) {
    for (int b = 0; b < ay; ++b) xs[static_cast<std::size_t>(a)] += at(a, b);
  }
  return xs;
}

std::vector<int> TypeIndex::y_counts() const {
  std::vector<int> ys(static_cast<std::size_t>(ay), 0);
  for (int a = 0; a < ax; ++a) {
    for (int b = 0; b < ay; ++b) ys[static_cast<std::size_t>(b)] += at(a, b);
  }
  return ys;
}

std::uint64_t count_weak_compositions(int n, int cells) {
  // C(n + cells - 1, cells - 1)
  std::uint64_t r = 1;
  for (int i = 1; i < cells; ++i) {
    r = r * static_cast<std::uint64_t>(n + i) / static_cast<std::uint64_t>(i);
  }
  return r;
}

std::vector<TypeIndex> enumerate_joint_types(int n, int ax, int ay, std::uint64_t guard) {
  if (n <= 0 || ax <= 0 || ay <= 0) throw std::invalid_argument("enumerate_joint_types: bad args");
  const int cells = ax * ay;
  double bound = std::pow(static_cast<double>(n + 1), cells);
  if (bound > static_cast<double>(guard)) {
    throw guard_error("enumerate_joint_types: (n+1)^(|X||Y|) exceeds guard");
  }
  std::vector<TypeIndex> out;
  std::vector<int> counts(static_cast<std::size_t>(cells), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == cells - 1) {
      counts[static_cast<std::size_t>(pos)] = left;
      out.push_back(TypeIndex{n, ax, ay, counts});
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[static_cast<std::size_t>(pos)] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, n);
  return out;
}

JointDistribution type_to_joint(const TypeIndex& t) {
  std::vector<double> m(t.counts.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<double>(t.counts[i]) / t.n;
  return JointDistribution(t.ax, t.ay, std::move(m));
}

std::pair<Sequence, Sequence> realize(const TypeIndex& t) {
  std::vector<std::uint8_t> xs, ys;
  xs.reserve(static_cast<std::size_t>(t.n));
  ys.reserve(static_cast<std::size_t>(t.n));
  for (int a = 0; a < t.ax; ++a) {
    for (int b = 0; b < t.ay; ++b) {
      for (int c = 0; c < t.at(a, b); ++c) {
        xs.push_back(static_cast<std::uint8_t>(a));
        ys.push_back(static_cast<std::uint8_t>(b));
      }
    }
  }
  return {Sequence(std::move(xs)), Sequence(std::move(ys))};
}

double log2_type_class_size(const std::vector<int>& counts) {
  int n = 0;
  for (int c : counts) n += c;
  double v = std::lgamma(n + 1.0);
  for (int c : counts) v -= std::lgamma(c + 1.0);
  return v / std::log(2.0);
}

ConditionalShell::ConditionalShell(const Sequence& cond, int cond_alphabet, int x_alphabet,
                                   const std::vector<std::vector<int>>& counts) {
  const int n = cond.length();
  position_of_.resize(static_cast<std::size_t>(n));
  group_positions_.assign(static_cast<std::size_t>(cond_alphabet), {});
  for (int i = 0; i < n; ++i) {
    group_positions_[cond[i]].push_back(i);
  }
  group_start_.assign(static_cast<std::size_t>(cond_alphabet), {});
  for (int b = 0; b < cond_alphabet; ++b) {
    const auto& cnts = counts[static_cast<std::size_t>(b)];
    if (static_cast<int>(cnts.size()) != x_alphabet) {
      throw std::invalid_argument("ConditionalShell: count row size mismatch");
    }
    int total = 0;
    for (int a = 0; a < x_alphabet; ++a) {
      if (cnts[static_cast<std::size_t>(a)] < 0) {
        empty_ = true;
        return;
      }
      total += cnts[static_cast<std::size_t>(a)];
    }
    if (total != static_cast<int>(group_positions_[static_cast<std::size_t>(b)].size())) {
      empty_ = true;
      return;
    }
    auto& start = group_start_[static_cast<std::size_t>(b)];
    for (int a = 0; a < x_alphabet; ++a) {
      for (int c = 0; c < cnts[static_cast<std::size_t>(a)]; ++c) {
        start.push_back(static_cast<std::uint8_t>(a));
      }
    }
  }
}

std::uint64_t ConditionalShell::size() const {
  if (empty_) return 0;
  double log2sz = 0.0;
  for (const auto& start : group_start_) {
    std::vector<int> cnt;
    for (std::uint8_t s : start) {
      if (s >= cnt.size()) cnt.resize(s + 1, 0);
      cnt[s] += 1;
    }
    log2sz += log2_type_class_size(cnt);
  }
  if (log2sz > 62.0) return UINT64_MAX;
  return static_cast<std::uint64_t>(std::llround(std::exp2(log2sz)));
}

void ConditionalShell::for_each(const std::function<bool(const Sequence&)>& fn) const {
  if (empty_) return;
  const int groups = static_cast<int>(group_positions_.size());
  std::vector<std::vector<std::uint8_t>> perm(group_start_.begin(), group_start_.end());
  Sequence x;
  x.symbols.assign(position_of_.size(), 0);
  auto fill = [&](int g) {
    const auto& pos = group_positions_[static_cast<std::size_t>(g)];
    const auto& p = perm[static_cast<std::size_t>(g)];
    for (std::size_t i = 0; i < pos.size(); ++i) {
      x.symbols[static_cast<std::size_t>(pos[i])] = p[i];
    }
  };
  for (int g = 0; g < groups; ++g) fill(g);
  // Odometer over per-group multiset permutations.
  while (true) {
    if (!fn(x)) return;
    int g = 0;
    for (; g < groups; ++g) {
      auto& p = perm[static_cast<std::size_t>(g)];
      if (std::next_permutation(p.begin(), p.end())) {
        fill(g);
        break;
      }
      // wrapped around to the sorted start
      fill(g);
    }
    if (g == groups) return;
  }
}

ConditionalShell v_shell(const Sequence& z, int z_alphabet, const Channel& v) {
  if (v.input_size() != z_alphabet) throw std::invalid_argument("v_shell: alphabet mismatch");
  const int ax = v.output_size();
  std::vector<int> zc(static_cast<std::size_t>(z_alphabet), 0);
  for (std::uint8_t s : z.symbols) zc[s] += 1;
  std::vector<std::vector<int>> counts(static_cast<std::size_t>(z_alphabet),
                                       std::vector<int>(static_cast<std::size_t>(ax), 0));
  for (int b = 0; b < z_alphabet; ++b) {
    int total = 0;
    for (int a = 0; a < ax; ++a) {
      const double c = v.at(b, a) * zc[static_cast<std::size_t>(b)];
      const int ci = static_cast<int>(std::llround(c));
      if (std::abs(c - ci) > 1e-9) {
        throw std::invalid_argument("v_shell: V inconsistent with the type of z");
      }
      counts[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = ci;
      total += ci;
    }
    if (total != zc[static_cast<std::size_t>(b)]) {
      throw std::invalid_argument("v_shell: V rows do not sum over the group");
    }
  }
  return ConditionalShell(z, z_alphabet, ax, counts);
}

ConditionalShell conditional_shell(const Sequence& y, const TypeIndex& joint_type) {
  std::vector<int> yc(static_cast<std::size_t>(joint_type.ay), 0);
  for (std::uint8_t s : y.symbols) yc[s] += 1;
  const std::vector<int> want = joint_type.y_counts();
  std::vector<std::vector<int>> counts(static_cast<std::size_t>(joint_type.ay),
                                       std::vector<int>(static_cast<std::size_t>(joint_type.ax), 0));
  bool feasible = y.length() == joint_type.n;
  for (int b = 0; b < joint_type.ay; ++b) {
    if (yc[static_cast<std::size_t>(b)] != want[static_cast<std::size_t>(b)]) feasible = false;
    for (int a = 0; a < joint_type.ax; ++a) {
      counts[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = joint_type.at(a, b);
    }
  }
  if (!feasible) {
    // Mismatched y-type: an empty shell.
    std::vector<std::vector<int>> bad(static_cast<std::size_t>(joint_type.ay),
                                      std::vector<int>(static_cast<std::size_t>(joint_type.ax), 0));
    if (!bad.empty()) bad[0][0] = -1;
    return ConditionalShell(y, joint_type.ay, joint_type.ax, bad);
  }
  return ConditionalShell(y, joint_type.ay, joint_type.ax, counts);
}

CoveringCodebook covering_codebook(const Sequence& y, const TypeIndex& joint_type, double r,
                                   double tau, const DistortionMatrix& d, double slack_budget,
                                   const rd::Options& opts) {
  if (r < 0.0) throw std::invalid_argument("covering_codebook: rate must be >= 0");
  const int n = joint_type.n;
  CoveringCodebook cb;
  cb.y = y;
  cb.joint_type = joint_type;
  cb.rate = r;

  ConditionalShell shell = conditional_shell(y, joint_type);
  if (shell.empty() || shell.size() == 0) {
    cb.guarantee = true;  // vacuous
    cb.cover_radius = tau;
    return cb;
  }

  const JointDistribution jt = type_to_joint(joint_type);
  const rd::SideInfoRDPoint pt = rd::side_info_distortion_rate_point(jt, d, r, opts);
  cb.cover_radius = pt.distortion + tau;

  // Candidate letters: union of the per-y test channel supports.
  const int nz = d.cols();
  std::vector<bool> letter(static_cast<std::size_t>(nz), false);
  for (const Channel& ch : pt.per_y_channels) {
    for (int x = 0; x < ch.input_size(); ++x) {
      for (int z = 0; z < nz; ++z) {
        if (ch.at(x, z) > 1e-9) letter[static_cast<std::size_t>(z)] = true;
      }
    }
  }
  std::vector<std::uint8_t> support;
  for (int z = 0; z < nz; ++z) {
    if (letter[static_cast<std::size_t>(z)]) support.push_back(static_cast<std::uint8_t>(z));
  }
  if (support.empty()) support.push_back(0);
  double cand_log2 = n * std::log2(static_cast<double>(support.size()));
  if (cand_log2 > 18.0) {
    throw guard_error("covering_codebook: candidate space exceeds 2^18 sequences");
  }
  const std::uint64_t cand_count = static_cast<std::uint64_t>(
      std::llround(std::pow(static_cast<double>(support.size()), n)));

  // Materialize the shell (guarded) and the coverage sets per candidate.
  std::vector<Sequence> members;
  if (shell.size() > (std::uint64_t(1) << 20)) {
    throw guard_error("covering_codebook: shell too large to cover exhaustively");
  }
  shell.for_each([&](const Sequence& x) {
    members.push_back(x);
    return true;
  });

  const std::size_t words = (members.size() + 63) / 64;
  std::vector<std::uint64_t> covered(words, 0);
  std::size_t covered_count = 0;

  const std::uint64_t budget = static_cast<std::uint64_t>(
      std::ceil(std::exp2(n * (r + slack_budget))));

  std::vector<std::uint64_t> best_mask(words);
  std::vector<std::uint64_t> cand_mask(words);
  Sequence z;
  z.symbols.assign(static_cast<std::size_t>(n), 0);
  while (covered_count < members.size() && cb.entries.size() < budget) {
    std::size_t best_gain = 0;
    Sequence best_z;
    for (std::uint64_t c = 0; c < cand_count; ++c) {
      std::uint64_t rem = c;
      for (int i = n - 1; i >= 0; --i) {
        z.symbols[static_cast<std::size_t>(i)] = support[rem % support.size()];
        rem /= support.size();
      }
      std::fill(cand_mask.begin(), cand_mask.end(), 0);
      std::size_t gain = 0;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if ((covered[i / 64] >> (i % 64)) & 1) continue;
        if (avg_distortion(members[i], z, d) <= cb.cover_radius + 1e-12) {
          cand_mask[i / 64] |= std::uint64_t(1) << (i % 64);
          ++gain;
        }
      }
      if (gain > best_gain) {
        best_gain = gain;
        best_z = z;
        best_mask = cand_mask;
      }
    }
    if (best_gain == 0) break;  // nothing coverable within the radius
    for (std::size_t w = 0; w < words; ++w) covered[w] |= best_mask[w];
    covered_count += best_gain;
    cb.entries.push_back(best_z);
  }

  cb.guarantee = covered_count == members.size();
  cb.slack_bits =
      cb.entries.empty() ? 0.0
                         : std::max(0.0, std::log2(static_cast<double>(cb.entries.size())) - n * r);
  return cb;
}

}  // namespace henchman::types
