#include "henchman/region.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace henchman::region {

double lossless_max_eve_distortion(const LosslessQuery& q, const rd::Options& opts) {
  if (q.R < 0.0 || q.R0 < 0.0 || q.RL < 0.0) {
    throw std::invalid_argument("lossless_max_eve_distortion: rates must be >= 0");
  }
  if (q.R < entropy(q.source) - 1e-12) {
    throw infeasible_error("lossless_max_eve_distortion: R below the source entropy");
  }
  if (q.R0 > q.RL) return rd::distortion_rate(q.source, q.d_e, q.RL, opts);
  return 0.0;
}

std::string to_string(SweepVar v) {
  switch (v) {
    case SweepVar::RL: return "rl";
    case SweepVar::R0: return "r0";
    case SweepVar::DB: return "d_b";
  }
  return "?";
}

namespace {

// Per-row compositions of `steps` into |Y| cells, as probability rows.
std::vector<std::vector<double>> row_grid(int ny, int steps) {
  std::vector<std::vector<double>> rows;
  std::vector<int> counts(static_cast<std::size_t>(ny), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == ny - 1) {
      counts[static_cast<std::size_t>(pos)] = left;
      std::vector<double> r(static_cast<std::size_t>(ny));
      for (int i = 0; i < ny; ++i) r[static_cast<std::size_t>(i)] = static_cast<double>(counts[static_cast<std::size_t>(i)]) / steps;
      rows.push_back(std::move(r));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[static_cast<std::size_t>(pos)] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, steps);
  return rows;
}

// Rows within L-inf radius of a base row, on a finer grid, renormalized.
std::vector<std::vector<double>> local_rows(const std::vector<double>& base, double radius,
                                            int fine_steps) {
  const int ny = static_cast<int>(base.size());
  std::vector<std::vector<double>> rows;
  for (const auto& r : row_grid(ny, fine_steps)) {
    bool near = true;
    for (int i = 0; i < ny; ++i) {
      if (std::abs(r[static_cast<std::size_t>(i)] - base[static_cast<std::size_t>(i)]) > radius + 1e-12) {
        near = false;
        break;
      }
    }
    if (near) rows.push_back(r);
  }
  return rows;
}

struct Candidate {
  Channel channel;
  JointDistribution joint;
  Candidate(Channel c, JointDistribution j) : channel(std::move(c)), joint(std::move(j)) {}
};

bool feasible(const LossyQuery& q, const JointDistribution& joint) {
  if (mutual_information(joint) > q.R + 1e-9) return false;
  double db = 0.0;
  for (int x = 0; x < joint.rows(); ++x) {
    for (int y = 0; y < joint.cols(); ++y) db += joint.at(x, y) * q.d_b.at(x, y);
  }
  return db <= q.D_B + 1e-9;
}

template <typename F>
void parallel_over(std::size_t count, int jobs, F&& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::size_t chunk = (count + static_cast<std::size_t>(jobs) - 1) / static_cast<std::size_t>(jobs);
  for (int t = 0; t < jobs; ++t) {
    const std::size_t lo = static_cast<std::size_t>(t) * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

// Scan a fixed set of channels; returns index of the best per the objective
// (fixed reduction order, independent of the parallelism degree).
struct ScanResult {
  bool any_feasible = false;
  int best = -1;
  double best_value = -1.0;
};

ScanResult scan(const LossyQuery& q, const std::vector<Candidate>& cands, bool need_value,
                double d_rl, const ChannelGridOptions& grid, const rd::Options& opts) {
  std::vector<double> value(cands.size(), -1.0);
  std::vector<char> ok(cands.size(), 0);
  parallel_over(cands.size(), grid.jobs, [&](std::size_t i) {
    if (!feasible(q, cands[i].joint)) return;
    ok[i] = 1;
    if (need_value) {
      const double side =
          rd::side_info_distortion_rate(cands[i].joint, q.d_e, q.RL - q.R0, opts);
      value[i] = std::min(d_rl, side);
    } else {
      value[i] = 0.0;
    }
  });
  ScanResult r;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!ok[i]) continue;
    r.any_feasible = true;
    if (value[i] > r.best_value + 1e-15) {
      r.best_value = value[i];
      r.best = static_cast<int>(i);
    }
  }
  return r;
}

std::vector<Candidate> build_candidates(const Distribution& px,
                                        const std::vector<std::vector<std::vector<double>>>& per_row) {
  // odometer over per-row choices
  const int nx = px.size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(nx), 0);
  std::vector<Candidate> cands;
  while (true) {
    std::vector<Distribution> rows;
    rows.reserve(static_cast<std::size_t>(nx));
    for (int x = 0; x < nx; ++x) rows.emplace_back(per_row[static_cast<std::size_t>(x)][idx[static_cast<std::size_t>(x)]]);
    Channel ch(std::move(rows));
    JointDistribution j = JointDistribution::from_source_channel(px, ch);
    cands.emplace_back(std::move(ch), std::move(j));
    int x = nx - 1;
    while (x >= 0) {
      if (++idx[static_cast<std::size_t>(x)] < per_row[static_cast<std::size_t>(x)].size()) break;
      idx[static_cast<std::size_t>(x)] = 0;
      --x;
    }
    if (x < 0) break;
  }
  return cands;
}

}  // namespace

LossyResult lossy_max_eve_distortion(const LossyQuery& q, const ChannelGridOptions& grid,
                                     const rd::Options& opts) {
  if (q.R < 0.0 || q.R0 < 0.0 || q.RL < 0.0 || q.D_B < 0.0) {
    throw std::invalid_argument("lossy_max_eve_distortion: parameters must be >= 0");
  }
  const int ny = q.d_b.cols();
  if (q.d_b.rows() != q.source.size() || q.d_e.rows() != q.source.size()) {
    throw std::invalid_argument("lossy_max_eve_distortion: distortion shape mismatch");
  }
  double step = grid.step > 0.0 ? grid.step : (ny == 2 ? 0.02 : 0.1);
  const int steps = std::max(1, static_cast<int>(std::lround(1.0 / step)));

  const bool need_value = q.RL >= q.R0;  // channel-dependent branch of the bound
  const double d_rl = rd::distortion_rate(q.source, q.d_e, q.RL, opts);

  const auto rows = row_grid(ny, steps);
  std::vector<std::vector<std::vector<double>>> per_row(
      static_cast<std::size_t>(q.source.size()), rows);
  std::vector<Candidate> cands = build_candidates(q.source, per_row);
  ScanResult sr = scan(q, cands, need_value, d_rl, grid, opts);

  LossyResult res;
  if (!sr.any_feasible) return res;
  res.feasible = true;
  if (!need_value) {
    res.d_e_max = d_rl;
    res.witness = cands[static_cast<std::size_t>(std::max(0, sr.best))].channel;
    return res;
  }

  int best = sr.best;
  double best_value = sr.best_value;
  Channel best_channel = cands[static_cast<std::size_t>(best)].channel;
  if (grid.refine && best_value < d_rl - 1e-12) {
    std::vector<std::vector<std::vector<double>>> local;
    for (int x = 0; x < q.source.size(); ++x) {
      std::vector<double> base(static_cast<std::size_t>(ny));
      for (int y = 0; y < ny; ++y) base[static_cast<std::size_t>(y)] = best_channel.at(x, y);
      local.push_back(local_rows(base, 1.0 / steps, steps * 10));
    }
    std::vector<Candidate> fine = build_candidates(q.source, local);
    ScanResult fr = scan(q, fine, true, d_rl, grid, opts);
    if (fr.any_feasible && fr.best_value > best_value) {
      best_value = fr.best_value;
      best_channel = fine[static_cast<std::size_t>(fr.best)].channel;
    }
  }
  res.d_e_max = best_value;
  res.witness = std::move(best_channel);
  return res;
}

std::vector<SweepRow> sweep_lossless(const LosslessQuery& base, SweepVar var,
                                     const std::vector<double>& grid, const rd::Options& opts) {
  if (grid.empty()) throw std::invalid_argument("sweep_lossless: empty grid");
  if (var == SweepVar::DB) throw std::invalid_argument("sweep_lossless: no D_B in this setting");
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  std::vector<SweepRow> rows;
  rows.reserve(sorted.size());
  for (double v : sorted) {
    LosslessQuery q = base;
    (var == SweepVar::RL ? q.RL : q.R0) = v;
    SweepRow row;
    row.value = v;
    row.feasible = true;
    row.d_e_max = lossless_max_eve_distortion(q, opts);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> sweep_lossy(const LossyQuery& base, SweepVar var,
                                  const std::vector<double>& grid,
                                  const ChannelGridOptions& gridopts, const rd::Options& opts) {
  if (grid.empty()) throw std::invalid_argument("sweep_lossy: empty grid");
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  std::vector<SweepRow> rows;
  rows.reserve(sorted.size());
  for (double v : sorted) {
    LossyQuery q = base;
    switch (var) {
      case SweepVar::RL: q.RL = v; break;
      case SweepVar::R0: q.R0 = v; break;
      case SweepVar::DB: q.D_B = v; break;
    }
    LossyResult r = lossy_max_eve_distortion(q, gridopts, opts);
    SweepRow row;
    row.value = v;
    row.feasible = r.feasible;
    row.d_e_max = r.feasible ? r.d_e_max : 0.0;
    row.witness = std::move(r.witness);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace henchman::region
