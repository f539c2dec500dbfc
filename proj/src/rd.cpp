#include "henchman/rd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace henchman::rd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BaState {
  std::vector<double> qz;       // output marginal
  std::vector<double> channel;  // row-major P_{Z|X}
  double rate = 0.0;
  double distortion = 0.0;
};

// One pass: channel update against the current marginal, then marginal update.
// Rate/distortion are evaluated for the updated channel against the updated
// marginal, which is exact at the fixed point.
void ba_iterate(const Distribution& px, const DistortionMatrix& d, double lambda, BaState& st) {
  const int nx = px.size(), nz = d.cols();
  const bool masked = std::isinf(lambda);
  for (int x = 0; x < nx; ++x) {
    double norm = 0.0;
    double* row = &st.channel[static_cast<std::size_t>(x) * nz];
    for (int z = 0; z < nz; ++z) {
      const double w = masked ? (d.at(x, z) == 0.0 ? st.qz[static_cast<std::size_t>(z)] : 0.0)
                              : st.qz[static_cast<std::size_t>(z)] * std::exp(-lambda * d.at(x, z));
      row[z] = w;
      norm += w;
    }
    if (norm <= 0.0) {
      // Marginal mass on this row's admissible letters underflowed; restart the
      // row uniformly over its minimum-distortion letters.
      double dmin = kInf;
      for (int z = 0; z < nz; ++z) dmin = std::min(dmin, d.at(x, z));
      int cnt = 0;
      for (int z = 0; z < nz; ++z) cnt += d.at(x, z) == dmin ? 1 : 0;
      for (int z = 0; z < nz; ++z) row[z] = d.at(x, z) == dmin ? 1.0 / cnt : 0.0;
    } else {
      for (int z = 0; z < nz; ++z) row[z] /= norm;
    }
  }
  std::fill(st.qz.begin(), st.qz.end(), 0.0);
  for (int x = 0; x < nx; ++x) {
    const double* row = &st.channel[static_cast<std::size_t>(x) * nz];
    for (int z = 0; z < nz; ++z) st.qz[static_cast<std::size_t>(z)] += px[x] * row[z];
  }
  double rate = 0.0, dist = 0.0;
  for (int x = 0; x < nx; ++x) {
    const double* row = &st.channel[static_cast<std::size_t>(x) * nz];
    for (int z = 0; z < nz; ++z) {
      if (row[z] > 0.0) {
        rate += px[x] * row[z] * std::log2(row[z] / st.qz[static_cast<std::size_t>(z)]);
        dist += px[x] * row[z] * d.at(x, z);
      }
    }
  }
  st.rate = std::max(0.0, rate);
  st.distortion = dist;
}

BaState ba_solve(const Distribution& px, const DistortionMatrix& d, double lambda,
                 const Options& opts) {
  const int nx = px.size(), nz = d.cols();
  if (d.rows() != nx) throw std::invalid_argument("blahut_arimoto: alphabet mismatch");
  BaState st;
  st.qz.assign(static_cast<std::size_t>(nz), 1.0 / nz);
  st.channel.assign(static_cast<std::size_t>(nx) * nz, 0.0);
  double prev = kInf;
  for (int it = 0; it < opts.max_iters; ++it) {
    ba_iterate(px, d, lambda, st);
    if (std::abs(st.rate - prev) < opts.tol) return st;
    prev = st.rate;
  }
  throw solver_error("blahut_arimoto: no convergence after " + std::to_string(opts.max_iters) +
                     " iterations at lambda=" + std::to_string(lambda));
}

Channel channel_from_state(const BaState& st, int nx, int nz) {
  return Channel::from_matrix(nx, nz, st.channel);
}

RDPoint point_from_state(const BaState& st, double lambda, int nx, int nz) {
  RDPoint p{st.rate, st.distortion, std::isinf(lambda) ? -kInf : -lambda / std::log(2.0),
            channel_from_state(st, nx, nz)};
  return p;
}

// Generic monotone bisection on lambda. `value` must be nondecreasing in
// lambda (rate) or its negation (distortion). Returns the bracketing states.
struct Bracket {
  double lam_lo = 0.0, lam_hi = 0.0;
  BaState lo, hi;  // states at lam_lo / lam_hi
};

// Near curve knees the alternating minimization converges sublinearly, so
// inversion queries get a larger iteration budget than direct fixed-point
// calls.
Options inversion_budget(const Options& opts) {
  Options b = opts;
  b.max_iters = std::max(opts.max_iters, 400000);
  return b;
}

Bracket bisect_lambda(const Distribution& px, const DistortionMatrix& d, const Options& opts,
                      const std::function<double(const BaState&)>& value, double target) {
  // value(state) is nondecreasing in lambda (use -distortion for distortion
  // targets). Establish a bracket, doubling lambda as needed.
  Bracket br;
  const Options bopts = inversion_budget(opts);
  br.lam_lo = 1e-9;
  br.lo = ba_solve(px, d, br.lam_lo, bopts);
  br.lam_hi = 1.0;
  br.hi = ba_solve(px, d, br.lam_hi, bopts);
  int grow = 0;
  while (value(br.hi) < target && grow++ < 60) {
    br.lam_lo = br.lam_hi;
    br.lo = br.hi;
    br.lam_hi *= 4.0;
    br.hi = ba_solve(px, d, br.lam_hi, bopts);
  }
  for (int it = 0; it < 200; ++it) {
    if (br.lam_hi - br.lam_lo < 1e-13 * std::max(1.0, br.lam_lo)) break;
    const double mid = 0.5 * (br.lam_lo + br.lam_hi);
    BaState ms = ba_solve(px, d, mid, bopts);
    if (value(ms) < target) {
      br.lam_lo = mid;
      br.lo = std::move(ms);
    } else {
      br.lam_hi = mid;
      br.hi = std::move(ms);
    }
    if (std::abs(value(br.hi) - target) < opts.inversion_tol ||
        std::abs(value(br.lo) - target) < opts.inversion_tol) {
      break;
    }
  }
  return br;
}

// Linear interpolation between the bracketing curve points; exact on straight
// segments of the convex curve, inert elsewhere.
double interp(double x0, double y0, double x1, double y1, double x) {
  if (std::abs(x1 - x0) < 1e-15) return 0.5 * (y0 + y1);
  const double t = std::clamp((x - x0) / (x1 - x0), 0.0, 1.0);
  return y0 + t * (y1 - y0);
}

}  // namespace

RDPoint blahut_arimoto(const Distribution& px, const DistortionMatrix& d, double lambda,
                       const Options& opts) {
  BaState st = ba_solve(px, d, lambda, opts);
  return point_from_state(st, lambda, px.size(), d.cols());
}

std::vector<RDPoint> rd_curve(const Distribution& px, const DistortionMatrix& d,
                              const std::vector<double>& slope_grid, const Options& opts) {
  if (slope_grid.empty()) throw std::invalid_argument("rd_curve: empty slope grid");
  std::vector<RDPoint> pts;
  pts.reserve(slope_grid.size());
  for (double s : slope_grid) {
    if (s > 0.0) throw std::invalid_argument("rd_curve: slopes must be <= 0");
    const double lambda = -s * std::log(2.0);
    pts.push_back(blahut_arimoto(px, d, lambda, opts));
  }
  std::sort(pts.begin(), pts.end(),
            [](const RDPoint& a, const RDPoint& b) { return a.distortion < b.distortion; });
  return pts;
}

double zero_rate_distortion(const Distribution& px, const DistortionMatrix& d) {
  const int z0 = zero_rate_letter(px, d);
  double v = 0.0;
  for (int x = 0; x < px.size(); ++x) v += px[x] * d.at(x, z0);
  return v;
}

int zero_rate_letter(const Distribution& px, const DistortionMatrix& d) {
  int best = 0;
  double best_v = kInf;
  for (int z = 0; z < d.cols(); ++z) {
    double v = 0.0;
    for (int x = 0; x < px.size(); ++x) v += px[x] * d.at(x, z);
    if (v < best_v - 1e-15) {
      best_v = v;
      best = z;
    }
  }
  return best;
}

RDPoint distortion_rate_point(const Distribution& px, const DistortionMatrix& d, double rate,
                              const Options& opts) {
  if (rate < 0.0) throw std::invalid_argument("distortion_rate: rate must be >= 0");
  const int nx = px.size(), nz = d.cols();
  if (rate <= 0.0) {
    // Zero-rate knee, resolved toward the smaller distortion: constant at the
    // best single reconstruction letter.
    const int z0 = zero_rate_letter(px, d);
    RDPoint p;
    p.rate = 0.0;
    p.slope = 0.0;
    double dist = 0.0;
    for (int x = 0; x < nx; ++x) dist += px[x] * d.at(x, z0);
    p.distortion = dist;
    std::vector<Distribution> rows(static_cast<std::size_t>(nx), Distribution::point_mass(nz, z0));
    p.test_channel = Channel(std::move(rows));
    return p;
  }
  BaState top_st = ba_solve(px, d, kInf, inversion_budget(opts));  // zero-distortion endpoint
  RDPoint top = point_from_state(top_st, kInf, nx, nz);
  if (rate >= top.rate - opts.inversion_tol) {
    top.distortion = 0.0;
    return top;
  }
  Bracket br = bisect_lambda(px, d, opts, [](const BaState& s) { return s.rate; }, rate);
  RDPoint res = point_from_state(br.hi, br.lam_hi, nx, nz);
  res.distortion = interp(br.lo.rate, br.lo.distortion, br.hi.rate, br.hi.distortion, rate);
  res.rate = rate;
  return res;
}

double distortion_rate(const Distribution& px, const DistortionMatrix& d, double rate,
                       const Options& opts) {
  return distortion_rate_point(px, d, rate, opts).distortion;
}

double rate_at(const Distribution& px, const DistortionMatrix& d, double distortion,
               const Options& opts) {
  if (distortion < 0.0) throw std::invalid_argument("rate_at: distortion must be >= 0");
  const double d0 = zero_rate_distortion(px, d);
  if (distortion >= d0 - opts.inversion_tol) return 0.0;
  if (distortion <= 0.0) return ba_solve(px, d, kInf, inversion_budget(opts)).rate;
  Bracket br =
      bisect_lambda(px, d, opts, [](const BaState& s) { return -s.distortion; }, -distortion);
  return std::max(0.0, interp(br.lo.distortion, br.lo.rate, br.hi.distortion, br.hi.rate,
                              distortion));
}

namespace {

// Conditional sources and weights for the side-information solvers.
struct SideDecomposition {
  std::vector<double> weights;          // P(y) > 0 entries
  std::vector<Distribution> cond;       // P_{X|Y=y}
  std::vector<int> y_symbols;
};

SideDecomposition decompose(const JointDistribution& pxy) {
  SideDecomposition s;
  const Distribution py = pxy.col_marginal();
  for (int y = 0; y < pxy.cols(); ++y) {
    if (py[y] <= 0.0) continue;  // degenerate side-information symbol, skipped
    std::vector<double> cond(static_cast<std::size_t>(pxy.rows()));
    double acc = 0.0;
    for (int x = 0; x < pxy.rows(); ++x) {
      cond[static_cast<std::size_t>(x)] = pxy.at(x, y) / py[y];
      acc += cond[static_cast<std::size_t>(x)];
    }
    for (auto& v : cond) v /= acc;
    s.weights.push_back(py[y]);
    s.cond.emplace_back(std::move(cond));
    s.y_symbols.push_back(y);
  }
  return s;
}

struct SideState {
  double rate = 0.0, distortion = 0.0;
  std::vector<BaState> per_y;
};

SideState side_solve(const SideDecomposition& dec, const DistortionMatrix& d, double lambda,
                     const Options& opts) {
  SideState st;
  const Options bopts = inversion_budget(opts);
  for (std::size_t i = 0; i < dec.cond.size(); ++i) {
    BaState b = ba_solve(dec.cond[i], d, lambda, bopts);
    st.rate += dec.weights[i] * b.rate;
    st.distortion += dec.weights[i] * b.distortion;
    st.per_y.push_back(std::move(b));
  }
  return st;
}

SideInfoRDPoint side_point(const SideDecomposition& dec, const SideState& st, int nx, int nz,
                           int ny) {
  SideInfoRDPoint p;
  p.rate = st.rate;
  p.distortion = st.distortion;
  // Channels for skipped y-symbols default to the zero-rate letter of an
  // arbitrary row; they carry no probability.
  std::vector<Channel> chans;
  chans.reserve(static_cast<std::size_t>(ny));
  std::size_t k = 0;
  for (int y = 0; y < ny; ++y) {
    if (k < dec.y_symbols.size() && dec.y_symbols[k] == y) {
      chans.push_back(Channel::from_matrix(nx, nz, st.per_y[k].channel));
      ++k;
    } else {
      chans.push_back(Channel::from_matrix(
          nx, nz, std::vector<double>(static_cast<std::size_t>(nx) * nz, 1.0 / nz)));
    }
  }
  p.per_y_channels = std::move(chans);
  return p;
}

}  // namespace

SideInfoRDPoint side_info_distortion_rate_point(const JointDistribution& pxy,
                                                const DistortionMatrix& d, double rate,
                                                const Options& opts) {
  if (rate < 0.0) throw std::invalid_argument("side_info_distortion_rate: rate must be >= 0");
  if (d.rows() != pxy.rows()) throw std::invalid_argument("side_info: alphabet mismatch");
  SideDecomposition dec = decompose(pxy);
  const int nx = pxy.rows(), nz = d.cols(), ny = pxy.cols();
  if (rate <= 0.0) {
    SideState st = side_solve(dec, d, 0.0, opts);
    // Zero-rate: best single letter per side-information symbol.
    st.rate = 0.0;
    st.distortion = 0.0;
    for (std::size_t i = 0; i < dec.cond.size(); ++i) {
      const int z0 = zero_rate_letter(dec.cond[i], d);
      double dist = 0.0;
      for (int x = 0; x < nx; ++x) dist += dec.cond[i][x] * d.at(x, z0);
      st.distortion += dec.weights[i] * dist;
      std::fill(st.per_y[i].channel.begin(), st.per_y[i].channel.end(), 0.0);
      for (int x = 0; x < nx; ++x) {
        st.per_y[i].channel[static_cast<std::size_t>(x) * nz + z0] = 1.0;
      }
    }
    return side_point(dec, st, nx, nz, ny);
  }

  SideState top;
  for (std::size_t i = 0; i < dec.cond.size(); ++i) {
    BaState b = ba_solve(dec.cond[i], d, kInf, inversion_budget(opts));
    top.rate += dec.weights[i] * b.rate;
    top.distortion += dec.weights[i] * b.distortion;
    top.per_y.push_back(std::move(b));
  }
  if (rate >= top.rate - opts.inversion_tol) {
    top.distortion = 0.0;
    SideInfoRDPoint p = side_point(dec, top, nx, nz, ny);
    p.distortion = 0.0;
    return p;
  }

  double lam_lo = 1e-9, lam_hi = 1.0;
  SideState lo = side_solve(dec, d, lam_lo, opts);
  SideState hi = side_solve(dec, d, lam_hi, opts);
  int grow = 0;
  while (hi.rate < rate && grow++ < 60) {
    lam_lo = lam_hi;
    lo = std::move(hi);
    lam_hi *= 4.0;
    hi = side_solve(dec, d, lam_hi, opts);
  }
  for (int it = 0; it < 200; ++it) {
    if (lam_hi - lam_lo < 1e-13 * std::max(1.0, lam_lo)) break;
    const double mid = 0.5 * (lam_lo + lam_hi);
    SideState ms = side_solve(dec, d, mid, opts);
    if (ms.rate < rate) {
      lam_lo = mid;
      lo = std::move(ms);
    } else {
      lam_hi = mid;
      hi = std::move(ms);
    }
    if (std::abs(hi.rate - rate) < opts.inversion_tol ||
        std::abs(lo.rate - rate) < opts.inversion_tol) {
      break;
    }
  }
  SideInfoRDPoint p = side_point(dec, hi, nx, nz, ny);
  p.distortion = interp(lo.rate, lo.distortion, hi.rate, hi.distortion, rate);
  p.rate = rate;
  return p;
}

double side_info_distortion_rate(const JointDistribution& pxy, const DistortionMatrix& d,
                                 double rate, const Options& opts) {
  return side_info_distortion_rate_point(pxy, d, rate, opts).distortion;
}

double side_info_rate_at(const JointDistribution& pxy, const DistortionMatrix& d,
                         double distortion, const Options& opts) {
  if (distortion < 0.0) throw std::invalid_argument("side_info_rate_at: distortion must be >= 0");
  if (d.rows() != pxy.rows()) throw std::invalid_argument("side_info: alphabet mismatch");
  SideDecomposition dec = decompose(pxy);
  double d_zero_rate = 0.0;
  for (std::size_t i = 0; i < dec.cond.size(); ++i) {
    const int z0 = zero_rate_letter(dec.cond[i], d);
    double dist = 0.0;
    for (int x = 0; x < pxy.rows(); ++x) dist += dec.cond[i][x] * d.at(x, z0);
    d_zero_rate += dec.weights[i] * dist;
  }
  if (distortion >= d_zero_rate - 1e-12) return 0.0;
  if (distortion <= 0.0) {
    double r = 0.0;
    for (std::size_t i = 0; i < dec.cond.size(); ++i) {
      r += dec.weights[i] * ba_solve(dec.cond[i], d, kInf, inversion_budget(opts)).rate;
    }
    return r;
  }
  double lam_lo = 1e-9, lam_hi = 1.0;
  SideState lo = side_solve(dec, d, lam_lo, opts);
  SideState hi = side_solve(dec, d, lam_hi, opts);
  int grow = 0;
  while (hi.distortion > distortion && grow++ < 60) {
    lam_lo = lam_hi;
    lo = std::move(hi);
    lam_hi *= 4.0;
    hi = side_solve(dec, d, lam_hi, opts);
  }
  for (int it = 0; it < 200; ++it) {
    if (lam_hi - lam_lo < 1e-13 * std::max(1.0, lam_lo)) break;
    const double mid = 0.5 * (lam_lo + lam_hi);
    SideState ms = side_solve(dec, d, mid, opts);
    if (ms.distortion > distortion) {
      lam_lo = mid;
      lo = std::move(ms);
    } else {
      lam_hi = mid;
      hi = std::move(ms);
    }
  }
  return std::max(0.0, interp(lo.distortion, lo.rate, hi.distortion, hi.rate, distortion));
}

namespace {

// Enumerate probability vectors with entries k/steps, filtered to the closed
// TV ball around px.
void simplex_grid(int dim, int steps, const Distribution& px, double delta,
                  const std::function<void(const std::vector<double>&)>& fn) {
  std::vector<int> counts(static_cast<std::size_t>(dim), 0);
  std::vector<double> q(static_cast<std::size_t>(dim));
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == dim - 1) {
      counts[static_cast<std::size_t>(pos)] = left;
      double tv = 0.0;
      for (int i = 0; i < dim; ++i) {
        q[static_cast<std::size_t>(i)] = static_cast<double>(counts[static_cast<std::size_t>(i)]) / steps;
        tv += std::abs(q[static_cast<std::size_t>(i)] - px[i]);
      }
      if (0.5 * tv <= delta + 1e-12) fn(q);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[static_cast<std::size_t>(pos)] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, steps);
}

}  // namespace

double rd_exponent(const Distribution& px, const DistortionMatrix& d, double distortion,
                   double delta, const Options& opts) {
  if (distortion < 0.0) throw std::invalid_argument("rd_exponent: distortion must be >= 0");
  if (delta < 0.0) throw std::invalid_argument("rd_exponent: delta must be >= 0");
  if (delta == 0.0) return rate_at(px, d, distortion, opts);
  const int k = px.size();
  if (k > 4) throw guard_error("rd_exponent: alphabets beyond 4 letters need a convex solver");

  auto objective = [&](const std::vector<double>& qv) -> double {
    Distribution q(qv);
    const double div = kl_divergence(q, px);
    if (std::isinf(div)) return kInf;
    return rate_at(q, d, distortion, opts) + div;
  };

  double best = rate_at(px, d, distortion, opts);  // Q = px is always feasible

  if (k == 2) {
    const double p1 = px[1];
    const double lo = std::max(0.0, p1 - delta), hi = std::min(1.0, p1 + delta);
    const double step0 = 1e-3;
    double best_q = p1;
    const int n0 = static_cast<int>(std::floor((hi - lo) / step0)) + 1;
    for (int i = 0; i <= n0; ++i) {
      const double q1 = std::min(hi, lo + i * step0);
      const double v = objective({1.0 - q1, q1});
      if (v < best) {
        best = v;
        best_q = q1;
      }
    }
    double step = step0;
    for (int pass = 0; pass < 2; ++pass) {
      const double fine = step / 20.0;
      const double a = std::max(lo, best_q - step), b = std::min(hi, best_q + step);
      const int m = static_cast<int>(std::floor((b - a) / fine)) + 1;
      for (int i = 0; i <= m; ++i) {
        const double q1 = std::min(b, a + i * fine);
        const double v = objective({1.0 - q1, q1});
        if (v < best) {
          best = v;
          best_q = q1;
        }
      }
      step = fine;
    }
    return best;
  }

  // TODO: add a local refinement pass for 3- and 4-letter alphabets; the
  // fixed-step grid bounds the accuracy at roughly the step size there.
  const int steps = k == 3 ? 50 : 20;
  simplex_grid(k, steps, px, delta, [&](const std::vector<double>& q) {
    const double v = objective(q);
    if (v < best) best = v;
  });
  return best;
}

}  // namespace henchman::rd
