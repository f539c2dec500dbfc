#include <doctest.h>

#include <cmath>

#include "henchman/rd.hpp"

using namespace henchman;

namespace {

// Independent oracle: invert h on [0, 1/2] by bisection.
double binary_entropy_inverse(double v) {
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < v ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double kl_bernoulli(double q, double p) {
  double acc = 0.0;
  if (q > 0.0) acc += q * std::log2(q / p);
  if (q < 1.0) acc += (1.0 - q) * std::log2((1.0 - q) / (1.0 - p));
  return acc;
}

}  // namespace

TEST_CASE("binary hamming curve matches the closed form") {
  const auto d = DistortionMatrix::hamming(2);
  // R(D) = h(p) - h(D); frozen values evaluated independently
  CHECK(rd::rate_at(Distribution::bernoulli(0.5), d, 0.1) ==
        doctest::Approx(0.5310044064107188).epsilon(1e-7));
  CHECK(rd::rate_at(Distribution::bernoulli(0.3), d, 0.1) ==
        doctest::Approx(0.4122953056414114).epsilon(1e-7));
  // D(R) inverts it: Bern(1/2), R = 0.3 -> h^{-1}(0.7)
  CHECK(rd::distortion_rate(Distribution::bernoulli(0.5), d, 0.3) ==
        doctest::Approx(0.18929770537062586).epsilon(1e-6));
}

TEST_CASE("distortion-rate endpoints") {
  const auto d = DistortionMatrix::hamming(2);
  const auto p = Distribution::bernoulli(0.5);
  CHECK(rd::distortion_rate(p, d, 0.0) == doctest::Approx(0.5));
  CHECK(rd::distortion_rate(p, d, 1.0) == doctest::Approx(0.0));
  CHECK(rd::distortion_rate(p, d, 1.7) == doctest::Approx(0.0));
  // zero-rate point for any source: min_z E d
  CHECK(rd::distortion_rate(Distribution::bernoulli(0.3), d, 0.0) == doctest::Approx(0.3));
  CHECK(rd::zero_rate_distortion(Distribution::bernoulli(0.3), d) == doctest::Approx(0.3));
}

TEST_CASE("rd_curve is monotone and self-consistent") {
  const auto d = DistortionMatrix::hamming(2);
  const auto p = Distribution::bernoulli(0.35);
  std::vector<double> slopes;
  for (int i = 1; i <= 24; ++i) slopes.push_back(-0.25 * i);
  const auto pts = rd::rd_curve(p, d, slopes);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].distortion >= pts[i - 1].distortion - 1e-12);
    CHECK(pts[i].rate <= pts[i - 1].rate + 1e-9);
  }
  // convexity of R(D) along the sweep
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double t = (pts[i].distortion - pts[i - 1].distortion) /
                     (pts[i + 1].distortion - pts[i - 1].distortion + 1e-300);
    const double chord = pts[i - 1].rate + t * (pts[i + 1].rate - pts[i - 1].rate);
    CHECK(pts[i].rate <= chord + 1e-7);
  }
  // each point's channel reproduces its rate and distortion
  for (const auto& pt : pts) {
    const auto j = JointDistribution::from_source_channel(p, pt.test_channel);
    CHECK(mutual_information(j) == doctest::Approx(pt.rate).epsilon(1e-6));
    double dist = 0.0;
    for (int x = 0; x < 2; ++x) {
      for (int z = 0; z < 2; ++z) dist += j.at(x, z) * d.at(x, z);
    }
    CHECK(dist == doctest::Approx(pt.distortion).epsilon(1e-6));
  }
  CHECK_THROWS_AS(rd::rd_curve(p, d, {}), std::invalid_argument);
  CHECK_THROWS_AS(rd::rd_curve(p, d, {0.5}), std::invalid_argument);
}

TEST_CASE("brute-force channel grid agrees with the solver on 2x2") {
  const auto d = DistortionMatrix::hamming(2);
  auto mi_of = [](double p1, double a, double b) {
    // a = P(z=1|x=0), b = P(z=1|x=1)
    const double q1 = (1.0 - p1) * a + p1 * b;
    auto term = [](double w, double c, double q) {
      if (w <= 0.0 || c <= 0.0) return 0.0;
      return w * c * std::log2(c / q);
    };
    return term(1.0 - p1, 1.0 - a, 1.0 - q1) + term(1.0 - p1, a, q1) +
           term(p1, 1.0 - b, 1.0 - q1) + term(p1, b, q1);
  };
  for (double p1 : {0.2, 0.35, 0.5}) {
    const auto p = Distribution::bernoulli(p1);
    for (double D : {0.05, 0.1, 0.15}) {
      // Interior grid at step 1e-3: every feasible channel upper-bounds R(D).
      double grid_best = 1e9;
      for (int ia = 0; ia <= 1000; ++ia) {
        for (int ib = 0; ib <= 1000; ++ib) {
          const double a = ia * 1e-3, b = ib * 1e-3;
          if ((1.0 - p1) * a + p1 * (1.0 - b) > D) continue;
          grid_best = std::min(grid_best, mi_of(p1, a, b));
        }
      }
      const double solver = rd::rate_at(p, d, D);
      CHECK(solver <= grid_best + 1e-9);
      // Below the zero-rate point the distortion constraint binds, so the
      // optimum lies on E d = D: scan that boundary exactly in a.
      double boundary_best = 1e9;
      for (int ia = 0; ia <= 1000000; ++ia) {
        const double a = ia * 1e-6;
        const double b = 1.0 - (D - (1.0 - p1) * a) / p1;
        if (b < 0.0 || b > 1.0) continue;
        boundary_best = std::min(boundary_best, mi_of(p1, a, b));
      }
      CHECK(solver == doctest::Approx(boundary_best).epsilon(1e-4));
    }
  }
}

TEST_CASE("side information distortion-rate") {
  const auto d = DistortionMatrix::hamming(2);
  const auto px = Distribution::bernoulli(0.5);
  // identity side information: decoder already knows X
  CHECK(rd::side_info_distortion_rate(JointDistribution::identity_coupling(px), d, 0.0) ==
        doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rd::side_info_distortion_rate(JointDistribution::identity_coupling(px), d, 0.4) ==
        doctest::Approx(0.0).epsilon(1e-9));
  // independent side information: no help at all
  const auto prod = JointDistribution::product(Distribution::bernoulli(0.3),
                                               Distribution::bernoulli(0.5));
  for (double r : {0.0, 0.1, 0.25, 0.5}) {
    CHECK(rd::side_info_distortion_rate(prod, d, r) ==
          doctest::Approx(rd::distortion_rate(Distribution::bernoulli(0.3), d, r)).epsilon(1e-6));
  }
  // BSC(0.1) side information at zero rate: symbol-wise best reconstruction.
  // Brute-force oracle over the four maps z(y).
  const auto joint = JointDistribution::from_source_channel(px, Channel::binary_symmetric(0.1));
  double best = 1e9;
  for (int z0 = 0; z0 < 2; ++z0) {
    for (int z1 = 0; z1 < 2; ++z1) {
      double v = 0.0;
      for (int x = 0; x < 2; ++x) {
        v += joint.at(x, 0) * d.at(x, z0) + joint.at(x, 1) * d.at(x, z1);
      }
      best = std::min(best, v);
    }
  }
  CHECK(best == doctest::Approx(0.1));
  CHECK(rd::side_info_distortion_rate(joint, d, 0.0) == doctest::Approx(best).epsilon(1e-9));
  // side information never hurts
  for (double r : {0.0, 0.2, 0.4}) {
    CHECK(rd::side_info_distortion_rate(joint, d, r) <=
          rd::distortion_rate(px, d, r) + 1e-9);
  }
}

TEST_CASE("side info rate function inverts the distortion function") {
  const auto d = DistortionMatrix::hamming(2);
  const auto joint = JointDistribution::from_source_channel(Distribution::bernoulli(0.4),
                                                            Channel::binary_symmetric(0.15));
  for (double r : {0.05, 0.15, 0.3}) {
    const double dist = rd::side_info_distortion_rate(joint, d, r);
    if (dist > 1e-9) {
      CHECK(rd::side_info_rate_at(joint, d, dist) == doctest::Approx(r).epsilon(1e-5));
    }
  }
}

TEST_CASE("distortion_rate and rate_at are inverse on the common range") {
  const auto d = DistortionMatrix::hamming(2);
  const auto p = Distribution::bernoulli(0.4);
  for (double R : {0.1, 0.3, 0.5, 0.7}) {
    const double D = rd::distortion_rate(p, d, R);
    CHECK(rd::rate_at(p, d, D) == doctest::Approx(R).epsilon(1e-6));
  }
}

TEST_CASE("rd exponent: counterexample value and delta limit") {
  const auto d = DistortionMatrix::hamming(2);
  const auto p = Distribution::bernoulli(0.3);
  const double D = 0.1;
  const double rd_p = rd::rate_at(p, d, D);

  // delta = 0 pins Q = P
  CHECK(rd::rd_exponent(p, d, D, 0.0) == doctest::Approx(rd_p).epsilon(1e-9));

  // Unrestricted: the minimizing source sits at the zero-rate knee Q = Bern(D),
  // giving KL(Bern(D) || Bern(p)); scalar-scan oracle frozen independently.
  const double unrestricted = rd::rd_exponent(p, d, D, 1.0);
  CHECK(unrestricted == doctest::Approx(kl_bernoulli(D, 0.3)).epsilon(1e-5));
  CHECK(unrestricted == doctest::Approx(0.16781682137412181).epsilon(1e-5));
  CHECK(unrestricted < rd_p - 0.1);  // strictly below R(D)

  // nonincreasing in delta, approaching R(D) as delta -> 0
  double prev = -1.0;
  for (double delta : {0.01, 0.05, 0.1, 0.2}) {
    const double v = rd::rd_exponent(p, d, D, delta);
    CHECK(v <= rd_p + 1e-9);
    if (prev >= 0.0) CHECK(v <= prev + 1e-9);
    prev = v;
  }
  CHECK(rd::rd_exponent(p, d, D, 0.01) == doctest::Approx(0.4000713814280469).epsilon(1e-4));
}

TEST_CASE("rd exponent ternary grid runs and is monotone in delta") {
  const auto d = DistortionMatrix::hamming(3);
  const auto p = Distribution({0.5, 0.3, 0.2});
  const double a = rd::rd_exponent(p, d, 0.1, 0.05);
  const double b = rd::rd_exponent(p, d, 0.1, 0.3);
  CHECK(b <= a + 1e-9);
  CHECK(a <= rd::rate_at(p, d, 0.1) + 1e-9);
}

TEST_CASE("degenerate distortion rows collapse the curve") {
  // all-zero rows: nothing to describe
  const DistortionMatrix d(2, 2, {0.0, 0.0, 0.0, 0.0});
  const auto p = Distribution::bernoulli(0.4);
  CHECK(rd::distortion_rate(p, d, 0.0) == doctest::Approx(0.0));
  CHECK(rd::rate_at(p, d, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("binary entropy inverse oracle sanity") {
  CHECK(binary_entropy(binary_entropy_inverse(0.7)) == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(binary_entropy_inverse(1.0) == doctest::Approx(0.5));
}

TEST_CASE("side info solver agrees with a brute-force channel scan") {
  // Independent oracle: grid over all binary channels P_{Z|X,Y} (one
  // crossover parameter per (x,y) cell), minimizing E d subject to
  // I(X;Z|Y) <= R. The common-slope decomposition must match the direct
  // 4-parameter search.
  const auto d = DistortionMatrix::hamming(2);
  const auto joint = JointDistribution::from_source_channel(Distribution::bernoulli(0.4),
                                                            Channel::binary_symmetric(0.15));
  const double pxy[2][2] = {{joint.at(0, 0), joint.at(0, 1)}, {joint.at(1, 0), joint.at(1, 1)}};
  const double py[2] = {pxy[0][0] + pxy[1][0], pxy[0][1] + pxy[1][1]};

  auto mi_term = [](double w, double c, double q) {
    if (w <= 0.0 || c <= 0.0 || q <= 0.0) return 0.0;
    return w * c * std::log2(c / q);
  };

  for (double R : {0.05, 0.15, 0.3}) {
    const int steps = 50;
    double best = 1e18;
    // q[x][y] = P(Z=1 | X=x, Y=y)
    for (int a = 0; a <= steps; ++a) {
      for (int b = 0; b <= steps; ++b) {
        for (int c = 0; c <= steps; ++c) {
          for (int e = 0; e <= steps; ++e) {
            const double q[2][2] = {{static_cast<double>(a) / steps, static_cast<double>(b) / steps},
                                    {static_cast<double>(c) / steps, static_cast<double>(e) / steps}};
            double rate = 0.0, dist = 0.0;
            for (int y = 0; y < 2; ++y) {
              const double p0 = pxy[0][y] / py[y], p1 = pxy[1][y] / py[y];
              const double qz = p0 * q[0][y] + p1 * q[1][y];
              double iy = mi_term(p0, q[0][y], qz) + mi_term(p0, 1.0 - q[0][y], 1.0 - qz) +
                          mi_term(p1, q[1][y], qz) + mi_term(p1, 1.0 - q[1][y], 1.0 - qz);
              rate += py[y] * iy;
              dist += pxy[0][y] * q[0][y] + pxy[1][y] * (1.0 - q[1][y]);
            }
            if (rate <= R && dist < best) best = dist;
          }
        }
      }
    }
    const double solver = rd::side_info_distortion_rate(joint, d, R);
    // the grid can only overshoot the true minimum
    CHECK(solver <= best + 1e-9);
    CHECK(best - solver <= 6e-3);  // 0.02-step grid resolution
  }
}

TEST_CASE("ternary source round trips and zero-rate letter") {
  const auto p = Distribution({0.5, 0.3, 0.2});
  const auto ham = DistortionMatrix::hamming(3);
  for (double R : {0.2, 0.6, 1.0}) {
    const double D = rd::distortion_rate(p, ham, R);
    if (D > 1e-9) CHECK(rd::rate_at(p, ham, D) == doctest::Approx(R).epsilon(1e-5));
  }
  CHECK(rd::distortion_rate(p, ham, 0.0) == doctest::Approx(0.5));  // drop to the likeliest letter
  // asymmetric distortion picks the cheapest column:
  // costs 1.0 / 0.7 / 3.2 under p = (0.5, 0.3, 0.2)
  const DistortionMatrix d(3, 3, {0.0, 1.0, 4.0, 2.0, 0.0, 4.0, 2.0, 1.0, 0.0});
  CHECK(rd::zero_rate_letter(p, d) == 1);
  CHECK(rd::zero_rate_distortion(p, d) == doctest::Approx(0.7));
}

TEST_CASE("negative arguments are rejected") {
  const auto d = DistortionMatrix::hamming(2);
  const auto p = Distribution::bernoulli(0.5);
  CHECK_THROWS_AS(rd::distortion_rate(p, d, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(rd::rate_at(p, d, -0.1), std::invalid_argument);
  const auto j = JointDistribution::identity_coupling(p);
  CHECK_THROWS_AS(rd::side_info_distortion_rate(j, d, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(rd::side_info_rate_at(j, d, -0.1), std::invalid_argument);
}
