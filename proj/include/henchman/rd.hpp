#pragma once

#include <optional>
#include <vector>

#include "henchman/prob.hpp"

namespace henchman::rd {

struct Options {
  int max_iters = 10000;
  double tol = 1e-10;        // successive rate change, bits
  double inversion_tol = 1e-11;  // bisection target tolerance on rate/distortion
};

// One point on the rate-distortion curve, with the optimizing test channel.
struct RDPoint {
  double rate = 0.0;        // bits
  double distortion = 0.0;
  double slope = 0.0;       // dR/dD in bits, <= 0 (0 marks the zero-rate end)
  Channel test_channel;     // P_{Z|X}
};

// Alternating-minimization fixed point at Lagrange weight lambda (nats per
// distortion unit). lambda = +infinity solves the zero-distortion endpoint.
RDPoint blahut_arimoto(const Distribution& px, const DistortionMatrix& d, double lambda,
                       const Options& opts = {});

// Sweep of slope values (bits, <= 0). Output is sorted by distortion with
// nonincreasing rate.
std::vector<RDPoint> rd_curve(const Distribution& px, const DistortionMatrix& d,
                              const std::vector<double>& slope_grid, const Options& opts = {});

// Point-to-point distortion-rate function D(R) and its inverse R(D).
double distortion_rate(const Distribution& px, const DistortionMatrix& d, double rate,
                       const Options& opts = {});
RDPoint distortion_rate_point(const Distribution& px, const DistortionMatrix& d, double rate,
                              const Options& opts = {});
double rate_at(const Distribution& px, const DistortionMatrix& d, double distortion,
               const Options& opts = {});

// Smallest achievable expected distortion at rate zero: min_z E d(X, z).
double zero_rate_distortion(const Distribution& px, const DistortionMatrix& d);
int zero_rate_letter(const Distribution& px, const DistortionMatrix& d);

struct SideInfoRDPoint {
  double rate = 0.0;        // I(X;Z|Y), bits
  double distortion = 0.0;  // E d(X,Z)
  std::vector<Channel> per_y_channels;  // P_{Z|X,Y=y}, one per side-information symbol
};

// Distortion-rate function with side information at encoder and decoder:
// min E d(X,Z) over P_{Z|XY} with I(X;Z|Y) <= rate. Solved by a common
// Lagrange weight across the conditional sources P_{X|Y=y}, bisected to meet
// the rate budget.
double side_info_distortion_rate(const JointDistribution& pxy, const DistortionMatrix& d,
                                 double rate, const Options& opts = {});
SideInfoRDPoint side_info_distortion_rate_point(const JointDistribution& pxy,
                                                const DistortionMatrix& d, double rate,
                                                const Options& opts = {});
// Inverse: R_Y(D) = min I(X;Z|Y) subject to E d <= distortion.
double side_info_rate_at(const JointDistribution& pxy, const DistortionMatrix& d,
                         double distortion, const Options& opts = {});

// min over source laws Q within total variation `delta` of px of
// R(distortion, Q) + KL(Q || px), in bits. delta = 0 pins Q = px; any
// delta >= 1 is an unrestricted scan of the simplex. Grid search with local
// refinement; alphabets up to 4 letters.
double rd_exponent(const Distribution& px, const DistortionMatrix& d, double distortion,
                   double delta, const Options& opts = {});

}  // namespace henchman::rd
