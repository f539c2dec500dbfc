#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "henchman/cipher.hpp"
#include "henchman/prob.hpp"
#include "henchman/rd.hpp"

namespace henchman::subproblem {

// Thrown by decay_experiment outside the decay regime.
struct regime_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lossy compression of a codeword drawn uniformly from a fixed codebook,
// possibly observed through a memoryless channel. The codebook must be
// single-indexed (R0 = 0).
struct Instance {
  cipher::Codebook codebook;           // x-codebook, or y-codebook when noisy
  std::optional<Channel> x_given_y;    // noisy variant: P_{X|Y}
  DistortionMatrix d;
  double R = 0.0;      // description rate
  double D = 0.0;      // distortion target
  double delta = 0.1;  // typicality radius used by the interval bounds

  bool noisy() const { return x_given_y.has_value(); }
  int x_alphabet() const {
    return noisy() ? x_given_y->output_size() : codebook.generator.size();
  }
  // Joint law of (X, Y) for the noisy variant, X as rows.
  JointDistribution joint() const;
};

struct SuccessBounds {
  double lower = 0.0, upper = 0.0;
  bool exact = false;
};

// Best achievable P[d(X^n(J), Z^n) <= D] over z-codebooks of size
// ceil(2^{nR}). Exact by subset enumeration at tiny scale (binary, n <= 3,
// list size <= 4); otherwise a certified interval: greedy max-coverage lower
// bound and the union upper bound over single reconstruction words.
SuccessBounds best_code_success(const Instance& inst);
// Force the interval bounds regardless of scale.
SuccessBounds success_interval(const Instance& inst);

// Indicator sum (lossless) or exact conditional-probability sum (noisy) over
// codewords, for one reconstruction word.
double xi_sum(const Instance& inst, const Sequence& z, double delta);
double xi_term(const Instance& inst, int j, const Sequence& z, double delta);
// Probability that the j-th codeword's source output is (jointly) typical.
double typical_mass(const Instance& inst, int j, double delta);

// P[sum of m i.i.d. Bern(p) > k] <= (e m p / k)^k.
double chernoff_binary(double m, double p, double k);
// Variables on [0,a] with mean p: (e m p / k)^{k/a}.
double chernoff_bounded(double m, double p, double k, double a);

struct TauDescriptor {
  enum class Kind { Polynomial, SqrtExp };
  Kind kind = Kind::Polynomial;
  double c = 1.0;      // scale
  double power = 1.0;  // exponent for the polynomial family: c / n^power
  double value(int n) const;
};

struct DecayParams {
  Distribution generator;            // P_X, or P_Y for the noisy variant
  std::optional<Channel> x_given_y;  // noisy variant
  DistortionMatrix d;
  double R = 0.0;    // description rate
  double R_C = 0.0;  // codebook rate
  double D = 0.0;
  double delta = 0.1;
  std::vector<int> ns;
  std::vector<std::uint64_t> seeds;
  TauDescriptor tau;
};

struct RegimeCheck {
  double r_d = 0.0;        // R(D)
  double r_yd = 0.0;       // R_Y(D) (0 for the lossless variant)
  double threshold = 0.0;  // min{R(D), R_C} or min{R(D), R_Y(D) + R_C}
  bool refused = false;    // R >= threshold
};
RegimeCheck check_regime(const DecayParams& p, const rd::Options& opts = {});

struct DecayRow {
  int n = 0;
  std::uint64_t seed = 0;
  double lower = 0.0, upper = 0.0, tau = 0.0;
  bool exceeds = false;  // upper endpoint above tau_n
};

// Per-(n, seed) success bounds against the vanishing threshold tau_n.
// Refuses with regime_error when R >= min{R(D), R_Y(D) + R_C}.
std::vector<DecayRow> decay_experiment(const DecayParams& p, const rd::Options& opts = {});

}  // namespace henchman::subproblem
