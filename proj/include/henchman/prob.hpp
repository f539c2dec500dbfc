#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "henchman/rng.hpp"

namespace henchman {

// Thrown when an exact-enumeration or memory guard is exceeded.
struct guard_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an iterative solver fails to converge.
struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a query lies outside the feasible parameter region.
struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kProbTolerance = 1e-12;

// Finite-alphabet probability distribution. Validated on construction and
// immutable afterwards.
class Distribution {
 public:
  // Single-letter point mass; the valid trivial distribution.
  Distribution() : mass_{1.0} {}
  explicit Distribution(std::vector<double> mass);

  static Distribution bernoulli(double p);  // mass (1-p, p)
  static Distribution uniform(int size);
  static Distribution point_mass(int size, int at);

  int size() const { return static_cast<int>(mass_.size()); }
  double operator[](int i) const { return mass_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& mass() const { return mass_; }

  int sample(Rng& rng) const { return rng.sample_mass(mass_); }

  bool operator==(const Distribution& other) const { return mass_ == other.mass_; }

 private:
  std::vector<double> mass_;
};

// Conditional distribution: one Distribution per input symbol.
class Channel {
 public:
  // Trivial single-letter identity.
  Channel() : rows_{Distribution()} {}
  explicit Channel(std::vector<Distribution> rows);

  static Channel identity(int size);
  static Channel binary_symmetric(double crossover);
  // Rows given as a dense row-major matrix.
  static Channel from_matrix(int inputs, int outputs, const std::vector<double>& m);

  int input_size() const { return static_cast<int>(rows_.size()); }
  int output_size() const { return rows_.front().size(); }
  const Distribution& row(int x) const { return rows_[static_cast<std::size_t>(x)]; }
  double at(int x, int y) const { return rows_[static_cast<std::size_t>(x)][y]; }

 private:
  std::vector<Distribution> rows_;
};

// Joint distribution over a pair of finite alphabets, row-major.
class JointDistribution {
 public:
  JointDistribution(int rows, int cols, std::vector<double> mass);

  // P_XY = P_X * P_{Y|X}.
  static JointDistribution from_source_channel(const Distribution& px, const Channel& py_x);
  // X = Y with marginal px.
  static JointDistribution identity_coupling(const Distribution& px);
  static JointDistribution product(const Distribution& px, const Distribution& py);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double at(int x, int y) const { return mass_[static_cast<std::size_t>(x) * cols_ + y]; }
  const std::vector<double>& mass() const { return mass_; }

  Distribution row_marginal() const;  // over the row alphabet
  Distribution col_marginal() const;
  // P_{X|Y=y} for every y with positive marginal; rows with zero marginal get
  // a uniform placeholder (callers weight by the marginal).
  Channel conditional_given_col() const;

 private:
  int rows_, cols_;
  std::vector<double> mass_;
};

// Three-way joint over (X, Z, Y), used for I(X;Z|Y). Layout: x-major, then z, then y.
class TripleJoint {
 public:
  TripleJoint(int nx, int nz, int ny, std::vector<double> mass);
  int nx() const { return nx_; }
  int nz() const { return nz_; }
  int ny() const { return ny_; }
  double at(int x, int z, int y) const {
    return mass_[(static_cast<std::size_t>(x) * nz_ + z) * ny_ + y];
  }

 private:
  int nx_, nz_, ny_;
  std::vector<double> mass_;
};

// Per-letter distortion measure. Every row must contain a zero entry.
class DistortionMatrix {
 public:
  DistortionMatrix(int rows, int cols, std::vector<double> values);

  static DistortionMatrix hamming(int size);
  // Rectangular variant: d(x,z) = 1{x != z}; requires cols >= rows so every
  // row keeps its zero entry.
  static DistortionMatrix hamming(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double at(int x, int z) const { return values_[static_cast<std::size_t>(x) * cols_ + z]; }
  double max_entry() const;

 private:
  int rows_, cols_;
  std::vector<double> values_;
};

// Fixed-length sequence of alphabet indices.
struct Sequence {
  std::vector<std::uint8_t> symbols;

  Sequence() = default;
  explicit Sequence(std::vector<std::uint8_t> s) : symbols(std::move(s)) {}
  Sequence(std::initializer_list<int> s) {
    symbols.reserve(s.size());
    for (int v : s) symbols.push_back(static_cast<std::uint8_t>(v));
  }

  int length() const { return static_cast<int>(symbols.size()); }
  std::uint8_t operator[](int i) const { return symbols[static_cast<std::size_t>(i)]; }

  // Mixed-radix rank with symbol 0 as the most significant digit.
  std::uint64_t rank(int alphabet) const;
  static Sequence from_rank(std::uint64_t rank, int n, int alphabet);
  static Sequence iid(int n, const Distribution& p, Rng& rng);

  bool operator==(const Sequence& other) const { return symbols == other.symbols; }
};

// --- information measures (bits) ---

double tv_distance(const Distribution& p, const Distribution& q);
double entropy(const Distribution& p);
double entropy_of_mass(const std::vector<double>& mass);  // accepts unnormalized slices
double mutual_information(const JointDistribution& pxy);
double conditional_mutual_information(const TripleJoint& pxzy);  // I(X;Z|Y)
double kl_divergence(const Distribution& q, const Distribution& p);

// --- empirical statistics ---

Distribution empirical_type(const Sequence& x, int alphabet);
JointDistribution empirical_joint_type(const Sequence& x, const Sequence& y, int ax, int ay);
bool is_typical(const Sequence& x, const Distribution& p, double delta);
bool jointly_typical(const Sequence& x, const Sequence& y, const JointDistribution& pxy,
                     double delta);
double avg_distortion(const Sequence& x, const Sequence& z, const DistortionMatrix& d);

double binary_entropy(double p);  // h(p) in bits

}  // namespace henchman
