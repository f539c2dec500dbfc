#include "henchman/prob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace henchman {

namespace {

void check_mass(const std::vector<double>& mass, const char* what) {
  if (mass.empty()) throw std::invalid_argument(std::string(what) + ": empty mass vector");
  double total = 0.0;
  for (double v : mass) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > kProbTolerance) {
    throw std::invalid_argument(std::string(what) + ": mass sums to " + std::to_string(total));
  }
}

}  // namespace

Distribution::Distribution(std::vector<double> mass) : mass_(std::move(mass)) {
  check_mass(mass_, "Distribution");
}

Distribution Distribution::bernoulli(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("bernoulli: p out of range");
  return Distribution({1.0 - p, p});
}

Distribution Distribution::uniform(int size) {
  if (size <= 0) throw std::invalid_argument("uniform: size must be positive");
  return Distribution(std::vector<double>(static_cast<std::size_t>(size), 1.0 / size));
}

Distribution Distribution::point_mass(int size, int at) {
  if (at < 0 || at >= size) throw std::invalid_argument("point_mass: index out of range");
  std::vector<double> m(static_cast<std::size_t>(size), 0.0);
  m[static_cast<std::size_t>(at)] = 1.0;
  return Distribution(std::move(m));
}

Channel::Channel(std::vector<Distribution> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("Channel: no rows");
  const int out = rows_.front().size();
  for (const auto& r : rows_) {
    if (r.size() != out) throw std::invalid_argument("Channel: ragged rows");
  }
}

Channel Channel::identity(int size) {
  std::vector<Distribution> rows;
  rows.reserve(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) rows.push_back(Distribution::point_mass(size, i));
  return Channel(std::move(rows));
}

Channel Channel::binary_symmetric(double crossover) {
  return Channel({Distribution({1.0 - crossover, crossover}),
                  Distribution({crossover, 1.0 - crossover})});
}

Channel Channel::from_matrix(int inputs, int outputs, const std::vector<double>& m) {
  if (m.size() != static_cast<std::size_t>(inputs) * outputs) {
    throw std::invalid_argument("Channel::from_matrix: size mismatch");
  }
  std::vector<Distribution> rows;
  rows.reserve(static_cast<std::size_t>(inputs));
  for (int x = 0; x < inputs; ++x) {
    rows.emplace_back(std::vector<double>(m.begin() + static_cast<std::ptrdiff_t>(x) * outputs,
                                          m.begin() + static_cast<std::ptrdiff_t>(x + 1) * outputs));
  }
  return Channel(std::move(rows));
}

JointDistribution::JointDistribution(int rows, int cols, std::vector<double> mass)
    : rows_(rows), cols_(cols), mass_(std::move(mass)) {
  if (rows_ <= 0 || cols_ <= 0 || mass_.size() != static_cast<std::size_t>(rows_) * cols_) {
    throw std::invalid_argument("JointDistribution: dimension mismatch");
  }
  check_mass(mass_, "JointDistribution");
}

JointDistribution JointDistribution::from_source_channel(const Distribution& px,
                                                         const Channel& py_x) {
  if (py_x.input_size() != px.size()) {
    throw std::invalid_argument("from_source_channel: alphabet mismatch");
  }
  const int rows = px.size(), cols = py_x.output_size();
  std::vector<double> m(static_cast<std::size_t>(rows) * cols);
  for (int x = 0; x < rows; ++x) {
    for (int y = 0; y < cols; ++y) {
      m[static_cast<std::size_t>(x) * cols + y] = px[x] * py_x.at(x, y);
    }
  }
  return JointDistribution(rows, cols, std::move(m));
}

JointDistribution JointDistribution::identity_coupling(const Distribution& px) {
  const int n = px.size();
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int x = 0; x < n; ++x) m[static_cast<std::size_t>(x) * n + x] = px[x];
  return JointDistribution(n, n, std::move(m));
}

JointDistribution JointDistribution::product(const Distribution& px, const Distribution& py) {
  const int rows = px.size(), cols = py.size();
  std::vector<double> m(static_cast<std::size_t>(rows) * cols);
  for (int x = 0; x < rows; ++x) {
    for (int y = 0; y < cols; ++y) m[static_cast<std::size_t>(x) * cols + y] = px[x] * py[y];
  }
  return JointDistribution(rows, cols, std::move(m));
}

Distribution JointDistribution::row_marginal() const {
  std::vector<double> m(static_cast<std::size_t>(rows_), 0.0);
  for (int x = 0; x < rows_; ++x) {
    for (int y = 0; y < cols_; ++y) m[static_cast<std::size_t>(x)] += at(x, y);
  }
  return Distribution(std::move(m));
}

Distribution JointDistribution::col_marginal() const {
  std::vector<double> m(static_cast<std::size_t>(cols_), 0.0);
  for (int x = 0; x < rows_; ++x) {
    for (int y = 0; y < cols_; ++y) m[static_cast<std::size_t>(y)] += at(x, y);
  }
  return Distribution(std::move(m));
}

Channel JointDistribution::conditional_given_col() const {
  std::vector<Distribution> rows;
  rows.reserve(static_cast<std::size_t>(cols_));
  for (int y = 0; y < cols_; ++y) {
    double py = 0.0;
    for (int x = 0; x < rows_; ++x) py += at(x, y);
    std::vector<double> cond(static_cast<std::size_t>(rows_));
    if (py > 0.0) {
      double acc = 0.0;
      for (int x = 0; x < rows_; ++x) {
        cond[static_cast<std::size_t>(x)] = at(x, y) / py;
        acc += cond[static_cast<std::size_t>(x)];
      }
      // renormalize away rounding
      for (auto& v : cond) v /= acc;
    } else {
      std::fill(cond.begin(), cond.end(), 1.0 / rows_);
    }
    rows.emplace_back(std::move(cond));
  }
  return Channel(std::move(rows));
}

TripleJoint::TripleJoint(int nx, int nz, int ny, std::vector<double> mass)
    : nx_(nx), nz_(nz), ny_(ny), mass_(std::move(mass)) {
  if (mass_.size() != static_cast<std::size_t>(nx_) * nz_ * ny_) {
    throw std::invalid_argument("TripleJoint: dimension mismatch");
  }
  check_mass(mass_, "TripleJoint");
}

DistortionMatrix::DistortionMatrix(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ <= 0 || cols_ <= 0 || values_.size() != static_cast<std::size_t>(rows_) * cols_) {
    throw std::invalid_argument("DistortionMatrix: dimension mismatch");
  }
  for (int x = 0; x < rows_; ++x) {
    bool has_zero = false;
    for (int z = 0; z < cols_; ++z) {
      const double v = at(x, z);
      if (!(v >= 0.0)) throw std::invalid_argument("DistortionMatrix: negative entry");
      if (v == 0.0) has_zero = true;
    }
    if (!has_zero) {
      throw std::invalid_argument("DistortionMatrix: row " + std::to_string(x) +
                                  " has no zero entry");
    }
  }
}

DistortionMatrix DistortionMatrix::hamming(int size) { return hamming(size, size); }

DistortionMatrix DistortionMatrix::hamming(int rows, int cols) {
  if (cols < rows) throw std::invalid_argument("hamming: cols must be >= rows");
  std::vector<double> v(static_cast<std::size_t>(rows) * cols, 1.0);
  for (int x = 0; x < rows; ++x) v[static_cast<std::size_t>(x) * cols + x] = 0.0;
  return DistortionMatrix(rows, cols, std::move(v));
}

double DistortionMatrix::max_entry() const {
  return *std::max_element(values_.begin(), values_.end());
}

std::uint64_t Sequence::rank(int alphabet) const {
  std::uint64_t r = 0;
  for (std::uint8_t s : symbols) {
    r = r * static_cast<std::uint64_t>(alphabet) + s;
  }
  return r;
}

Sequence Sequence::from_rank(std::uint64_t rank, int n, int alphabet) {
  std::vector<std::uint8_t> s(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rank % alphabet);
    rank /= static_cast<std::uint64_t>(alphabet);
  }
  return Sequence(std::move(s));
}

Sequence Sequence::iid(int n, const Distribution& p, Rng& rng) {
  std::vector<std::uint8_t> s(static_cast<std::size_t>(n));
  for (auto& sym : s) sym = static_cast<std::uint8_t>(p.sample(rng));
  return Sequence(std::move(s));
}

double tv_distance(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw std::invalid_argument("tv_distance: alphabet mismatch");
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

double entropy_of_mass(const std::vector<double>& mass) {
  double h = 0.0;
  for (double v : mass) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double entropy(const Distribution& p) { return entropy_of_mass(p.mass()); }

double mutual_information(const JointDistribution& pxy) {
  return entropy(pxy.row_marginal()) + entropy(pxy.col_marginal()) - entropy_of_mass(pxy.mass());
}

double conditional_mutual_information(const TripleJoint& pxzy) {
  // sum_y P(y) I(X;Z | Y=y)
  double total = 0.0;
  for (int y = 0; y < pxzy.ny(); ++y) {
    double py = 0.0;
    for (int x = 0; x < pxzy.nx(); ++x) {
      for (int z = 0; z < pxzy.nz(); ++z) py += pxzy.at(x, z, y);
    }
    if (py <= 0.0) continue;
    std::vector<double> slice(static_cast<std::size_t>(pxzy.nx()) * pxzy.nz());
    for (int x = 0; x < pxzy.nx(); ++x) {
      for (int z = 0; z < pxzy.nz(); ++z) {
        slice[static_cast<std::size_t>(x) * pxzy.nz() + z] = pxzy.at(x, z, y) / py;
      }
    }
    total += py * mutual_information(JointDistribution(pxzy.nx(), pxzy.nz(), std::move(slice)));
  }
  return total;
}

double kl_divergence(const Distribution& q, const Distribution& p) {
  if (q.size() != p.size()) throw std::invalid_argument("kl_divergence: alphabet mismatch");
  double acc = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    if (q[i] == 0.0) continue;
    if (p[i] == 0.0) return std::numeric_limits<double>::infinity();
    acc += q[i] * std::log2(q[i] / p[i]);
  }
  return acc;
}

Distribution empirical_type(const Sequence& x, int alphabet) {
  if (x.length() == 0) throw std::invalid_argument("empirical_type: empty sequence");
  std::vector<double> m(static_cast<std::size_t>(alphabet), 0.0);
  for (std::uint8_t s : x.symbols) {
    if (s >= alphabet) throw std::invalid_argument("empirical_type: symbol out of alphabet");
    m[s] += 1.0;
  }
  for (auto& v : m) v /= x.length();
  return Distribution(std::move(m));
}

JointDistribution empirical_joint_type(const Sequence& x, const Sequence& y, int ax, int ay) {
  if (x.length() != y.length() || x.length() == 0) {
    throw std::invalid_argument("empirical_joint_type: length mismatch");
  }
  std::vector<double> m(static_cast<std::size_t>(ax) * ay, 0.0);
  for (int i = 0; i < x.length(); ++i) {
    m[static_cast<std::size_t>(x[i]) * ay + y[i]] += 1.0;
  }
  for (auto& v : m) v /= x.length();
  return JointDistribution(ax, ay, std::move(m));
}

bool is_typical(const Sequence& x, const Distribution& p, double delta) {
  return tv_distance(empirical_type(x, p.size()), p) < delta;
}

bool jointly_typical(const Sequence& x, const Sequence& y, const JointDistribution& pxy,
                     double delta) {
  const JointDistribution t = empirical_joint_type(x, y, pxy.rows(), pxy.cols());
  double acc = 0.0;
  for (int a = 0; a < pxy.rows(); ++a) {
    for (int b = 0; b < pxy.cols(); ++b) acc += std::abs(t.at(a, b) - pxy.at(a, b));
  }
  return 0.5 * acc < delta;
}

double avg_distortion(const Sequence& x, const Sequence& z, const DistortionMatrix& d) {
  if (x.length() != z.length() || x.length() == 0) {
    throw std::invalid_argument("avg_distortion: length mismatch");
  }
  double acc = 0.0;
  for (int i = 0; i < x.length(); ++i) acc += d.at(x[i], z[i]);
  return acc / x.length();
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace henchman
