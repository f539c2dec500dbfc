#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "henchman/prob.hpp"
#include "henchman/rd.hpp"

namespace henchman::types {

// Joint (or marginal, when ay == 0) type: integer counts summing to n.
struct TypeIndex {
  int n = 0;
  int ax = 0;
  int ay = 0;                // 0 for a marginal type
  std::vector<int> counts;   // ax*ay (row-major) or ax entries

  int at(int a, int b) const { return counts[static_cast<std::size_t>(a) * ay + b]; }
  std::vector<int> x_counts() const;
  std::vector<int> y_counts() const;
};

std::uint64_t count_weak_compositions(int n, int cells);

// All joint types of pairs in X^n x Y^n. Guarded by the (n+1)^{|X||Y|}
// enumeration bound.
std::vector<TypeIndex> enumerate_joint_types(int n, int ax, int ay,
                                             std::uint64_t guard = std::uint64_t(1) << 24);

JointDistribution type_to_joint(const TypeIndex& t);
// A canonical sequence pair realizing the joint type.
std::pair<Sequence, Sequence> realize(const TypeIndex& t);

// Exact |T^n| for a marginal type: multinomial coefficient.
double log2_type_class_size(const std::vector<int>& counts);

// The set of x^n sequences with a prescribed count of each x-symbol within
// every group of positions sharing the same conditioning symbol. Enumerated
// lazily; nothing larger than one sequence is materialized.
class ConditionalShell {
 public:
  // counts[b][a] = number of positions i with cond[i] == b and x_i == a.
  ConditionalShell(const Sequence& cond, int cond_alphabet, int x_alphabet,
                   const std::vector<std::vector<int>>& counts);

  std::uint64_t size() const;  // product of multinomials
  bool empty() const { return empty_; }

  // Visit every member once; stop early if the visitor returns false.
  void for_each(const std::function<bool(const Sequence&)>& fn) const;

  int length() const { return static_cast<int>(position_of_.size()); }

 private:
  bool empty_ = false;
  // positions grouped by conditioning symbol
  std::vector<std::vector<int>> group_positions_;
  std::vector<std::vector<std::uint8_t>> group_start_;  // sorted symbol multiset per group
  std::vector<int> position_of_;                        // total length bookkeeping
};

// V-shell: all x^n with conditional type V given z^n. V must be consistent
// with the type of z (integer counts).
ConditionalShell v_shell(const Sequence& z, int z_alphabet, const Channel& v);
// Shell of x^n with (x^n, y^n) of exactly the given joint type.
ConditionalShell conditional_shell(const Sequence& y, const TypeIndex& joint_type);

struct CoveringCodebook {
  Sequence y;
  TypeIndex joint_type;
  double rate = 0.0;             // target rate r
  double cover_radius = 0.0;     // D(r, type) + tau
  std::vector<Sequence> entries;
  bool guarantee = false;        // every shell member covered within cover_radius
  double slack_bits = 0.0;       // max(0, log2|entries| - n*r)
};

// Greedy set cover of the conditional shell within D(r, joint_type) + tau.
// Candidates are sequences over the support of the side-information-optimal
// test channels (all of Z^n when the support is full). The size budget is
// ceil(2^{n(r + slack_budget)}).
CoveringCodebook covering_codebook(const Sequence& y, const TypeIndex& joint_type, double r,
                                   double tau, const DistortionMatrix& d,
                                   double slack_budget = 0.25, const rd::Options& opts = {});

}  // namespace henchman::types
