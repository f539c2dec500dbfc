#pragma once

#include <cstdint>
#include <vector>

#include "henchman/cipher.hpp"
#include "henchman/prob.hpp"
#include "henchman/rd.hpp"

namespace henchman::adversary {

// Per-message reconstruction lists, each of size <= list_cap. A single shared
// list (lists.size() == 1) serves every message.
struct ReconstructionList {
  int list_cap = 0;
  std::vector<std::vector<Sequence>> lists;

  const std::vector<Sequence>& for_message(int m) const {
    return lists.size() == 1 ? lists.front() : lists[static_cast<std::size_t>(m)];
  }
};

double list_min_distortion(const std::vector<Sequence>& list, const Sequence& x,
                           const DistortionMatrix& d);

// Henchman encoder/decoder pair at exhaustive scale: dense tables over x-rank.
struct HenchmanCode {
  int n = 0, x_alphabet = 0, M = 0, list_cap = 0;
  std::vector<std::vector<Sequence>> decoder;  // [m][m_H] -> z
  std::vector<int> encoder;                    // [x_rank * M + m] -> m_H

  int encode(const Sequence& x, int m) const {
    return encoder[x.rank(x_alphabet) * M + static_cast<std::uint64_t>(m)];
  }
  double achieved_distortion(const Sequence& x, int m, const DistortionMatrix& d) const {
    return avg_distortion(x, decoder[static_cast<std::size_t>(m)]
                                 [static_cast<std::size_t>(encode(x, m))], d);
  }
};

// The two directions of the list <-> henchman equivalence. The derived
// henchman picks the minimum-distortion list index (ties to the smallest);
// the derived list is the decoder image per message.
HenchmanCode list_to_henchman(const ReconstructionList& list, int n, int x_alphabet,
                              const DistortionMatrix& d);
ReconstructionList henchman_to_list(const HenchmanCode& h);

// Exact min over all henchman codes of P[d(X^n, Z^n) >= D] under the exact
// induced joint of the cipher code. Per message, the optimal size-L subset of
// Z^n is found by enumeration. Guard: binary, n <= 3, list size <= 4.
double optimal_attack_value(const cipher::CipherCode& code, double RL, double D,
                            const DistortionMatrix& d_e);

// Message-ignoring attack: a single list drawn i.i.d. from the output marginal
// of the D(RL)-optimal test channel.
ReconstructionList p2p_attack(const Distribution& px, const DistortionMatrix& d_e, double RL,
                              int n, std::uint64_t seed, const rd::Options& opts = {});

// Key-enumeration attack: the henchman sends the best decryption index.
struct KeyEnumResult {
  int key_index = 0;
  Sequence z;
  double distortion = 0.0;
};
KeyEnumResult key_enumeration_attack(const cipher::CipherCode& code, const Sequence& x, int m,
                                     const DistortionMatrix& d_e);

// Finite-n diagnostic for the joint type of a (source, reconstruction) pair
// produced by a rate-limited code: its mutual information concentrates below
// the code rate, its distortion below the fidelity target, and its x-marginal
// near the source. Membership in that set is what the type-based attack
// relies on.
struct JointTypeDiagnostic {
  double mutual_info = 0.0;  // I(T_xy), bits
  double fidelity = 0.0;     // E_T d_B
  double marginal_tv = 0.0;  // ||T_x - P_X||_TV
  bool in_set = false;       // all three within eps of (R, D_B, 0)
};
JointTypeDiagnostic joint_type_diagnostic(const Sequence& x, const Sequence& y, double rate,
                                          double d_b_target, const Distribution& px,
                                          const DistortionMatrix& d_b, double eps);

// Side-information attack: describe the joint type of (x, y), then the index
// of x in a covering codebook for that type at rate r.
struct TypecoverResult {
  double description_bits = 0.0;  // type index + codeword index
  double slack_bits = 0.0;        // covering slack beyond n*r
  double promised_distortion = 0.0;  // D(r, T_xy) + tau
  double achieved_distortion = 0.0;
  bool covered = false;  // covering construction succeeded for the whole shell
  Sequence z;
};
TypecoverResult typecover_attack(const Sequence& x, const Sequence& y, double r,
                                 const DistortionMatrix& d_e, double tau,
                                 double slack_budget = 0.25, const rd::Options& opts = {});

}  // namespace henchman::adversary
