#pragma once

#include <optional>
#include <string>
#include <vector>

#include "henchman/prob.hpp"
#include "henchman/rd.hpp"

namespace henchman::region {

struct LosslessQuery {
  double R = 0.0, R0 = 0.0, RL = 0.0;
  Distribution source;
  DistortionMatrix d_e;
};

struct LossyQuery {
  double R = 0.0, R0 = 0.0, RL = 0.0, D_B = 0.0;
  Distribution source;
  DistortionMatrix d_b;  // its column count fixes the reconstruction alphabet |Y|
  DistortionMatrix d_e;
};

// Largest eavesdropper distortion forcible in the lossless setting:
// D(RL) when R0 > RL, zero otherwise. Requires R >= H(source).
double lossless_max_eve_distortion(const LosslessQuery& q, const rd::Options& opts = {});

struct ChannelGridOptions {
  double step = 0.0;        // 0 = default: 0.02 for binary |Y|, 0.1 otherwise
  bool refine = true;       // one local refinement pass at step/10
  int jobs = 1;
};

struct LossyResult {
  bool feasible = false;
  double d_e_max = 0.0;
  std::optional<Channel> witness;  // maximizing P_{Y|X}
};

// Maximizes over P_{Y|X} on a per-row simplex grid, subject to I(X;Y) <= R
// and E d_B(X,Y) <= D_B, the bound D(RL) (RL < R0) or
// min{D(RL), D(RL - R0, P_XY)} (RL >= R0).
LossyResult lossy_max_eve_distortion(const LossyQuery& q, const ChannelGridOptions& grid = {},
                                     const rd::Options& opts = {});

enum class SweepVar { RL, R0, DB };
std::string to_string(SweepVar v);

struct SweepRow {
  double value = 0.0;
  bool feasible = false;
  double d_e_max = 0.0;
  std::optional<Channel> witness;
};

std::vector<SweepRow> sweep_lossless(const LosslessQuery& base, SweepVar var,
                                     const std::vector<double>& grid,
                                     const rd::Options& opts = {});
std::vector<SweepRow> sweep_lossy(const LossyQuery& base, SweepVar var,
                                  const std::vector<double>& grid,
                                  const ChannelGridOptions& gridopts = {},
                                  const rd::Options& opts = {});

}  // namespace henchman::region
