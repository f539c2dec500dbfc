#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "henchman/prob.hpp"
#include "henchman/cipher.hpp"
#include "henchman/rd.hpp"

namespace henchman::io {

using nlohmann::json;

// All numeric output is printed with 9 significant digits so repeated runs
// diff cleanly.
std::string format_number(double v);

// {"alphabet": n, "mass": [...]}
json to_json(const Distribution& d);
Distribution distribution_from_json(const json& j);

// {"inputs": a, "outputs": b, "rows": [[...], ...]}
json to_json(const Channel& c);
Channel channel_from_json(const json& j);

// {"rows": r, "cols": c, "data": [...]} row-major
json to_json(const JointDistribution& jd);
JointDistribution joint_from_json(const json& j);

json to_json(const DistortionMatrix& d);
DistortionMatrix distortion_from_json(const json& j);

// Codebooks as plain symbol arrays for test fixtures.
json to_json(const cipher::Codebook& cb);

// Rate-distortion curves as CSV with columns slope, rate, distortion.
std::string rd_curve_csv(const std::vector<rd::RDPoint>& points);

struct Polyline {
  std::vector<double> xs, ys;
  std::string label;
};

// Minimal deterministic SVG: axes, ticks and polylines.
std::string render_svg(const std::vector<Polyline>& lines, const std::string& x_label,
                       const std::string& y_label);

std::string csv_row(const std::vector<std::string>& cells);

void write_file(const std::string& path, const std::string& contents);

}  // namespace henchman::io
