#include "henchman/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace henchman::io {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

json to_json(const Distribution& d) {
  return json{{"alphabet", d.size()}, {"mass", d.mass()}};
}

Distribution distribution_from_json(const json& j) {
  if (!j.contains("mass")) throw std::invalid_argument("distribution: missing mass");
  std::vector<double> mass = j.at("mass").get<std::vector<double>>();
  if (j.contains("alphabet") && j.at("alphabet").get<std::size_t>() != mass.size()) {
    throw std::invalid_argument("distribution: alphabet/mass size mismatch");
  }
  return Distribution(std::move(mass));
}

json to_json(const Channel& c) {
  json rows = json::array();
  for (int x = 0; x < c.input_size(); ++x) rows.push_back(c.row(x).mass());
  return json{{"inputs", c.input_size()}, {"outputs", c.output_size()}, {"rows", rows}};
}

Channel channel_from_json(const json& j) {
  if (!j.contains("rows")) throw std::invalid_argument("channel: missing rows");
  std::vector<Distribution> rows;
  for (const auto& r : j.at("rows")) rows.emplace_back(r.get<std::vector<double>>());
  return Channel(std::move(rows));
}

json to_json(const JointDistribution& jd) {
  return json{{"rows", jd.rows()}, {"cols", jd.cols()}, {"data", jd.mass()}};
}

JointDistribution joint_from_json(const json& j) {
  return JointDistribution(j.at("rows").get<int>(), j.at("cols").get<int>(),
                           j.at("data").get<std::vector<double>>());
}

json to_json(const DistortionMatrix& d) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(d.rows()) * d.cols());
  for (int x = 0; x < d.rows(); ++x) {
    for (int z = 0; z < d.cols(); ++z) data.push_back(d.at(x, z));
  }
  return json{{"rows", d.rows()}, {"cols", d.cols()}, {"data", data}};
}

DistortionMatrix distortion_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "hamming") {
    throw std::invalid_argument("distortion: bare \"hamming\" needs an alphabet size");
  }
  return DistortionMatrix(j.at("rows").get<int>(), j.at("cols").get<int>(),
                          j.at("data").get<std::vector<double>>());
}

json to_json(const cipher::Codebook& cb) {
  json entries = json::array();
  for (const Sequence& s : cb.entries) {
    entries.push_back(std::vector<int>(s.symbols.begin(), s.symbols.end()));
  }
  return json{{"n", cb.n},       {"R", cb.R},   {"R0", cb.R0},
              {"seed", cb.seed}, {"M", cb.M},   {"K", cb.K},
              {"generator", to_json(cb.generator)}, {"entries", entries}};
}

std::string rd_curve_csv(const std::vector<rd::RDPoint>& points) {
  std::string out = csv_row({"slope", "rate", "distortion"});
  for (const auto& p : points) {
    out += csv_row({format_number(p.slope), format_number(p.rate), format_number(p.distortion)});
  }
  return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") != std::string::npos) {
      out += '"';
      for (char ch : c) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    } else {
      out += c;
    }
  }
  out += '\n';
  return out;
}

std::string render_svg(const std::vector<Polyline>& lines, const std::string& x_label,
                       const std::string& y_label) {
  const int w = 640, h = 480, ml = 60, mr = 20, mt = 20, mb = 50;
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const auto& l : lines) {
    for (std::size_t i = 0; i < l.xs.size(); ++i) {
      if (first) {
        xmin = xmax = l.xs[i];
        ymin = ymax = l.ys[i];
        first = false;
      }
      xmin = std::min(xmin, l.xs[i]);
      xmax = std::max(xmax, l.xs[i]);
      ymin = std::min(ymin, l.ys[i]);
      ymax = std::max(ymax, l.ys[i]);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\">\n";
  svg << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
      << h - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = xmin + (xmax - xmin) * t / 5.0;
    const double yv = ymin + (ymax - ymin) * t / 5.0;
    svg << "<line x1=\"" << format_number(px(xv)) << "\" y1=\"" << h - mb << "\" x2=\""
        << format_number(px(xv)) << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << format_number(px(xv)) << "\" y=\"" << h - mb + 18
        << "\" font-size=\"10\" text-anchor=\"middle\">" << format_number(xv) << "</text>\n";
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << format_number(py(yv)) << "\" x2=\"" << ml
        << "\" y2=\"" << format_number(py(yv)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << format_number(py(yv) + 3)
        << "\" font-size=\"10\" text-anchor=\"end\">" << format_number(yv) << "</text>\n";
  }
  svg << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
      << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label << "</text>\n";
  svg << "<text x=\"14\" y=\"" << (mt + h - mb) / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << (mt + h - mb) / 2 << ")\">" << y_label << "</text>\n";
  const char* colors[] = {"#1f6feb", "#d1242f", "#1a7f37", "#8250df"};
  int ci = 0;
  for (const auto& l : lines) {
    svg << "<polyline fill=\"none\" stroke=\"" << colors[ci % 4] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < l.xs.size(); ++i) {
      if (i) svg << ' ';
      svg << format_number(px(l.xs[i])) << ',' << format_number(py(l.ys[i]));
    }
    svg << "\"/>\n";
    ++ci;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << contents;
}

}  // namespace henchman::io
