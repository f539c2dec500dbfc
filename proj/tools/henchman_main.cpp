#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "henchman/adversary.hpp"
#include "henchman/cipher.hpp"
#include "henchman/io.hpp"
#include "henchman/prob.hpp"
#include "henchman/rd.hpp"
#include "henchman/region.hpp"
#include "henchman/subproblem.hpp"
#include "henchman/types_util.hpp"

using nlohmann::json;
using namespace henchman;

namespace {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitGuard = 3;

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return j;
}

const json& need(const json& j, const char* key) {
  if (!j.contains(key)) throw config_error(std::string("missing config key: ") + key);
  return j.at(key);
}

double need_number(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number()) throw config_error(std::string("key must be a number: ") + key);
  return v.get<double>();
}

Distribution parse_distribution(const json& j, const char* what) {
  try {
    return io::distribution_from_json(j);
  } catch (const std::exception& e) {
    throw config_error(std::string(what) + ": " + e.what());
  }
}

DistortionMatrix parse_distortion(const json& j, const char* what) {
  try {
    if (j.is_object() && j.contains("hamming")) {
      const auto& h = j.at("hamming");
      if (h.is_array() && h.size() == 2) {
        return DistortionMatrix::hamming(h.at(0).get<int>(), h.at(1).get<int>());
      }
      return DistortionMatrix::hamming(h.get<int>());
    }
    return io::distortion_from_json(j);
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(std::string(what) + ": " + e.what());
  }
}

Channel parse_channel(const json& j, const char* what) {
  try {
    return io::channel_from_json(j);
  } catch (const std::exception& e) {
    throw config_error(std::string(what) + ": " + e.what());
  }
}

std::vector<double> parse_grid(const json& j) {
  if (j.contains("values")) {
    const auto vals = j.at("values").get<std::vector<double>>();
    if (vals.empty()) throw config_error("sweep grid is empty");
    return vals;
  }
  if (j.contains("start") && j.contains("stop") && j.contains("count")) {
    const double start = j.at("start").get<double>();
    const double stop = j.at("stop").get<double>();
    const int count = j.at("count").get<int>();
    if (count < 1) throw config_error("sweep grid count must be >= 1");
    std::vector<double> vals;
    for (int i = 0; i < count; ++i) {
      vals.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
    }
    return vals;
  }
  throw config_error("sweep grid needs either \"values\" or start/stop/count");
}

std::vector<std::uint64_t> parse_seeds(const json& j, std::uint64_t base_seed) {
  if (j.contains("seeds")) return j.at("seeds").get<std::vector<std::uint64_t>>();
  const int count = j.value("num_seeds", 1);
  if (count < 1) throw config_error("num_seeds must be >= 1");
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(base_seed + static_cast<std::uint64_t>(i));
  return seeds;
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

// --- region ---

int cmd_region(const json& cfg, const std::string& out_dir, const std::string& format, int jobs) {
  const std::string mode = need(cfg, "mode").get<std::string>();
  const Distribution source = parse_distribution(need(cfg, "source"), "source");
  const DistortionMatrix d_e = parse_distortion(need(cfg, "d_e"), "d_e");
  const json& sweep = need(cfg, "sweep");
  const std::string var_name = need(sweep, "var").get<std::string>();
  const std::vector<double> grid = parse_grid(sweep);

  region::SweepVar var;
  if (var_name == "rl") {
    var = region::SweepVar::RL;
  } else if (var_name == "r0") {
    var = region::SweepVar::R0;
  } else if (var_name == "d_b") {
    var = region::SweepVar::DB;
  } else {
    throw config_error("sweep var must be one of rl, r0, d_b");
  }

  std::vector<region::SweepRow> rows;
  if (mode == "lossless") {
    region::LosslessQuery q{need_number(cfg, "r"), need_number(cfg, "r0"),
                            need_number(cfg, "rl"), source, d_e};
    rows = region::sweep_lossless(q, var, grid);
  } else if (mode == "lossy") {
    region::LossyQuery q{need_number(cfg, "r"),  need_number(cfg, "r0"),
                         need_number(cfg, "rl"), need_number(cfg, "d_b_max"),
                         source,                 parse_distortion(need(cfg, "d_b"), "d_b"),
                         d_e};
    region::ChannelGridOptions gopts;
    gopts.step = cfg.value("y_step", 0.0);
    gopts.jobs = jobs;
    rows = region::sweep_lossy(q, var, grid, gopts);
  } else {
    throw config_error("mode must be lossless or lossy");
  }

  std::string csv = io::csv_row({"sweep_var", "value", "d_e_max", "feasible", "witness_channel"});
  for (const auto& row : rows) {
    std::string witness;
    if (row.witness) witness = io::to_json(*row.witness).dump();
    csv += io::csv_row({var_name, io::format_number(row.value), io::format_number(row.d_e_max),
                        row.feasible ? "1" : "0", witness});
  }
  io::write_file(out_path(out_dir, "region.csv"), csv);

  if (format == "svg") {
    io::Polyline line;
    for (const auto& row : rows) {
      if (!row.feasible) continue;
      line.xs.push_back(row.value);
      line.ys.push_back(row.d_e_max);
    }
    io::write_file(out_path(out_dir, "region.svg"),
                   io::render_svg({line}, var_name, "max eavesdropper distortion"));
  } else if (format == "json") {
    json out = json::array();
    for (const auto& row : rows) {
      json r{{"var", var_name},
             {"value", row.value},
             {"d_e_max", row.d_e_max},
             {"feasible", row.feasible}};
      if (row.witness) r["witness_channel"] = io::to_json(*row.witness);
      out.push_back(std::move(r));
    }
    io::write_file(out_path(out_dir, "region.json"), out.dump(2) + "\n");
  }
  std::cout << "region: wrote " << rows.size() << " rows to " << out_dir << "\n";
  return kExitOk;
}

// --- simulate ---

int cmd_simulate(const json& cfg, const std::string& out_dir, std::uint64_t base_seed) {
  const std::string mode = need(cfg, "mode").get<std::string>();
  if (mode != "lossless" && mode != "lossy") {
    throw config_error("mode must be lossless or lossy");
  }
  const bool lossless = mode == "lossless";
  const Distribution source = parse_distribution(need(cfg, "source"), "source");
  const DistortionMatrix d_e = parse_distortion(need(cfg, "d_e"), "d_e");
  const int n = static_cast<int>(need_number(cfg, "n"));
  const double R = need_number(cfg, "r");
  const double R0 = need_number(cfg, "r0");
  const double RL = need_number(cfg, "rl");
  const int trials = cfg.value("trials", 50);
  if (n < 1 || trials < 1) throw config_error("n and trials must be >= 1");
  const auto seeds = parse_seeds(cfg, base_seed);

  std::optional<Channel> x_given_y;
  Distribution gen = source;  // codebook generator: P_X, or P_Y when lossy
  std::optional<DistortionMatrix> d_b;
  double d_b_target = 0.0;    // fidelity anchor for the type diagnostic
  if (!lossless) {
    const Channel forward = parse_channel(need(cfg, "channel"), "channel");
    const auto joint = JointDistribution::from_source_channel(source, forward);
    gen = joint.col_marginal();
    x_given_y = joint.conditional_given_col();
    d_b = parse_distortion(need(cfg, "d_b"), "d_b");
    for (int x = 0; x < joint.rows(); ++x) {
      for (int y = 0; y < joint.cols(); ++y) d_b_target += joint.at(x, y) * d_b->at(x, y);
    }
    d_b_target = cfg.value("d_b_max", d_b_target);
  }

  const double d_rl = rd::distortion_rate(source, d_e, RL);
  double side_reference = 0.0;
  if (!lossless && RL >= R0) {
    const auto joint = JointDistribution::from_source_channel(
        source, parse_channel(need(cfg, "channel"), "channel"));
    side_reference = rd::side_info_distortion_rate(joint, d_e, RL - R0);
  }
  json records = json::array();
  for (std::uint64_t seed : seeds) {
    const auto cb = cipher::build_codebook(seed, n, R, R0, gen);
    cipher::CipherCode code{cb, x_given_y};
    Rng src(seed, "sim-source"), enc(seed, "sim-encoder"), key(seed, "sim-key");
    int decode_errors = 0, type_in_set = 0;
    double mean_d_b = 0.0, p2p_mean = 0.0, keyenum_mean = 0.0, mean_type_mi = 0.0;
    const auto p2p_list = adversary::p2p_attack(source, d_e, RL, n, seed);
    for (int t = 0; t < trials; ++t) {
      const Sequence x = Sequence::iid(n, source, src);
      const int k = key.uniform_int(cb.K);
      const auto er = cipher::likelihood_encode(code, x, k, enc);
      const Sequence out = cipher::decode(code, er.m, k);
      if (lossless) {
        decode_errors += out == x ? 0 : 1;
      } else {
        mean_d_b += avg_distortion(x, out, *d_b);
        // reconstruction rate spans both indices; the type diagnostic tracks it
        const auto diag = adversary::joint_type_diagnostic(x, out, R + R0, d_b_target, source,
                                                           *d_b, cfg.value("eps", 0.1));
        type_in_set += diag.in_set ? 1 : 0;
        mean_type_mi += diag.mutual_info;
      }
      p2p_mean += adversary::list_min_distortion(p2p_list.for_message(er.m), x, d_e);
      if (RL >= R0) {
        if (lossless) {
          keyenum_mean += adversary::key_enumeration_attack(code, x, er.m, d_e).distortion;
        } else {
          // mimic the decoder with the recovered key, then describe x within
          // the leftover rate via the joint-type covering
          const Sequence side = cipher::decode(code, er.m, k);
          keyenum_mean +=
              adversary::typecover_attack(x, side, RL - R0, d_e, 0.05).achieved_distortion;
        }
      }
    }
    json rec{{"seed", seed}, {"n", n}, {"trials", trials}, {"reference", {{"d_rl", d_rl}}}};
    if (lossless) {
      rec["decoder_error_rate"] = static_cast<double>(decode_errors) / trials;
    } else {
      rec["mean_d_b"] = mean_d_b / trials;
      rec["type_diagnostic"] = json{{"in_set_fraction", static_cast<double>(type_in_set) / trials},
                                    {"mean_mutual_info", mean_type_mi / trials}};
    }
    json attacks = json::array();
    attacks.push_back(json{{"attack", "p2p"},
                           {"params", {{"rl", RL}, {"n", n}, {"seed", seed}}},
                           {"empirical_success", p2p_mean / trials},
                           {"reference_value", d_rl}});
    if (RL >= R0) {
      if (lossless) {
        attacks.push_back(json{{"attack", "key_enumeration"},
                               {"params", {{"rl", RL}, {"r0", R0}, {"n", n}, {"seed", seed}}},
                               {"empirical_success", keyenum_mean / trials},
                               {"reference_value", 0.0}});
      } else {
        attacks.push_back(json{{"attack", "key_plus_typecover"},
                               {"params", {{"rl", RL}, {"r0", R0}, {"n", n}, {"seed", seed}}},
                               {"empirical_success", keyenum_mean / trials},
                               {"reference_value", side_reference}});
      }
    }
    rec["attacks"] = std::move(attacks);
    records.push_back(std::move(rec));
  }
  io::write_file(out_path(out_dir, "simulate.json"), records.dump(2) + "\n");
  std::cout << "simulate: wrote " << records.size() << " records to " << out_dir << "\n";
  return kExitOk;
}

// --- verify ---

struct VerifyRow {
  std::string suite, check;
  double measured = 0.0, bound = 0.0;
  bool pass = false;
  std::string note;
};

void verify_chernoff(std::vector<VerifyRow>& rows, std::uint64_t seed) {
  Rng rng(seed, "verify-chernoff");
  int dominated = 0;
  const int points = 200;
  for (int t = 0; t < points; ++t) {
    const int m = 1 + rng.uniform_int(30);
    const double p = rng.uniform();
    const double k = rng.uniform() * m + 1e-6;
    double comb = 1.0, tail = 0.0;
    for (int j = 0; j <= m; ++j) {
      if (j > 0) comb = comb * (m - j + 1) / j;
      if (j > k) tail += comb * std::pow(p, j) * std::pow(1 - p, m - j);
    }
    if (subproblem::chernoff_binary(m, p, k) >= tail - 1e-12) ++dominated;
  }
  rows.push_back({"chernoff-binary", "dominates exact binomial tail",
                  static_cast<double>(dominated) / points, 1.0, dominated == points, ""});

  int dominated_b = 0;
  const int bpoints = 50;
  for (int t = 0; t < bpoints; ++t) {
    const int m = 2 + rng.uniform_int(12);
    const double a = 0.5 + rng.uniform() * 2.0;
    const double k = rng.uniform() * m * a * 0.75 + 0.3;
    const int samples = 100000;
    int exceed = 0;
    for (int s = 0; s < samples; ++s) {
      double total = 0.0;
      for (int i = 0; i < m; ++i) total += rng.uniform() * a;
      if (total > k) ++exceed;
    }
    const double tail = static_cast<double>(exceed) / samples;
    const double sigma = std::sqrt(std::max(tail * (1 - tail), 1e-12) / samples);
    if (subproblem::chernoff_bounded(m, a / 2.0, k, a) >= tail - 3.0 * sigma) ++dominated_b;
  }
  rows.push_back({"chernoff-bounded", "dominates Monte Carlo tail (3 sigma)",
                  static_cast<double>(dominated_b) / bpoints, 1.0, dominated_b == bpoints, ""});
}

void verify_xi_mean(std::vector<VerifyRow>& rows) {
  const int n = 10;
  const auto p = Distribution::bernoulli(0.5);
  const auto d = DistortionMatrix::hamming(2);
  const double D = 0.1, delta = 0.2;
  const Sequence z = Sequence::from_rank(0b0101010101, n, 2);
  double exact_mean = 0.0;
  for (std::uint64_t xr = 0; xr < (1u << n); ++xr) {
    const Sequence x = Sequence::from_rank(xr, n, 2);
    if (avg_distortion(x, z, d) <= D + 1e-12 && is_typical(x, p, delta)) {
      exact_mean += std::pow(0.5, n);
    }
  }
  const double exponent = rd::rd_exponent(p, d, D, delta);
  const double bound = std::pow(n + 1.0, 4) * std::exp2(-n * exponent);
  rows.push_back({"xi-mean-bound", "exact mean under the type-counting bound", exact_mean, bound,
                  exact_mean <= bound * (1 + 1e-9),
                  "slack bits/symbol: " +
                      io::format_number(rd::rate_at(p, d, D) + std::log2(exact_mean) / n)});
}

void verify_soft_covering(std::vector<VerifyRow>& rows, std::uint64_t seed) {
  const auto gen = Distribution::bernoulli(0.3);
  const double H = entropy(gen);
  auto mean_tv = [&](double R, int n, int seeds) {
    double acc = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const auto cb =
          cipher::build_codebook(seed + static_cast<std::uint64_t>(s), n, R, 0.25, gen);
      cipher::CipherCode code{cb, std::nullopt};
      acc += cipher::induced_joint(code).tv(cipher::ideal_joint(code));
    }
    return acc / seeds;
  };
  const double t2 = mean_tv(H + 0.25, 2, 12), t6 = mean_tv(H + 0.25, 6, 12);
  rows.push_back({"soft-covering-tv", "mean TV shrinks from n=2 to n=6", t6, t2, t6 < t2, ""});
  const double neg = mean_tv(H - 0.25, 6, 8);
  rows.push_back(
      {"soft-covering-tv", "below-entropy control stays above 0.2", neg, 0.2, neg > 0.2, ""});
}

void verify_decay(std::vector<VerifyRow>& rows, const json& cfg) {
  const auto d = DistortionMatrix::hamming(2);
  subproblem::DecayParams ok{Distribution::bernoulli(0.5),
                             std::nullopt,
                             d,
                             cfg.value("r", 0.25),
                             cfg.value("r_c", 1.0),
                             cfg.value("big_d", 0.05),
                             cfg.value("delta", 0.45),
                             {4, 8},
                             {1, 2, 3, 4, 5},
                             subproblem::TauDescriptor{}};
  const auto rc = subproblem::check_regime(ok);
  if (rc.refused) {
    rows.push_back({"decay-lossless", "refused: regime", ok.R, rc.threshold, false,
                    "requested description rate is not below the threshold"});
  } else {
    const auto out = subproblem::decay_experiment(ok);
    double up4 = 0.0, up8 = 0.0;
    for (const auto& r : out) (r.n == 4 ? up4 : up8) += r.upper / 5.0;
    rows.push_back({"decay-lossless", "mean upper endpoint shrinks from n=4 to n=8", up8, up4,
                    up8 < up4, ""});
  }
  // a deliberately out-of-regime request must be refused
  subproblem::DecayParams bad = ok;
  bad.R = 0.6;
  bad.D = 0.15;
  bool refused = false;
  try {
    subproblem::decay_experiment(bad);
  } catch (const subproblem::regime_error&) {
    refused = true;
  }
  rows.push_back({"decay-lossless", "out-of-regime request refused", refused ? 1.0 : 0.0, 1.0,
                  refused, refused ? "refused: regime" : "missing refusal"});
}

void verify_exponent(std::vector<VerifyRow>& rows) {
  const auto d = DistortionMatrix::hamming(2);
  const auto p = Distribution::bernoulli(0.3);
  const double rd_p = rd::rate_at(p, d, 0.1);
  const double unrestricted = rd::rd_exponent(p, d, 0.1, 1.0);
  rows.push_back({"exponent", "unrestricted minimum strictly below R(D)", unrestricted, rd_p,
                  unrestricted < rd_p - 1e-6, ""});
  double prev = -1.0;
  bool monotone = true;
  for (double delta : {0.01, 0.05, 0.1, 0.2}) {
    const double v = rd::rd_exponent(p, d, 0.1, delta);
    if (prev >= 0.0 && v > prev + 1e-9) monotone = false;
    prev = v;
  }
  rows.push_back(
      {"exponent", "nonincreasing in the ball radius", monotone ? 1.0 : 0.0, 1.0, monotone, ""});
}

int cmd_verify(const json& cfg, const std::string& out_dir, std::uint64_t seed) {
  std::vector<std::string> suites = cfg.value(
      "suites",
      std::vector<std::string>{"chernoff", "xi-mean", "soft-covering", "decay", "exponent"});
  std::vector<VerifyRow> rows;
  for (const auto& s : suites) {
    if (s == "chernoff") {
      verify_chernoff(rows, seed);
    } else if (s == "xi-mean") {
      verify_xi_mean(rows);
    } else if (s == "soft-covering") {
      verify_soft_covering(rows, seed);
    } else if (s == "decay") {
      verify_decay(rows, cfg.value("decay", json::object()));
    } else if (s == "exponent") {
      verify_exponent(rows);
    } else {
      throw config_error("unknown verify suite: " + s);
    }
  }
  std::string csv = io::csv_row({"suite", "check", "measured", "bound", "pass", "note"});
  bool all_pass = true;
  for (const auto& r : rows) {
    csv += io::csv_row({r.suite, r.check, io::format_number(r.measured),
                        io::format_number(r.bound), r.pass ? "1" : "0", r.note});
    std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.suite << ": " << r.check << " (measured "
              << io::format_number(r.measured) << ", bound " << io::format_number(r.bound) << ")"
              << (r.note.empty() ? "" : "  -- " + r.note) << "\n";
    if (!r.pass) all_pass = false;
  }
  io::write_file(out_path(out_dir, "verify.csv"), csv);
  return all_pass ? kExitOk : kExitInvariant;
}

// --- subproblem ---

int cmd_subproblem(const json& cfg, const std::string& out_dir, std::uint64_t base_seed) {
  const std::string variant = cfg.value("variant", "lossless");
  subproblem::DecayParams p{parse_distribution(need(cfg, "source"), "source"),
                            std::nullopt,
                            parse_distortion(need(cfg, "d"), "d"),
                            need_number(cfg, "r"),
                            need_number(cfg, "r_c"),
                            need_number(cfg, "big_d"),
                            cfg.value("delta", 0.1),
                            {},
                            parse_seeds(cfg, base_seed),
                            subproblem::TauDescriptor{}};
  for (const auto& v : need(cfg, "ns")) p.ns.push_back(v.get<int>());
  if (variant == "noisy") {
    p.x_given_y = parse_channel(need(cfg, "channel"), "channel");
  } else if (variant != "lossless") {
    throw config_error("variant must be lossless or noisy");
  }
  if (cfg.contains("tau")) {
    const json& t = cfg.at("tau");
    const std::string kind = t.value("kind", "poly");
    if (kind == "poly") {
      p.tau.kind = subproblem::TauDescriptor::Kind::Polynomial;
    } else if (kind == "sqrt_exp") {
      p.tau.kind = subproblem::TauDescriptor::Kind::SqrtExp;
    } else {
      throw config_error("tau kind must be poly or sqrt_exp");
    }
    p.tau.c = t.value("c", 1.0);
    p.tau.power = t.value("power", 1.0);
  }

  try {
    const auto out = subproblem::decay_experiment(p);
    std::string csv = io::csv_row({"n", "seed", "lower", "upper", "tau_n", "exceeds"});
    for (const auto& r : out) {
      csv += io::csv_row({std::to_string(r.n), std::to_string(r.seed),
                          io::format_number(r.lower), io::format_number(r.upper),
                          io::format_number(r.tau), r.exceeds ? "1" : "0"});
    }
    io::write_file(out_path(out_dir, "subproblem.csv"), csv);
    std::cout << "subproblem: wrote " << out.size() << " rows to " << out_dir << "\n";
  } catch (const subproblem::regime_error& e) {
    const auto rc = subproblem::check_regime(p);
    std::cout << "refused: regime (R = " << io::format_number(p.R)
              << " >= min{R(D), R_Y(D) + R_C} = " << io::format_number(rc.threshold) << ")\n";
    io::write_file(out_path(out_dir, "subproblem.csv"), io::csv_row({"refused", e.what()}));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shannon cipher system secrecy regions, simulations and bound checks"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", format = "csv";
  std::uint64_t seed = 1;
  int jobs = 1;
  bool out_given = false, jobs_given = false;

  const std::pair<const char*, const char*> subs[] = {
      {"region", "sweep an achievable-region boundary and emit CSV/JSON/SVG"},
      {"simulate", "run the cipher system and the attacks at small blocklength"},
      {"verify", "run the bound suites and emit a pass/fail table"},
      {"subproblem", "codebook-compression decay experiment"}};
  for (const auto& [name, blurb] : subs) {
    auto* sub = app.add_subcommand(name, blurb);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--seed", seed, "base seed");
    sub->add_option("--out", out_dir, "output directory")
        ->each([&](const std::string&) { out_given = true; });
    sub->add_option("--format", format, "csv, json or svg")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    sub->add_option("--jobs", jobs, "parallelism degree")
        ->each([&](const std::string&) { jobs_given = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  // environment overrides exist for the output directory and parallelism only
  if (!out_given) {
    if (const char* env = std::getenv("HENCHMAN_OUT")) out_dir = env;
  }
  if (!jobs_given) {
    if (const char* env = std::getenv("HENCHMAN_JOBS")) jobs = std::max(1, std::atoi(env));
  }

  try {
    const json cfg = load_config(config_path);
    if (app.got_subcommand("region")) return cmd_region(cfg, out_dir, format, jobs);
    if (app.got_subcommand("simulate")) return cmd_simulate(cfg, out_dir, seed);
    if (app.got_subcommand("verify")) return cmd_verify(cfg, out_dir, seed);
    if (app.got_subcommand("subproblem")) return cmd_subproblem(cfg, out_dir, seed);
    return kExitConfig;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const guard_error& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const infeasible_error& e) {
    std::cerr << "infeasible query: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
}
