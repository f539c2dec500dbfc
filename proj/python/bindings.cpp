#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "henchman/adversary.hpp"
#include "henchman/cipher.hpp"
#include "henchman/prob.hpp"
#include "henchman/rd.hpp"
#include "henchman/region.hpp"
#include "henchman/subproblem.hpp"
#include "henchman/types_util.hpp"

namespace py = pybind11;
using namespace henchman;

namespace {

DistortionMatrix make_distortion(int rows, int cols, const std::vector<double>& data) {
  return DistortionMatrix(rows, cols, data);
}

std::vector<std::vector<double>> channel_rows(const Channel& c) {
  std::vector<std::vector<double>> rows;
  for (int x = 0; x < c.input_size(); ++x) rows.push_back(c.row(x).mass());
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Secrecy rate-distortion regions for the Shannon cipher system with "
            "list/henchman adversaries: solvers, small-blocklength simulation and "
            "bound checks.";

  py::register_exception<guard_error>(m, "GuardError");
  py::register_exception<solver_error>(m, "SolverError");
  py::register_exception<infeasible_error>(m, "InfeasibleError");
  py::register_exception<subproblem::regime_error>(m, "RegimeError");

  py::class_<Distribution>(m, "Distribution")
      .def(py::init<std::vector<double>>())
      .def_static("bernoulli", &Distribution::bernoulli)
      .def_static("uniform", &Distribution::uniform)
      .def_property_readonly("mass", &Distribution::mass)
      .def("__len__", &Distribution::size);

  py::class_<Channel>(m, "Channel")
      .def(py::init([](const std::vector<std::vector<double>>& rows) {
        std::vector<Distribution> dists;
        for (const auto& r : rows) dists.emplace_back(r);
        return Channel(std::move(dists));
      }))
      .def_static("identity", &Channel::identity)
      .def_static("binary_symmetric", &Channel::binary_symmetric)
      .def_property_readonly("rows", &channel_rows);

  py::class_<JointDistribution>(m, "JointDistribution")
      .def(py::init<int, int, std::vector<double>>())
      .def_static("from_source_channel", &JointDistribution::from_source_channel)
      .def_static("identity_coupling", &JointDistribution::identity_coupling)
      .def_property_readonly("mass", &JointDistribution::mass)
      .def_property_readonly("rows", &JointDistribution::rows)
      .def_property_readonly("cols", &JointDistribution::cols);

  py::class_<DistortionMatrix>(m, "DistortionMatrix")
      .def(py::init(&make_distortion))
      .def_static("hamming", py::overload_cast<int>(&DistortionMatrix::hamming))
      .def_property_readonly("shape", [](const DistortionMatrix& d) {
        return py::make_tuple(d.rows(), d.cols());
      });

  // information measures
  m.def("tv_distance", &tv_distance);
  m.def("entropy", py::overload_cast<const Distribution&>(&entropy));
  m.def("mutual_information", &mutual_information);
  m.def("kl_divergence", &kl_divergence);
  m.def("binary_entropy", &binary_entropy);

  // rate-distortion solvers
  m.def(
      "rate_at",
      [](const Distribution& p, const DistortionMatrix& d, double D) {
        return rd::rate_at(p, d, D);
      },
      py::arg("source"), py::arg("distortion_matrix"), py::arg("distortion"));
  m.def(
      "distortion_rate",
      [](const Distribution& p, const DistortionMatrix& d, double R) {
        return rd::distortion_rate(p, d, R);
      },
      py::arg("source"), py::arg("distortion_matrix"), py::arg("rate"));
  m.def(
      "rd_curve",
      [](const Distribution& p, const DistortionMatrix& d, const std::vector<double>& slopes) {
        py::list out;
        for (const auto& pt : rd::rd_curve(p, d, slopes)) {
          py::dict row;
          row["slope"] = pt.slope;
          row["rate"] = pt.rate;
          row["distortion"] = pt.distortion;
          row["test_channel"] = channel_rows(pt.test_channel);
          out.append(std::move(row));
        }
        return out;
      },
      py::arg("source"), py::arg("distortion_matrix"), py::arg("slopes"));
  m.def(
      "side_info_distortion_rate",
      [](const JointDistribution& pxy, const DistortionMatrix& d, double R) {
        return rd::side_info_distortion_rate(pxy, d, R);
      },
      py::arg("joint"), py::arg("distortion_matrix"), py::arg("rate"));
  m.def(
      "side_info_rate_at",
      [](const JointDistribution& pxy, const DistortionMatrix& d, double D) {
        return rd::side_info_rate_at(pxy, d, D);
      },
      py::arg("joint"), py::arg("distortion_matrix"), py::arg("distortion"));
  m.def(
      "rd_exponent",
      [](const Distribution& p, const DistortionMatrix& d, double D, double delta) {
        return rd::rd_exponent(p, d, D, delta);
      },
      py::arg("source"), py::arg("distortion_matrix"), py::arg("distortion"), py::arg("delta"));

  // region boundaries
  m.def(
      "lossless_max_eve_distortion",
      [](double R, double R0, double RL, const Distribution& src, const DistortionMatrix& d_e) {
        return region::lossless_max_eve_distortion(region::LosslessQuery{R, R0, RL, src, d_e});
      },
      py::arg("r"), py::arg("r0"), py::arg("rl"), py::arg("source"), py::arg("d_e"));
  m.def(
      "lossy_max_eve_distortion",
      [](double R, double R0, double RL, double D_B, const Distribution& src,
         const DistortionMatrix& d_b, const DistortionMatrix& d_e, double step, int jobs) {
        region::ChannelGridOptions grid;
        grid.step = step;
        grid.jobs = jobs;
        const auto res = region::lossy_max_eve_distortion(
            region::LossyQuery{R, R0, RL, D_B, src, d_b, d_e}, grid);
        py::dict out;
        out["feasible"] = res.feasible;
        out["d_e_max"] = res.d_e_max;
        if (res.witness) out["witness_channel"] = channel_rows(*res.witness);
        return out;
      },
      py::arg("r"), py::arg("r0"), py::arg("rl"), py::arg("d_b_max"), py::arg("source"),
      py::arg("d_b"), py::arg("d_e"), py::arg("step") = 0.0, py::arg("jobs") = 1);

  // cipher system at small blocklength
  py::class_<cipher::Codebook>(m, "Codebook")
      .def_readonly("n", &cipher::Codebook::n)
      .def_readonly("M", &cipher::Codebook::M)
      .def_readonly("K", &cipher::Codebook::K)
      .def("entry", [](const cipher::Codebook& cb, int mm, int kk) {
        const Sequence& s = cb.at(mm, kk);
        return std::vector<int>(s.symbols.begin(), s.symbols.end());
      });
  m.def(
      "build_codebook",
      [](std::uint64_t seed, int n, double R, double R0, const Distribution& gen) {
        return cipher::build_codebook(seed, n, R, R0, gen);
      },
      py::arg("seed"), py::arg("n"), py::arg("r"), py::arg("r0"), py::arg("generator"));
  m.def(
      "simulate_lossless_roundtrip",
      [](std::uint64_t seed, int n, double R, double R0, const Distribution& src, int trials) {
        const auto cb = cipher::build_codebook(seed, n, R, R0, src);
        cipher::CipherCode code{cb, std::nullopt};
        Rng sr(seed, "py-source"), er(seed, "py-encoder"), kr(seed, "py-key");
        int errors = 0, fallbacks = 0;
        for (int t = 0; t < trials; ++t) {
          const Sequence x = Sequence::iid(n, src, sr);
          const int k = kr.uniform_int(cb.K);
          const auto enc = cipher::likelihood_encode(code, x, k, er);
          fallbacks += enc.fallback ? 1 : 0;
          errors += cipher::decode(code, enc.m, k) == x ? 0 : 1;
        }
        py::dict out;
        out["error_rate"] = static_cast<double>(errors) / trials;
        out["fallback_rate"] = static_cast<double>(fallbacks) / trials;
        return out;
      },
      py::arg("seed"), py::arg("n"), py::arg("r"), py::arg("r0"), py::arg("source"),
      py::arg("trials") = 100);
  m.def(
      "induced_ideal_tv",
      [](std::uint64_t seed, int n, double R, double R0, const Distribution& src) {
        const auto cb = cipher::build_codebook(seed, n, R, R0, src);
        cipher::CipherCode code{cb, std::nullopt};
        return cipher::induced_joint(code).tv(cipher::ideal_joint(code));
      },
      py::arg("seed"), py::arg("n"), py::arg("r"), py::arg("r0"), py::arg("source"));

  // concentration bounds and the codebook subproblem
  m.def("chernoff_binary", &subproblem::chernoff_binary, py::arg("m"), py::arg("p"), py::arg("k"));
  m.def("chernoff_bounded", &subproblem::chernoff_bounded, py::arg("m"), py::arg("p"),
        py::arg("k"), py::arg("a"));
  m.def(
      "best_code_success",
      [](std::uint64_t seed, int n, double r_c, double R, double D, const Distribution& gen,
         double delta) {
        subproblem::Instance inst{cipher::build_codebook(seed, n, r_c, 0.0, gen), std::nullopt,
                                  DistortionMatrix::hamming(gen.size()), R, D, delta};
        const auto b = subproblem::best_code_success(inst);
        py::dict out;
        out["lower"] = b.lower;
        out["upper"] = b.upper;
        out["exact"] = b.exact;
        return out;
      },
      py::arg("seed"), py::arg("n"), py::arg("r_c"), py::arg("r"), py::arg("d"),
      py::arg("generator"), py::arg("delta") = 0.1);

  // adversaries
  m.def(
      "p2p_attack_mean_distortion",
      [](const Distribution& src, const DistortionMatrix& d_e, double RL, int n,
         std::uint64_t seed, int trials) {
        const auto list = adversary::p2p_attack(src, d_e, RL, n, seed);
        Rng sr(seed, "py-p2p-source");
        double acc = 0.0;
        for (int t = 0; t < trials; ++t) {
          acc += adversary::list_min_distortion(list.for_message(0), Sequence::iid(n, src, sr),
                                                d_e);
        }
        return acc / trials;
      },
      py::arg("source"), py::arg("d_e"), py::arg("rl"), py::arg("n"), py::arg("seed"),
      py::arg("trials") = 200);
  m.def(
      "typecover_attack",
      [](const std::vector<int>& x, const std::vector<int>& y, double r,
         const DistortionMatrix& d_e, double tau) {
        Sequence xs, ys;
        for (int v : x) {
          if (v < 0 || v >= d_e.rows()) throw std::invalid_argument("x symbol out of alphabet");
          xs.symbols.push_back(static_cast<std::uint8_t>(v));
        }
        for (int v : y) {
          if (v < 0 || v > 31) throw std::invalid_argument("y symbol out of range");
          ys.symbols.push_back(static_cast<std::uint8_t>(v));
        }
        const auto res = adversary::typecover_attack(xs, ys, r, d_e, tau);
        py::dict out;
        out["achieved_distortion"] = res.achieved_distortion;
        out["promised_distortion"] = res.promised_distortion;
        out["description_bits"] = res.description_bits;
        out["slack_bits"] = res.slack_bits;
        out["covered"] = res.covered;
        out["z"] = std::vector<int>(res.z.symbols.begin(), res.z.symbols.end());
        return out;
      },
      py::arg("x"), py::arg("y"), py::arg("r"), py::arg("d_e"), py::arg("tau") = 0.05);

  // method-of-types utilities
  m.def("count_joint_types", [](int n, int ax, int ay) {
    return types::enumerate_joint_types(n, ax, ay).size();
  });
}
