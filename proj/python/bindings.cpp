#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "holobeam/bandit.hpp"
#include "holobeam/bounds.hpp"
#include "holobeam/channel.hpp"
#include "holobeam/config.hpp"
#include "holobeam/error.hpp"
#include "holobeam/grid.hpp"
#include "holobeam/harness.hpp"

namespace py = pybind11;
using namespace holobeam;

PYBIND11_MODULE(_holobeam, m) {
  m.doc() = "Beam alignment simulator core";

  static py::exception<Error> exc(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<HmtConfig>(m, "HmtConfig")
      .def(py::init<>())
      .def_static("reference", &HmtConfig::reference, py::arg("pilot_power_dbm") = 20.0,
                  py::arg("distance_m") = 800.0)
      .def_readwrite("aperture_width", &HmtConfig::aperture_width)
      .def_readwrite("aperture_length", &HmtConfig::aperture_length)
      .def_readwrite("wavelength", &HmtConfig::wavelength)
      .def_readwrite("element_pitch", &HmtConfig::element_pitch)
      .def_readwrite("radiation_factor", &HmtConfig::radiation_factor)
      .def_readwrite("distance", &HmtConfig::distance)
      .def_readwrite("pilot_power", &HmtConfig::pilot_power)
      .def_readwrite("noise_power", &HmtConfig::noise_power)
      .def_readwrite("data_power", &HmtConfig::data_power)
      .def("validate", &HmtConfig::validate)
      .def("kx", &HmtConfig::kx)
      .def("ky", &HmtConfig::ky)
      .def("gain_constant", &HmtConfig::gain_constant);

  py::class_<UserLocation>(m, "UserLocation")
      .def(py::init([](double a1, double a2) { return UserLocation{a1, a2}; }),
           py::arg("alpha1"), py::arg("alpha2"))
      .def_readwrite("alpha1", &UserLocation::alpha1)
      .def_readwrite("alpha2", &UserLocation::alpha2);

  m.def("sinc", &sinc);
  m.def("far_field_gain_magnitude", &far_field_gain_magnitude);
  m.def("mean_rss", &mean_rss);
  m.def("achievable_rate", &achievable_rate);

  m.def("build_grid", [](double k_axis) { return build_grid(k_axis).values(); });
  m.def("discrete_optimum", [](const HmtConfig& cfg, const UserLocation& user) {
    const auto opt = discrete_optimum(cfg, user, grid_for_axis(cfg, Axis::first),
                                      grid_for_axis(cfg, Axis::second));
    return py::make_tuple(opt.k1, opt.k2, opt.mean_at_opt);
  });
  m.def(
      "restricted_mean_profile",
      [](const HmtConfig& cfg, const UserLocation& user, int axis, double other_beta) {
        const Axis a = axis == 1 ? Axis::first : Axis::second;
        return restricted_mean_profile(cfg, user, a, grid_for_axis(cfg, a), other_beta);
      },
      py::arg("cfg"), py::arg("user"), py::arg("axis"), py::arg("other_beta"));
  m.def("min_neighbor_gap",
        [](const std::vector<double>& p) { return min_neighbor_gap(p).value; });

  m.def("num_batches", &num_batches);
  m.def("batch_schedule",
        [](std::uint64_t n_half, int batches) { return batch_schedule(n_half, batches).sizes; });
  m.def(
      "holobeam_gaussian",
      [](std::vector<double> means, double noise_sd, std::uint64_t n_half, std::uint64_t seed) {
        GaussianArmsEnvironment env(std::move(means), noise_sd, seed);
        const std::size_t k = beta_i_holobeam(env, n_half);
        return py::make_tuple(k, env.pulls_used());
      },
      py::arg("means"), py::arg("noise_sd"), py::arg("n_half"), py::arg("seed"));

  m.def(
      "error_bound",
      [](double n, std::size_t k1, std::size_t k2, double d1, double d2, double sigma2,
         double gain) {
        return holobeam_error_bound(BoundInputs{n, k1, k2, d1, d2, sigma2, gain}).value;
      },
      py::arg("n"), py::arg("k1"), py::arg("k2"), py::arg("delta1"), py::arg("delta2"),
      py::arg("noise_power"), py::arg("gain"));
  m.def("chi2_dominance_bound", &chi2_dominance_bound);

  m.def(
      "run_trial",
      [](const std::string& config_json, const std::string& policy, std::uint64_t n,
         double power_dbm, double distance_m, std::uint64_t seed) {
        const ExperimentConfig cfg = parse_config(config_json);
        const TrialOutcome t =
            run_trial(cfg, CellKey{parse_policy(policy), n, power_dbm, distance_m}, seed);
        py::dict d;
        d["alpha1"] = t.user.alpha1;
        d["alpha2"] = t.user.alpha2;
        d["k1_star"] = t.k1_star;
        d["k2_star"] = t.k2_star;
        d["k1"] = t.k1;
        d["k2"] = t.k2;
        d["correct"] = t.correct;
        d["pilots_used"] = t.pilots_used;
        d["rate"] = t.rate;
        d["oracle_rate"] = t.oracle_rate;
        d["failed"] = t.failed;
        return d;
      },
      py::arg("config_json"), py::arg("policy"), py::arg("n"), py::arg("power_dbm") = 20.0,
      py::arg("distance_m") = 800.0, py::arg("seed") = 0);
  m.def(
      "run_experiment_csv",
      [](const std::string& config_json) {
        const ExperimentConfig cfg = parse_config(config_json);
        cfg.validate();
        py::gil_scoped_release release;
        return format_results(run_experiment(cfg));
      },
      py::arg("config_json"));
}
