#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "holobeam/bounds.hpp"
#include "holobeam/config.hpp"
#include "holobeam/error.hpp"
#include "holobeam/grid.hpp"
#include "holobeam/harness.hpp"
#include "holobeam/plot.hpp"

namespace {

using namespace holobeam;

struct Common {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Base seed");
  cmd->add_option("--config", c.config, "Experiment config file (JSON)");
  cmd->add_option("--out", c.out, "Output path (default: stdout)");
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.seed) cfg.base_seed = *c.seed;
  cfg.validate();
  return cfg;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::io_error, "cannot write " + c.out);
  f << text;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

UserLocation pick_user(const ExperimentConfig& cfg, std::optional<double> a1,
                       std::optional<double> a2) {
  UserLocation u{0.5037, -0.4962};
  if (cfg.user_model.kind == UserModel::Kind::fixed) u = cfg.user_model.location;
  if (a1) u.alpha1 = *a1;
  if (a2) u.alpha2 = *a2;
  u.validate();
  return u;
}

struct RunArgs {
  std::uint64_t n = 200;
  std::string policy;
  std::optional<double> power, distance, alpha1, alpha2;
};

int cmd_run(const Common& c, const RunArgs& a) {
  ExperimentConfig cfg = load(c);
  if (a.alpha1 || a.alpha2) {
    cfg.user_model.location = pick_user(cfg, a.alpha1, a.alpha2);
    cfg.user_model.kind = UserModel::Kind::fixed;
  }
  CellKey cell;
  cell.policy = a.policy.empty() ? cfg.policies.front() : parse_policy(a.policy);
  cell.n = a.n;
  cell.power_dbm = a.power.value_or(cfg.pilot_power_dbm.front());
  cell.distance_m = a.distance.value_or(cfg.distance_m.front());
  const TrialOutcome t = run_trial(cfg, cell, trial_seed(cfg.base_seed, 0));
  std::ostringstream os;
  os << "policy " << to_string(cell.policy) << "\n"
     << "user " << fmt("%.9g", t.user.alpha1) << " " << fmt("%.9g", t.user.alpha2) << "\n"
     << "optimum " << t.k1_star << " " << t.k2_star << "\n"
     << "selected " << t.k1 << " " << t.k2 << "\n"
     << "correct " << (t.correct ? "yes" : "no") << "\n"
     << "pilots " << t.pilots_used << " of " << cell.n << "\n"
     << "rate " << fmt("%.6f", t.rate) << " (oracle " << fmt("%.6f", t.oracle_rate) << ")\n";
  if (t.failed) os << "failed " << t.failure << "\n";
  emit(c, os.str());
  return 0;
}

struct SweepArgs {
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> threads;
};

int cmd_sweep(const Common& c, const SweepArgs& a) {
  ExperimentConfig cfg = load(c);
  if (a.trials) cfg.trials = *a.trials;
  if (a.threads) cfg.threads = *a.threads;
  cfg.validate();
  const ExperimentResult r = run_experiment(cfg);
  for (const auto& cell : r.cells) {
    if (cell.failed_trials > 0) {
      std::cerr << "warning: " << to_string(cell.key.policy) << " n=" << cell.key.n << " P="
                << cell.key.power_dbm << " d=" << cell.key.distance_m << ": "
                << cell.failed_trials << " of " << cell.trials << " trials could not run\n";
    }
  }
  emit(c, format_results(r));
  return 0;
}

struct BoundArgs {
  std::optional<double> n, power, distance, alpha1, alpha2;
};

std::string bound_row(const ErrorBound& b) {
  return fmt("%.9g", b.value) + "," + fmt("%.9g", b.slack);
}

int cmd_bound(const Common& c, const BoundArgs& a) {
  const ExperimentConfig cfg = load(c);
  const HmtConfig ch = cfg.channel(a.power.value_or(cfg.pilot_power_dbm.front()),
                                   a.distance.value_or(cfg.distance_m.front()));
  ch.validate();
  const UserLocation user = pick_user(cfg, a.alpha1, a.alpha2);
  BoundInputs in = bound_inputs_for(ch, user, a.n.value_or(0.0), cfg.beta2_init_index);
  std::ostringstream os;
  if (a.n) {
    const ErrorBound b = holobeam_error_bound(in);
    os << "n " << fmt("%.9g", in.n) << "\n"
       << "K " << in.k1 << " " << in.k2 << "\n"
       << "delta " << fmt("%.9g", in.delta1) << " " << fmt("%.9g", in.delta2) << "\n"
       << "noise " << fmt("%.9g", in.noise_power) << "\n"
       << "G " << fmt("%.9g", in.gain) << "\n";
    for (int i = 0; i < 2; ++i) {
      const auto& t = b.axes[static_cast<std::size_t>(i)];
      os << "axis" << i + 1 << " batches " << fmt("%.9g", t.batches) << " exponent "
         << fmt("%.9g", t.exponent) << " elimination " << fmt("%.9g", t.elimination)
         << " early " << fmt("%.9g", t.early_batches) << "\n";
    }
    os << "bound " << fmt("%.9g", b.value) << "\n"
       << "slack " << fmt("%.9g", b.slack) << (b.underflow ? " (underflow)" : "") << "\n";
  } else {
    os << "n,bound,slack\n";
    const double floor_n = static_cast<double>(in.k1 + in.k2);
    for (int e = 3; e <= 15; ++e) {
      in.n = std::pow(10.0, e);
      if (in.n <= floor_n) continue;
      os << fmt("%.9g", in.n) << "," << bound_row(holobeam_error_bound(in)) << "\n";
    }
  }
  emit(c, os.str());
  return 0;
}

struct ProfileArgs {
  int axis = 1;
  std::optional<double> other_beta, power, distance, alpha1, alpha2;
};

int cmd_profile(const Common& c, const ProfileArgs& a) {
  const ExperimentConfig cfg = load(c);
  const HmtConfig ch = cfg.channel(a.power.value_or(cfg.pilot_power_dbm.front()),
                                   a.distance.value_or(cfg.distance_m.front()));
  ch.validate();
  const UserLocation user = pick_user(cfg, a.alpha1, a.alpha2);
  const PhaseGrid g1 = grid_for_axis(ch, Axis::first);
  const PhaseGrid g2 = grid_for_axis(ch, Axis::second);
  double other = 0.0;
  if (a.other_beta) {
    other = *a.other_beta;
  } else if (a.axis == 1) {
    other = g2.value(cfg.beta2_init_index.value_or(g2.midpoint_index()));
  } else {
    other = g1.value(discrete_optimum(ch, user, g1, g2).k1);
  }
  const Axis axis = a.axis == 1 ? Axis::first : Axis::second;
  const PhaseGrid& g = a.axis == 1 ? g1 : g2;
  const auto profile = restricted_mean_profile(ch, user, axis, g, other);
  std::ostringstream os;
  os << "k,beta,mean_rss\n";
  for (std::size_t k = 0; k < profile.size(); ++k) {
    os << k << "," << fmt("%.9g", g.value(k)) << "," << fmt("%.9g", profile[k]) << "\n";
  }
  emit(c, os.str());
  return 0;
}

struct PlotArgs {
  std::string csv;
  std::string y = "log";
  std::string metric = "error";
  std::string title;
};

int cmd_plot(const Common& c, const PlotArgs& a) {
  PlotOptions opt;
  opt.metric = a.metric == "rate" ? PlotMetric::mean_rate : PlotMetric::error_rate;
  opt.log_y = a.y == "log";
  opt.title = a.title;
  std::filesystem::path out = c.out;
  if (out.empty()) out = std::filesystem::path(a.csv).replace_extension(".svg");
  emit_svg(a.csv, out, opt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beam alignment simulator for holographic MIMO"};
  app.require_subcommand(1);

  Common common;
  RunArgs run_args;
  SweepArgs sweep_args;
  BoundArgs bound_args;
  ProfileArgs profile_args;
  PlotArgs plot_args;

  auto* run = app.add_subcommand("run", "Single seeded trial");
  add_common(run, common);
  run->add_option("--n", run_args.n, "Pilot budget")->check(CLI::PositiveNumber);
  run->add_option("--policy", run_args.policy, "holobeam | seq_halving | uniform");
  run->add_option("--power", run_args.power, "Pilot power, dBm");
  run->add_option("--distance", run_args.distance, "Distance, m");
  run->add_option("--alpha1", run_args.alpha1, "Fixed user alpha1");
  run->add_option("--alpha2", run_args.alpha2, "Fixed user alpha2");

  auto* sweep = app.add_subcommand("sweep", "Full experiment to CSV");
  add_common(sweep, common);
  sweep->add_option("--trials", sweep_args.trials, "Override trial count")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--threads", sweep_args.threads, "Worker threads (0: all cores)");

  auto* bound = app.add_subcommand("bound", "Error-probability bound");
  add_common(bound, common);
  bound->add_option("--n", bound_args.n, "Pilot budget (omit for a table over decades)");
  bound->add_option("--power", bound_args.power, "Pilot power, dBm");
  bound->add_option("--distance", bound_args.distance, "Distance, m");
  bound->add_option("--alpha1", bound_args.alpha1, "User alpha1");
  bound->add_option("--alpha2", bound_args.alpha2, "User alpha2");

  auto* profile = app.add_subcommand("profile", "Restricted mean RSS profile as CSV");
  add_common(profile, common);
  profile->add_option("--axis", profile_args.axis, "1 or 2")->check(CLI::IsMember({1, 2}));
  profile->add_option("--other-beta", profile_args.other_beta, "Frozen beta of the other axis");
  profile->add_option("--power", profile_args.power, "Pilot power, dBm");
  profile->add_option("--distance", profile_args.distance, "Distance, m");
  profile->add_option("--alpha1", profile_args.alpha1, "User alpha1");
  profile->add_option("--alpha2", profile_args.alpha2, "User alpha2");

  auto* plot = app.add_subcommand("plot", "Results CSV to SVG");
  add_common(plot, common);
  plot->add_option("csv", plot_args.csv, "Results CSV")->required();
  plot->add_option("--y", plot_args.y, "log | linear")->check(CLI::IsMember({"log", "linear"}));
  plot->add_option("--metric", plot_args.metric, "error | rate")
      ->check(CLI::IsMember({"error", "rate"}));
  plot->add_option("--title", plot_args.title, "Chart title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(common, run_args);
    if (*sweep) return cmd_sweep(common, sweep_args);
    if (*bound) return cmd_bound(common, bound_args);
    if (*profile) return cmd_profile(common, profile_args);
    if (*plot) return cmd_plot(common, plot_args);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    if (e.kind() == ErrorKind::invalid_config) return 2;
    if (e.kind() == ErrorKind::invalid_argument && (*run || *bound || *profile)) return 1;
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
