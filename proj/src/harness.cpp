#include "holobeam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "holobeam/error.hpp"
#include "holobeam/grid.hpp"
#include "holobeam/rng.hpp"

namespace holobeam {

namespace {

constexpr std::uint64_t kUserStream = 0x75736572ULL;  // "user"

}  // namespace

BoundInputs bound_inputs_for(const HmtConfig& cfg, const UserLocation& user, double n,
                             std::optional<std::size_t> beta2_init_index) {
  const PhaseGrid grid1 = grid_for_axis(cfg, Axis::first);
  const PhaseGrid grid2 = grid_for_axis(cfg, Axis::second);
  const std::size_t init = beta2_init_index.value_or(grid2.midpoint_index());
  if (init >= grid2.size()) throw Error(ErrorKind::invalid_argument, "beta2 index out of range");
  const DiscreteOptimum opt = discrete_optimum(cfg, user, grid1, grid2);
  const auto p1 = restricted_mean_profile(cfg, user, Axis::first, grid1, grid2.value(init));
  const auto p2 = restricted_mean_profile(cfg, user, Axis::second, grid2, grid1.value(opt.k1));
  BoundInputs in;
  in.n = n;
  in.k1 = grid1.size();
  in.k2 = grid2.size();
  in.delta1 = min_neighbor_gap(p1).value;
  in.delta2 = min_neighbor_gap(p2).value;
  in.noise_power = cfg.noise_power;
  in.gain = cfg.gain_constant();
  return in;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) {
  return mix_seed({base_seed, trial_index});
}

std::uint64_t cell_id(const CellKey& cell) {
  return mix_seed({static_cast<std::uint64_t>(cell.policy), cell.n,
                   std::bit_cast<std::uint64_t>(cell.power_dbm),
                   std::bit_cast<std::uint64_t>(cell.distance_m)});
}

TrialOutcome run_trial(const ExperimentConfig& cfg, const CellKey& cell,
                       std::uint64_t seed) {
  const HmtConfig channel = cfg.channel(cell.power_dbm, cell.distance_m);
  channel.validate();

  TrialOutcome out;
  if (cfg.user_model.kind == UserModel::Kind::fixed) {
    out.user = cfg.user_model.location;
  } else {
    Rng user_rng(mix_seed({seed, kUserStream}));
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    out.user.alpha1 = uniform(user_rng);
    out.user.alpha2 = uniform(user_rng);
  }

  const PhaseGrid grid1 = grid_for_axis(channel, Axis::first);
  const PhaseGrid grid2 = grid_for_axis(channel, Axis::second);
  const DiscreteOptimum opt = discrete_optimum(channel, out.user, grid1, grid2);
  out.k1_star = opt.k1;
  out.k2_star = opt.k2;
  out.oracle_rate = achievable_rate(channel, out.user, out.user.alpha1, out.user.alpha2, cell.n,
                                    cfg.total_slots);
  out.oracle_discrete_rate = achievable_rate(channel, out.user, grid1.value(opt.k1),
                                             grid2.value(opt.k2), cell.n, cfg.total_slots);

  const std::size_t beta2_init = cfg.beta2_init_index.value_or(grid2.midpoint_index());
  RssEnvironment env(channel, out.user, mix_seed({seed, cell_id(cell)}), cell.n);
  try {
    const PolicyOutput pick = run_two_phase(cell.policy, env, grid1, grid2, cell.n, beta2_init);
    out.k1 = pick.k1;
    out.k2 = pick.k2;
    out.pilots_used = pick.pilots_used;
    out.correct = pick.k1 == opt.k1 && pick.k2 == opt.k2;
    out.rate = achievable_rate(channel, out.user, grid1.value(pick.k1), grid2.value(pick.k2),
                               cell.n, cfg.total_slots);
  } catch (const Error& e) {
    out.failed = true;
    out.failure = std::string(to_string(e.kind())) + ": " + e.what();
    out.correct = false;
    out.pilots_used = env.pilots_used();
  }
  return out;
}

CellResult aggregate(const CellKey& key, const std::vector<TrialOutcome>& outcomes) {
  CellResult r;
  r.key = key;
  r.trials = outcomes.size();
  if (outcomes.empty()) return r;
  const double count = static_cast<double>(outcomes.size());
  double errors = 0.0, rate_sum = 0.0, pilots = 0.0, oracle = 0.0;
  for (const auto& o : outcomes) {
    errors += o.correct ? 0.0 : 1.0;
    rate_sum += o.rate;
    pilots += static_cast<double>(o.pilots_used);
    oracle += o.oracle_rate;
    r.failed_trials += o.failed ? 1 : 0;
  }
  r.error_rate = errors / count;
  r.error_ci95 = 1.96 * std::sqrt(r.error_rate * (1.0 - r.error_rate) / count);
  r.mean_rate = rate_sum / count;
  r.mean_pilots = pilots / count;
  r.oracle_rate = oracle / count;
  if (outcomes.size() > 1) {
    double ss = 0.0;
    for (const auto& o : outcomes) ss += (o.rate - r.mean_rate) * (o.rate - r.mean_rate);
    r.rate_ci95 = 1.96 * std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
  }
  return r;
}

std::vector<TrialOutcome> run_cell(const ExperimentConfig& cfg, const CellKey& cell) {
  const std::size_t trials = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialOutcome> outcomes(trials);
  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < trials; i = next++) {
      try {
        outcomes[i] = run_trial(cfg, cell, trial_seed(cfg.base_seed, i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

namespace {

bool cell_less(const CellResult& x, const CellResult& y) {
  return std::make_tuple(to_string(x.key.policy), x.key.distance_m, x.key.power_dbm, x.key.n) <
         std::make_tuple(to_string(y.key.policy), y.key.distance_m, y.key.power_dbm, y.key.n);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  for (Policy policy : cfg.policies) {
    for (std::uint64_t n : cfg.budgets) {
      for (double power : cfg.pilot_power_dbm) {
        for (double distance : cfg.distance_m) {
          const CellKey key{policy, n, power, distance};
          result.cells.push_back(aggregate(key, run_cell(cfg, key)));
        }
      }
    }
  }
  std::stable_sort(result.cells.begin(), result.cells.end(), cell_less);
  return result;
}

namespace {

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::parse_error,
                "line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

std::uint64_t parse_count(const std::string& s, std::size_t line_no) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorKind::parse_error,
                "line " + std::to_string(line_no) + ": bad count '" + s + "'");
  }
  return std::stoull(s);
}

}  // namespace

std::string format_results(const ExperimentResult& result) {
  std::vector<CellResult> cells = result.cells;
  std::stable_sort(cells.begin(), cells.end(), cell_less);
  std::string out = std::string(kResultsHeader) + "\n";
  for (const auto& c : cells) {
    out += std::string(to_string(c.key.policy)) + "," + std::to_string(c.key.n) + "," +
           fmt9(c.key.power_dbm) + "," + fmt9(c.key.distance_m) + "," +
           std::to_string(c.trials) + "," + fmt9(c.error_rate) + "," + fmt9(c.error_ci95) +
           "," + fmt9(c.mean_rate) + "," + fmt9(c.rate_ci95) + "," + fmt9(c.mean_pilots) +
           "," + fmt9(c.oracle_rate) + "\n";
  }
  return out;
}

ExperimentResult parse_results(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::parse_error, "empty results file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) throw Error(ErrorKind::parse_error, "unexpected results header");

  ExperimentResult result;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) {
      throw Error(ErrorKind::parse_error,
                  "line " + std::to_string(line_no) + ": expected 11 fields");
    }
    CellResult c;
    try {
      c.key.policy = parse_policy(f[0]);
    } catch (const Error&) {
      throw Error(ErrorKind::parse_error,
                  "line " + std::to_string(line_no) + ": unknown policy '" + f[0] + "'");
    }
    c.key.n = parse_count(f[1], line_no);
    c.key.power_dbm = parse_double(f[2], line_no);
    c.key.distance_m = parse_double(f[3], line_no);
    c.trials = parse_count(f[4], line_no);
    c.error_rate = parse_double(f[5], line_no);
    c.error_ci95 = parse_double(f[6], line_no);
    c.mean_rate = parse_double(f[7], line_no);
    c.rate_ci95 = parse_double(f[8], line_no);
    c.mean_pilots = parse_double(f[9], line_no);
    c.oracle_rate = parse_double(f[10], line_no);
    result.cells.push_back(c);
  }
  return result;
}

void write_results(const ExperimentResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io_error, "cannot write " + path.string());
  out << format_results(result);
  if (!out) throw Error(ErrorKind::io_error, "write failed for " + path.string());
}

ExperimentResult read_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_results(ss.str());
}

}  // namespace holobeam
