#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "holobeam/bandit.hpp"
#include "holobeam/bounds.hpp"
#include "holobeam/config.hpp"

namespace holobeam {

struct CellKey {
  Policy policy = Policy::holobeam;
  std::uint64_t n = 0;
  double power_dbm = 0.0;
  double distance_m = 0.0;
};

struct TrialOutcome {
  UserLocation user;
  std::size_t k1_star = 0;
  std::size_t k2_star = 0;
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  bool correct = false;
  std::uint64_t pilots_used = 0;
  double rate = 0.0;                  // achievable rate of the selected pair
  double oracle_rate = 0.0;           // rate at beta = alpha
  double oracle_discrete_rate = 0.0;  // rate at the discrete optimum
  bool failed = false;                // the policy could not run; counted as an error
  std::string failure;

  bool operator==(const TrialOutcome&) const = default;
};

/// One trial for one cell. The user is drawn from a stream that depends only
/// on trial_seed, so every cell sharing a trial index sees the same user;
/// pilot noise comes from a stream mixed with the cell identity.
TrialOutcome run_trial(const ExperimentConfig& cfg, const CellKey& cell,
                       std::uint64_t trial_seed);

/// Bound inputs for one user: Delta1 from the axis-1 profile with beta2 frozen
/// at its initial grid value, Delta2 from the axis-2 profile with beta1 at the
/// discrete optimum.
BoundInputs bound_inputs_for(const HmtConfig& cfg, const UserLocation& user, double n,
                             std::optional<std::size_t> beta2_init_index = std::nullopt);

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index);
std::uint64_t cell_id(const CellKey& cell);

struct CellResult {
  CellKey key;
  std::uint64_t trials = 0;
  double error_rate = 0.0;
  double error_ci95 = 0.0;
  double mean_rate = 0.0;
  double rate_ci95 = 0.0;
  double mean_pilots = 0.0;
  double oracle_rate = 0.0;
  std::uint64_t failed_trials = 0;  // not persisted
};

struct ExperimentResult {
  std::vector<CellResult> cells;  // sorted by (policy, distance, power, n)
};

/// Aggregates one cell from its outcomes (in trial order).
CellResult aggregate(const CellKey& key, const std::vector<TrialOutcome>& outcomes);

/// Runs every trial of one cell; trials may run on several threads, the
/// returned vector is in trial-index order.
std::vector<TrialOutcome> run_cell(const ExperimentConfig& cfg, const CellKey& cell);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kResultsHeader =
    "policy,n,power_dbm,distance_m,trials,error_rate,error_ci95,mean_rate,rate_ci95,"
    "mean_pilots,oracle_rate";

std::string format_results(const ExperimentResult& result);
ExperimentResult parse_results(const std::string& csv);
void write_results(const ExperimentResult& result, const std::filesystem::path& path);
ExperimentResult read_results(const std::filesystem::path& path);

}  // namespace holobeam
