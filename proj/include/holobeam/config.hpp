#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "holobeam/bandit.hpp"
#include "holobeam/channel.hpp"

namespace holobeam {

struct UserModel {
  enum class Kind { uniform, fixed };
  Kind kind = Kind::uniform;
  UserLocation location;  // used when kind == fixed
};

/// Experiment description. Powers are in dBm, geometry in meters.
struct ExperimentConfig {
  double aperture_width = 1.0;
  double aperture_length = 1.0;
  double wavelength = 0.01;
  double element_pitch = 0.0025;
  std::optional<double> radiation_factor;  // default 1.6 * pitch / wavelength
  double noise_dbm = -115.0;
  std::vector<double> pilot_power_dbm{20.0};
  std::vector<double> distance_m{800.0};
  std::optional<double> data_power_dbm;  // default: equal to the pilot power
  std::vector<std::uint64_t> budgets{200};
  std::vector<Policy> policies{Policy::holobeam};
  std::uint64_t trials = 1000;
  std::uint64_t base_seed = 20240101;
  UserModel user_model;
  std::uint64_t total_slots = 10000;
  std::optional<std::size_t> beta2_init_index;  // default: grid midpoint
  unsigned threads = 0;                         // 0: hardware concurrency

  HmtConfig channel(double pilot_dbm, double distance) const;

  /// Throws Error(invalid_config).
  void validate() const;
};

/// JSON ingestion; unknown keys are rejected. Throws Error(invalid_config)
/// on malformed content and Error(io_error) when the file cannot be read.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace holobeam
