#pragma once

#include <cstdint>
#include <optional>

#include "holobeam/rng.hpp"

namespace holobeam {

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Physical parameters of the metasurface link. All quantities in SI units
/// (meters, watts); dBm conversion happens when configs are ingested.
struct HmtConfig {
  double aperture_width = 1.0;     // Lx
  double aperture_length = 1.0;    // Ly
  double wavelength = 0.01;        // 30 GHz carrier
  double element_pitch = 0.0025;   // lambda / 4
  double radiation_factor = 0.4;   // 1.6 * pitch / wavelength
  double distance = 800.0;
  double pilot_power = 0.1;        // 20 dBm
  double noise_power = 3.1622776601683795e-15;  // -115 dBm
  std::optional<double> data_power;  // falls back to pilot_power

  /// Defaults used for the reference experiments, with the pilot power in
  /// dBm and the link distance in meters.
  static HmtConfig reference(double pilot_power_dbm = 20.0, double distance_m = 800.0);

  /// Throws Error(invalid_config) when any field is non-positive or the
  /// element pitch exceeds the wavelength.
  void validate() const;

  double kx() const { return aperture_width / wavelength; }
  double ky() const { return aperture_length / wavelength; }
  double tx_power() const { return data_power.value_or(pilot_power); }

  /// |H| at perfect alignment, i.e. the channel prefactor magnitude.
  double peak_gain_magnitude() const;
  /// P * |prefactor|^2; the peak of the noiseless RSS.
  double gain_constant() const;
};

/// Direction parameters of the user; the optimal (beta1, beta2).
struct UserLocation {
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  bool operator==(const UserLocation&) const = default;

  void validate() const;
};

/// sin(x)/x with sinc(0) = 1.
double sinc(double x);

/// Signed per-axis factor sinc(K pi (alpha - beta)).
double axis_factor(double k_axis, double alpha, double beta);

double far_field_gain_magnitude(const HmtConfig& cfg, const UserLocation& user,
                                double beta1, double beta2);

/// P |H|^2 + sigma^2.
double mean_rss(const HmtConfig& cfg, const UserLocation& user, double beta1, double beta2);

/// (T - n_pilots) / T * log2(1 + P_tx |H|^2 / sigma^2), in bits/s/Hz.
double achievable_rate(const HmtConfig& cfg, const UserLocation& user, double beta1,
                       double beta2, std::uint64_t n_pilots, std::uint64_t total_slots);

/// Noisy RSS sampler for one user. Owns its RNG stream and counts pilots;
/// not safe for concurrent use.
class RssEnvironment {
 public:
  RssEnvironment(const HmtConfig& cfg, const UserLocation& user, std::uint64_t seed,
                 std::optional<std::uint64_t> budget = std::nullopt);

  /// One pilot: |sqrt(P) H + zeta|^2 with zeta ~ CN(0, sigma^2).
  double sample(double beta1, double beta2);

  std::uint64_t pilots_used() const { return pilots_used_; }
  std::optional<std::uint64_t> budget() const { return budget_; }
  const HmtConfig& config() const { return cfg_; }
  const UserLocation& user() const { return user_; }

 private:
  HmtConfig cfg_;
  UserLocation user_;
  Rng rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uint64_t pilots_used_ = 0;
  std::optional<std::uint64_t> budget_;
};

}  // namespace holobeam
