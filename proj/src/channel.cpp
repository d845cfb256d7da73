#include "holobeam/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "holobeam/error.hpp"

namespace holobeam {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_config: return "invalid-config";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::insufficient_budget: return "insufficient-budget";
    case ErrorKind::budget_exhausted: return "budget-exhausted";
    case ErrorKind::degenerate_gap: return "degenerate-gap";
    case ErrorKind::io_error: return "io-error";
    case ErrorKind::parse_error: return "parse-error";
  }
  return "unknown";
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1e3); }

HmtConfig HmtConfig::reference(double pilot_power_dbm, double distance_m) {
  HmtConfig cfg;
  cfg.wavelength = 0.01;
  cfg.element_pitch = cfg.wavelength / 4.0;
  cfg.radiation_factor = 1.6 * cfg.element_pitch / cfg.wavelength;
  cfg.noise_power = dbm_to_watts(-115.0);
  cfg.pilot_power = dbm_to_watts(pilot_power_dbm);
  cfg.distance = distance_m;
  return cfg;
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::invalid_config,
                std::string(name) + " must be finite and strictly positive");
  }
}

}  // namespace

void HmtConfig::validate() const {
  require_positive(aperture_width, "aperture_width");
  require_positive(aperture_length, "aperture_length");
  require_positive(wavelength, "wavelength");
  require_positive(element_pitch, "element_pitch");
  require_positive(radiation_factor, "radiation_factor");
  require_positive(distance, "distance");
  require_positive(pilot_power, "pilot_power");
  require_positive(noise_power, "noise_power");
  if (data_power) require_positive(*data_power, "data_power");
  if (element_pitch > wavelength) {
    throw Error(ErrorKind::invalid_config, "element_pitch must not exceed the wavelength");
  }
}

double HmtConfig::peak_gain_magnitude() const {
  return std::sqrt(radiation_factor) * wavelength / (4.0 * std::numbers::pi * distance) *
         aperture_width * aperture_length;
}

double HmtConfig::gain_constant() const {
  const double h = peak_gain_magnitude();
  return pilot_power * h * h;
}

void UserLocation::validate() const {
  if (!(std::abs(alpha1) <= 1.0) || !(std::abs(alpha2) <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "user direction parameters must lie in [-1, 1]");
  }
}

double sinc(double x) {
  // Series branch keeps the peak exact and avoids 0/0.
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double axis_factor(double k_axis, double alpha, double beta) {
  return sinc(k_axis * std::numbers::pi * (alpha - beta));
}

double far_field_gain_magnitude(const HmtConfig& cfg, const UserLocation& user, double beta1,
                                double beta2) {
  cfg.validate();
  return cfg.peak_gain_magnitude() *
         std::abs(axis_factor(cfg.kx(), user.alpha1, beta1) *
                  axis_factor(cfg.ky(), user.alpha2, beta2));
}

double mean_rss(const HmtConfig& cfg, const UserLocation& user, double beta1, double beta2) {
  const double h = far_field_gain_magnitude(cfg, user, beta1, beta2);
  return cfg.pilot_power * h * h + cfg.noise_power;
}

double achievable_rate(const HmtConfig& cfg, const UserLocation& user, double beta1,
                       double beta2, std::uint64_t n_pilots, std::uint64_t total_slots) {
  if (total_slots == 0 || n_pilots > total_slots) {
    throw Error(ErrorKind::invalid_argument, "pilot count must not exceed the block length");
  }
  const double h = far_field_gain_magnitude(cfg, user, beta1, beta2);
  const double snr = cfg.tx_power() * h * h / cfg.noise_power;
  const double data_fraction =
      static_cast<double>(total_slots - n_pilots) / static_cast<double>(total_slots);
  return data_fraction * std::log2(1.0 + snr);
}

RssEnvironment::RssEnvironment(const HmtConfig& cfg, const UserLocation& user,
                               std::uint64_t seed, std::optional<std::uint64_t> budget)
    : cfg_(cfg), user_(user), rng_(seed), budget_(budget) {
  cfg_.validate();
  user_.validate();
}

double RssEnvironment::sample(double beta1, double beta2) {
  if (budget_ && pilots_used_ >= *budget_) {
    throw Error(ErrorKind::budget_exhausted, "pilot budget exhausted");
  }
  ++pilots_used_;
  // The channel phase drops out of |.|^2 once the noise is circular, so the
  // signal is carried as a real amplitude.
  const double amplitude = std::sqrt(cfg_.pilot_power) * cfg_.peak_gain_magnitude() *
                           std::abs(axis_factor(cfg_.kx(), user_.alpha1, beta1) *
                                    axis_factor(cfg_.ky(), user_.alpha2, beta2));
  const double scale = std::sqrt(cfg_.noise_power / 2.0);
  const double re = amplitude + scale * normal_(rng_);
  const double im = scale * normal_(rng_);
  return re * re + im * im;
}

}  // namespace holobeam
