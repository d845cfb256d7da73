#include "holobeam/bounds.hpp"

#include <cmath>
#include <random>
#include <string>

#include "holobeam/error.hpp"

namespace holobeam {

ErrorBound holobeam_error_bound(const BoundInputs& in) {
  if (!(in.n > 0.0) || !(in.noise_power > 0.0) || !(in.gain > 0.0) || in.k1 < 3 ||
      in.k2 < 3 || !(in.delta1 >= 0.0) || !(in.delta2 >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "bound inputs must be positive with K >= 3");
  }
  if (!(in.n > static_cast<double>(in.k1 + in.k2))) {
    throw Error(ErrorKind::invalid_argument, "bound requires n > K1 + K2");
  }
  if (in.delta1 == 0.0 || in.delta2 == 0.0) {
    throw Error(ErrorKind::degenerate_gap, "bound requires strictly positive neighbor gaps");
  }

  // Work with Delta / sigma^2 so sigma^4 ~ 1e-29 never appears on its own.
  const double snr_term = std::pow(1.0 + 3.0 * in.gain / in.noise_power, 4);
  const std::array<std::size_t, 2> ks{in.k1, in.k2};
  const std::array<double, 2> deltas{in.delta1, in.delta2};

  ErrorBound out;
  for (std::size_t i = 0; i < 2; ++i) {
    auto& t = out.axes[i];
    const double k = static_cast<double>(ks[i]);
    const double ratio = deltas[i] / in.noise_power;
    t.batches = std::log2(k / 3.0) / std::log2(1.5);
    t.exponent = in.n * ratio * ratio / (1296.0 * snr_term);
    t.elimination = 4.0 * (t.batches - 1.0) * std::exp(-t.exponent);
    t.early_batches = 8.0 * std::exp(-k * t.exponent);
    out.value += t.elimination + t.early_batches;
    out.slack -= 4.0 * (t.batches - 1.0) * std::expm1(-t.exponent) +
                 8.0 * std::expm1(-k * t.exponent);
  }
  if (out.value < 1e-300) {
    out.value = 0.0;
    out.underflow = true;
  }
  return out;
}

namespace {

void check_chi2_args(double nu, double q1, double q2) {
  if (!(nu > 0.0) || !(q1 > 0.0) || !(q2 > 0.0) || !(q1 < q2)) {
    throw Error(ErrorKind::invalid_argument, "chi-squared bound needs nu, q1, q2 > 0 and q1 < q2");
  }
}

}  // namespace

double chi2_split(double nu, double q1, double q2) {
  check_chi2_args(nu, q1, q2);
  return (q2 - q1) / (2.0 * nu + q1 + q2);
}

double chi2_dominance_bound(double nu, double q1, double q2) {
  check_chi2_args(nu, q1, q2);
  const double a = nu + q1;
  const double b = nu + 2.0 * q2;
  const double c = 2.0 * nu + q1 + q2;
  const double gap = q2 - q1;
  return 2.0 * std::exp(-nu * a * a * gap * gap / (4.0 * b * b * c * c));
}

double chi2_upper_tail_bound(double nu, double q1, double q2) {
  const double delta = chi2_split(nu, q1, q2);
  const double a = nu + q1;
  const double b = nu + 2.0 * q1;
  return std::exp(-nu * a * a * delta * delta / (4.0 * b * (b + a * delta)));
}

double chi2_lower_tail_bound(double nu, double q1, double q2) {
  const double delta = chi2_split(nu, q1, q2);
  const double a = nu + q1;
  const double b = nu + 2.0 * q2;
  return std::exp(-nu * a * a * delta * delta / (4.0 * b * b));
}

double noncentral_chi2_sample(Rng& rng, int nu, double q) {
  if (nu < 2 || nu % 2 != 0 || !(q >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "sampler needs even nu >= 2 and q >= 0");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  const double offset = std::sqrt(q);
  double sum = 0.0;
  for (int i = 0; i < nu / 2; ++i) {
    const double re = normal(rng) + (i == 0 ? offset : 0.0);
    const double im = normal(rng);
    sum += re * re + im * im;
  }
  return sum;
}

}  // namespace holobeam
