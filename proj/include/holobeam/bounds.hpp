#pragma once

#include <array>
#include <cstddef>

#include "holobeam/rng.hpp"

namespace holobeam {

struct BoundInputs {
  double n = 0.0;  // pilot budget; real-valued so that asymptotic budgets fit
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  double delta1 = 0.0;  // minimum neighbor gaps, watts
  double delta2 = 0.0;
  double noise_power = 0.0;
  double gain = 0.0;  // G
};

struct BoundAxisTerms {
  double batches = 0.0;        // real-valued log2(K/3) / log2(3/2)
  double exponent = 0.0;       // n Delta^2 / (1296 sigma^4 (1 + 3G/sigma^2)^4)
  double elimination = 0.0;    // 4 (L - 1) exp(-exponent)
  double early_batches = 0.0;  // 8 exp(-K exponent)
};

struct ErrorBound {
  double value = 0.0;
  /// Vacuous limit minus value, i.e. how far the exponentials pull the bound
  /// below its Delta -> 0 limit. Evaluated with expm1 so it stays resolvable
  /// when value itself rounds to the limit.
  double slack = 0.0;
  bool underflow = false;  // value fell below 1e-300 and was reported as 0
  std::array<BoundAxisTerms, 2> axes{};
};

/// Error-probability upper bound of the two-phase search. May exceed one.
/// Throws invalid_argument unless n > K1 + K2 and all inputs are positive,
/// degenerate_gap when a gap is zero.
ErrorBound holobeam_error_bound(const BoundInputs& in);

/// Pr(X > Y) <= 2 exp{-nu (nu+q1)^2 (q2-q1)^2 / (4 (nu+2q2)^2 (2nu+q1+q2)^2)}
/// for X ~ chi2_nu(q1), Y ~ chi2_nu(q2) independent, q1 < q2.
double chi2_dominance_bound(double nu, double q1, double q2);

/// delta = (q2 - q1) / (2 nu + q1 + q2), the split point used by the bound.
double chi2_split(double nu, double q1, double q2);

/// Upper-tail component: Pr(X > (nu+q1)(1+delta)) for X ~ chi2_nu(q1).
double chi2_upper_tail_bound(double nu, double q1, double q2);

/// Lower-tail component: Pr(Y < (nu+q2)(1-delta)) for Y ~ chi2_nu(q2).
double chi2_lower_tail_bound(double nu, double q1, double q2);

/// One draw of a non-central chi-squared variable with even nu degrees of
/// freedom, built from nu/2 unit complex Gaussians with the offset on one.
double noncentral_chi2_sample(Rng& rng, int nu, double q);

}  // namespace holobeam
