#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <random>

#include "holobeam/bounds.hpp"
#include "holobeam/error.hpp"
#include "holobeam/harness.hpp"

using namespace holobeam;
using boost::multiprecision::cpp_dec_float_50;

namespace {

// mpmath, 50 digits, user (0.5037, -0.4962) on the reference setup.
constexpr double kDelta1 = 7.1392584085427713e-26;
constexpr double kDelta2 = 1.3300452454776996e-21;
constexpr double kVacuous = 90.960383723460539549;
constexpr double kFirstBelowHalf = 2.4236152981207871e31;

BoundInputs sample_inputs() {
  return BoundInputs{1e4, 201, 201, 1e-16, 2e-16, 3.16e-15, 3.96e-14};
}

cpp_dec_float_50 reference_bound(const BoundInputs& in) {
  using R = cpp_dec_float_50;
  const R s2 = in.noise_power, g = in.gain;
  const R den = R(1296) * s2 * s2 * pow(R(1) + R(3) * g / s2, 4);
  R total = 0;
  const std::size_t ks[2] = {in.k1, in.k2};
  const double ds[2] = {in.delta1, in.delta2};
  for (int i = 0; i < 2; ++i) {
    const R k = R(static_cast<unsigned long long>(ks[i]));
    const R l = log(k / 3) / log(R(3) / 2);
    const R e = R(in.n) * R(ds[i]) * R(ds[i]) / den;
    total += 4 * ((l - 1) * exp(-e) + 2 * exp(-k * e));
  }
  return total;
}

}  // namespace

TEST(ErrorBound, VacuousLimit) {
  BoundInputs in = sample_inputs();
  in.delta1 = in.delta2 = 1e-40;
  EXPECT_NEAR(holobeam_error_bound(in).value, kVacuous, 1e-12);
}

TEST(ErrorBound, MatchesMultiprecision) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> lg(-2.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    BoundInputs in = sample_inputs();
    in.n = std::pow(10.0, 4.0 + lg(gen));
    in.k1 = 3 + static_cast<std::size_t>(t);
    in.k2 = 201;
    in.gain = in.noise_power * std::pow(10.0, lg(gen) / 2);
    in.delta1 = in.noise_power * std::pow(10.0, lg(gen) - 2.0);
    in.delta2 = in.noise_power * std::pow(10.0, lg(gen) - 2.0);
    if (in.n <= static_cast<double>(in.k1 + in.k2)) in.n = static_cast<double>(in.k1 + in.k2) + 1;
    const double ref = reference_bound(in).convert_to<double>();
    EXPECT_NEAR(holobeam_error_bound(in).value, ref, 1e-12 * ref);
  }
}

TEST(ErrorBound, MonotoneFiniteDifferences) {
  for (double n : {1e3, 1e5, 1e7}) {
    for (double d : {1e-17, 1e-16, 1e-15}) {
      BoundInputs in = sample_inputs();
      in.n = n;
      in.delta1 = d;
      in.delta2 = 2 * d;
      const ErrorBound base = holobeam_error_bound(in);
      BoundInputs more_n = in;
      more_n.n *= 1.01;
      BoundInputs more_d = in;
      more_d.delta1 *= 1.01;
      BoundInputs more_g = in;
      more_g.gain *= 1.01;
      EXPECT_GT(base.slack, 0.0);
      EXPECT_GT(holobeam_error_bound(more_n).slack, base.slack);
      EXPECT_GT(holobeam_error_bound(more_d).slack, base.slack);
      EXPECT_LT(holobeam_error_bound(more_g).slack, base.slack);
      EXPECT_LE(holobeam_error_bound(more_n).value, base.value);
    }
  }
  BoundInputs in = sample_inputs();
  in.delta1 = in.delta2 = 1e-15;
  double prev = INFINITY;
  for (double n = 1e3; n < 1e12; n *= 2) {
    in.n = n;
    const double v = holobeam_error_bound(in).value;
    EXPECT_LT(v, prev);
    prev = v;
    if (v == 0.0) break;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(ErrorBound, Underflow) {
  BoundInputs in = sample_inputs();
  in.n = 1e300;
  in.delta1 = in.delta2 = 1e-15;
  const auto b = holobeam_error_bound(in);
  EXPECT_EQ(b.value, 0.0);
  EXPECT_TRUE(b.underflow);
}

TEST(ErrorBound, Preconditions) {
  BoundInputs in = sample_inputs();
  in.n = 402;
  EXPECT_THROW(holobeam_error_bound(in), Error);
  in = sample_inputs();
  in.delta2 = 0.0;
  try {
    holobeam_error_bound(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_gap);
  }
  in = sample_inputs();
  in.k1 = 2;
  EXPECT_THROW(holobeam_error_bound(in), Error);
  in = sample_inputs();
  in.gain = -1;
  EXPECT_THROW(holobeam_error_bound(in), Error);
}

TEST(ErrorBound, ReferenceSetup) {
  const BoundInputs in = bound_inputs_for(HmtConfig::reference(), {0.5037, -0.4962}, 1e6);
  EXPECT_EQ(in.k1, 201u);
  // Gaps are differences of values near sigma^2, so they carry ~1e-5 relative rounding.
  EXPECT_NEAR(in.delta1, kDelta1, 1e-4 * kDelta1);
  EXPECT_NEAR(in.delta2, kDelta2, 1e-4 * kDelta2);
  const ErrorBound b = holobeam_error_bound(in);
  EXPECT_NEAR(b.value, kVacuous, 1e-9);
  EXPECT_NEAR(b.slack, 1.0172638268313729e-13, 1e-4 * 1.0172638268313729e-13);

  BoundInputs at = in;
  at.n = kFirstBelowHalf * 0.999;
  EXPECT_GT(holobeam_error_bound(at).value, 0.5);
  at.n = kFirstBelowHalf * 1.001;
  EXPECT_LT(holobeam_error_bound(at).value, 0.5);
}

TEST(Chi2Bound, HandExample) {
  EXPECT_NEAR(chi2_dominance_bound(2, 1, 3), 2.0 * std::exp(-72.0 / 16384.0), 1e-15);
  EXPECT_NEAR(chi2_dominance_bound(2, 1, 3), 1.991230221147036, 1e-14);
  EXPECT_NEAR(chi2_dominance_bound(4, 5, 5 + 1e-9), 2.0, 1e-12);
  EXPECT_THROW(chi2_dominance_bound(2, 3, 1), Error);
  EXPECT_THROW(chi2_dominance_bound(0, 1, 3), Error);
  EXPECT_THROW(chi2_dominance_bound(2, 0, 3), Error);
}

TEST(Chi2Bound, ComponentChainProperty) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.1, 50.0);
  for (int t = 0; t < 1000; ++t) {
    const double nu = 2.0 * std::ceil(u(gen) / 5.0);
    double q1 = u(gen), q2 = u(gen);
    if (q1 > q2) std::swap(q1, q2);
    if (q1 == q2) continue;
    const double delta = chi2_split(nu, q1, q2);
    EXPECT_NEAR(delta, (q2 - q1) / (2 * nu + q1 + q2), 1e-15);
    EXPECT_GT((nu + 2 * q2) * (nu + 2 * q2),
              (nu + 2 * q1) * (nu + 2 * q1 + (nu + q1) * delta));
    // Both components are no larger than the combined bound's halves.
    EXPECT_LE(chi2_upper_tail_bound(nu, q1, q2), chi2_dominance_bound(nu, q1, q2) / 2 + 1e-15);
    EXPECT_LE(chi2_lower_tail_bound(nu, q1, q2), chi2_dominance_bound(nu, q1, q2) / 2 + 1e-15);
    EXPECT_GT(chi2_dominance_bound(nu, q1, q2), 0.0);
    EXPECT_LE(chi2_dominance_bound(nu, q1, q2), 2.0);
  }
}

TEST(Chi2Bound, DominatesMonteCarlo) {
  Rng rng(77);
  const int draws = 1000000;
  const double nu = 4, q1 = 2, q2 = 20;
  const double delta = chi2_split(nu, q1, q2);
  int x_gt_y = 0, upper = 0, lower = 0;
  for (int i = 0; i < draws; ++i) {
    const double x = noncentral_chi2_sample(rng, 4, q1);
    const double y = noncentral_chi2_sample(rng, 4, q2);
    x_gt_y += x > y ? 1 : 0;
    upper += x > (nu + q1) * (1 + delta) ? 1 : 0;
    lower += y < (nu + q2) * (1 - delta) ? 1 : 0;
  }
  EXPECT_LE(x_gt_y / double(draws), chi2_dominance_bound(nu, q1, q2));
  EXPECT_LE(upper / double(draws), chi2_upper_tail_bound(nu, q1, q2));
  EXPECT_LE(lower / double(draws), chi2_lower_tail_bound(nu, q1, q2));
}

TEST(Chi2Sampler, Moments) {
  Rng rng(1);
  const int n = 100000;
  double s = 0;
  for (int i = 0; i < n; ++i) s += noncentral_chi2_sample(rng, 2, 0.0);
  EXPECT_NEAR(s / n, 2.0, 0.04);
  for (auto [nu, q] : {std::pair{2, 3.0}, std::pair{6, 10.0}, std::pair{10, 0.5}}) {
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
      const double x = noncentral_chi2_sample(rng, nu, q);
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n, var = sum2 / n - mean * mean;
    EXPECT_NEAR(mean, nu + q, 0.01 * (nu + q));
    EXPECT_NEAR(var, 2 * (nu + 2 * q), 0.03 * 2 * (nu + 2 * q));
  }
  EXPECT_THROW(noncentral_chi2_sample(rng, 3, 1.0), Error);
  EXPECT_THROW(noncentral_chi2_sample(rng, 2, -1.0), Error);
}
