#include "holobeam/grid.hpp"

#include <cmath>
#include <numbers>

#include "holobeam/error.hpp"

namespace holobeam {

PhaseGrid::PhaseGrid(double start, double step, std::size_t count)
    : start_(start), step_(step), count_(count) {
  if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start) || count == 0) {
    throw Error(ErrorKind::invalid_argument, "phase grid needs a positive step and count");
  }
}

double PhaseGrid::value(std::size_t k) const {
  return start_ + static_cast<double>(k) * step_;
}

std::vector<double> PhaseGrid::values() const {
  std::vector<double> out(count_);
  for (std::size_t k = 0; k < count_; ++k) out[k] = value(k);
  return out;
}

std::size_t PhaseGrid::midpoint_index() const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < count_; ++k) {
    if (std::abs(value(k)) < std::abs(value(best))) best = k;
  }
  return best;
}

PhaseGrid build_grid(double k_axis) {
  if (!(k_axis > 0.0) || !std::isfinite(k_axis)) {
    throw Error(ErrorKind::invalid_argument, "axis ratio must be finite and positive");
  }
  const double span = 2.0 * k_axis;
  const double nearest = std::round(span);
  const double cells =
      std::abs(span - nearest) <= 1e-9 * std::max(1.0, span) ? nearest : std::ceil(span);
  return PhaseGrid(-1.0, 1.0 / k_axis, static_cast<std::size_t>(cells) + 1);
}

PhaseGrid grid_for_axis(const HmtConfig& cfg, Axis axis) {
  cfg.validate();
  return build_grid(axis == Axis::first ? cfg.kx() : cfg.ky());
}

namespace {

struct AxisOptimum {
  std::size_t index;
  double eps;
};

AxisOptimum axis_argmax(double k_axis, double alpha, const PhaseGrid& grid) {
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double f = axis_factor(k_axis, alpha, grid.value(k));
    const double v = f * f;
    if (v > best_value * (1.0 + 1e-12)) {
      best = k;
      best_value = v;
    }
  }
  return {best, std::abs(grid.value(best) - alpha)};
}

}  // namespace

DiscreteOptimum discrete_optimum(const HmtConfig& cfg, const UserLocation& user,
                                 const PhaseGrid& grid1, const PhaseGrid& grid2) {
  cfg.validate();
  const AxisOptimum o1 = axis_argmax(cfg.kx(), user.alpha1, grid1);
  const AxisOptimum o2 = axis_argmax(cfg.ky(), user.alpha2, grid2);
  DiscreteOptimum out;
  out.k1 = o1.index;
  out.k2 = o2.index;
  out.eps1 = o1.eps;
  out.eps2 = o2.eps;
  out.mean_at_opt = mean_rss(cfg, user, grid1.value(o1.index), grid2.value(o2.index));
  return out;
}

std::vector<double> restricted_mean_profile(const HmtConfig& cfg, const UserLocation& user,
                                            Axis axis, const PhaseGrid& grid,
                                            double fixed_other_beta) {
  if (!std::isfinite(fixed_other_beta)) {
    throw Error(ErrorKind::invalid_argument, "frozen beta must be finite");
  }
  std::vector<double> profile(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    profile[k] = axis == Axis::first ? mean_rss(cfg, user, grid.value(k), fixed_other_beta)
                                     : mean_rss(cfg, user, fixed_other_beta, grid.value(k));
  }
  return profile;
}

NeighborGap min_neighbor_gap(std::span<const double> profile) {
  if (profile.size() < 3) {
    throw Error(ErrorKind::invalid_argument, "neighbor gap needs at least three values");
  }
  double gap = std::abs(profile[1] - profile[0]);
  for (std::size_t k = 2; k + 1 < profile.size(); ++k) {
    gap = std::min(gap, std::abs(profile[k] - profile[k - 1]));
  }
  return {gap, gap == 0.0};
}

double quantization_loss(const HmtConfig& cfg, const DiscreteOptimum& opt) {
  cfg.validate();
  const double f = sinc(cfg.kx() * std::numbers::pi * opt.eps1) *
                   sinc(cfg.ky() * std::numbers::pi * opt.eps2);
  return cfg.gain_constant() * (1.0 - f * f);
}

double quantization_loss_bound(const HmtConfig& cfg) {
  const double r = 2.0 / std::numbers::pi;
  return cfg.gain_constant() * (1.0 - r * r * r * r);
}

}  // namespace holobeam
