#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "holobeam/channel.hpp"

namespace holobeam {

enum class Axis { first, second };

/// Uniform set of phase-shift parameters {start + k * step : k = 0..count-1}.
/// Indices are zero-based throughout the library.
class PhaseGrid {
 public:
  PhaseGrid(double start, double step, std::size_t count);

  double start() const { return start_; }
  double step() const { return step_; }
  std::size_t size() const { return count_; }
  double value(std::size_t k) const;
  std::vector<double> values() const;

  /// Index of the value closest to zero (lower index on ties).
  std::size_t midpoint_index() const;

 private:
  double start_;
  double step_;
  std::size_t count_;
};

/// Grid for one axis with step 1/k_axis and ceil(2 k_axis) + 1 points from -1.
/// The top endpoint is not clamped to 1. Values of 2 k_axis within 1e-9 of an
/// integer are snapped so that 1/0.01-style rounding does not add a point.
PhaseGrid build_grid(double k_axis);

PhaseGrid grid_for_axis(const HmtConfig& cfg, Axis axis);

struct DiscreteOptimum {
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  double mean_at_opt = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
};

/// Joint argmax of the mean RSS over grid1 x grid2, computed per axis since
/// the objective is separable. Values within a relative 1e-12 are treated as
/// ties and resolved to the lower index.
DiscreteOptimum discrete_optimum(const HmtConfig& cfg, const UserLocation& user,
                                 const PhaseGrid& grid1, const PhaseGrid& grid2);

/// Mean RSS along one axis with the other beta frozen.
std::vector<double> restricted_mean_profile(const HmtConfig& cfg, const UserLocation& user,
                                            Axis axis, const PhaseGrid& grid,
                                            double fixed_other_beta);

struct NeighborGap {
  double value = 0.0;
  bool degenerate = false;  // value == 0
};

/// min over k = 1..K-2 (zero-based) of |profile[k] - profile[k-1]|. The last
/// pair is excluded, matching the range used by the error bound.
NeighborGap min_neighbor_gap(std::span<const double> profile);

/// mu(alpha) - mu(beta*) = G (1 - |sinc(Kx pi eps1) sinc(Ky pi eps2)|^2).
double quantization_loss(const HmtConfig& cfg, const DiscreteOptimum& opt);

/// G (1 - (2/pi)^4).
double quantization_loss_bound(const HmtConfig& cfg);

}  // namespace holobeam
