#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "holobeam/channel.hpp"
#include "holobeam/grid.hpp"

namespace holobeam {

/// A finite set of arms with i.i.d. rewards per arm.
class ArmEnvironment {
 public:
  virtual ~ArmEnvironment() = default;
  virtual std::size_t arm_count() const = 0;
  virtual double pull(std::size_t arm) = 0;
  virtual std::uint64_t pulls_used() const = 0;
};

/// Arms are the values of one grid axis; the other axis is frozen.
class AxisEnvironment final : public ArmEnvironment {
 public:
  AxisEnvironment(RssEnvironment& env, const PhaseGrid& grid, Axis axis, double frozen_beta);

  std::size_t arm_count() const override { return grid_.size(); }
  double pull(std::size_t arm) override;
  std::uint64_t pulls_used() const override { return pulls_; }

 private:
  RssEnvironment& env_;
  const PhaseGrid& grid_;
  Axis axis_;
  double frozen_beta_;
  std::uint64_t pulls_ = 0;
};

/// Arms with fixed means plus Gaussian noise of the given standard deviation.
class GaussianArmsEnvironment final : public ArmEnvironment {
 public:
  GaussianArmsEnvironment(std::vector<double> means, double noise_sd, std::uint64_t seed);

  std::size_t arm_count() const override { return means_.size(); }
  double pull(std::size_t arm) override;
  std::uint64_t pulls_used() const override { return pulls_; }

 private:
  std::vector<double> means_;
  double noise_sd_;
  Rng rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uint64_t pulls_ = 0;
};

/// ceil(log2(K/3) / log2(3/2)); 0 for K = 3.
int num_batches(std::size_t arm_count);

/// Exact rational share of the phase budget carried by one batch.
struct Fraction {
  std::int64_t num;
  std::int64_t den;
};

/// Ideal batch shares N^l / (n/2), l = 1..L+1. They sum to exactly one.
std::vector<Fraction> ideal_batch_fractions(int batches);

struct BatchSchedule {
  int batches = 0;                   // L
  std::vector<std::uint64_t> sizes;  // L + 1 entries, the last is the final batch
};

/// Smallest phase budget for which every quartet batch gets one pilot per
/// member and the final batch one pilot per survivor: 4L + 5, or 3 when L = 0.
std::uint64_t minimal_phase_budget(int batches);

/// Floors the ideal sizes, lifts quartet batches to at least 4 pilots and
/// gives the remainder to the final batch. Sizes always sum to n_half.
BatchSchedule batch_schedule(std::uint64_t n_half, int batches);

/// Inclusive index interval [first, last].
struct Interval {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last - first + 1; }
  bool operator==(const Interval&) const = default;
};

enum class QuartetMember { a, b, c, d };

/// Absolute indices of positions 1, ceil(j/3), floor(2j/3), j of the interval.
struct Quartet {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t c = 0;
  std::size_t d = 0;

  std::size_t at(QuartetMember m) const;
  bool operator==(const Quartet&) const = default;
};

Quartet quartet(Interval active);

/// A or B best keeps [A..C]; C or D best keeps [B..D]. When B and C coincide
/// (j = 4) and that arm wins, [B..D] is kept so the peak cannot be dropped.
Interval eliminate(Interval active, const Quartet& q, QuartetMember best);

struct BatchRecord {
  Interval active;
  Quartet members;
  std::array<double, 4> means{};  // empirical means by member (merged members share)
  std::uint64_t pilots = 0;
  QuartetMember best = QuartetMember::a;
  Interval survivors;
};

struct EliminationTrace {
  BatchSchedule schedule;
  std::vector<BatchRecord> batches;
  Interval final_set;
  std::vector<double> final_means;
};

/// Batched unimodal elimination over one axis with a fixed budget. Returns
/// the selected arm index. Uses at most n_half pulls.
std::size_t beta_i_holobeam(ArmEnvironment& env, std::uint64_t n_half,
                            EliminationTrace* trace = nullptr);

/// Standard sequential halving over ceil(log2 K) rounds, fresh means per
/// round, lower index on ties. Requires n_half >= K.
std::size_t sequential_halving(ArmEnvironment& env, std::uint64_t n_half);

/// floor(n_half / K) pulls per arm, then the empirical argmax.
std::size_t uniform_explore(ArmEnvironment& env, std::uint64_t n_half);

enum class Policy { holobeam, seq_halving, uniform };

std::string_view to_string(Policy policy);
Policy parse_policy(std::string_view name);

struct PolicyOutput {
  std::size_t k1 = 0;
  std::size_t k2 = 0;
  std::uint64_t pilots_used = 0;
};

/// Two-phase search: axis 1 with beta2 frozen at grid2[beta2_init_index]
/// using floor(n/2) pilots, then axis 2 with beta1 frozen at the phase-1
/// pick using the remaining pilots. The per-axis search is the given policy.
PolicyOutput run_two_phase(Policy policy, RssEnvironment& env, const PhaseGrid& grid1,
                           const PhaseGrid& grid2, std::uint64_t n,
                           std::size_t beta2_init_index);

inline PolicyOutput holobeam(RssEnvironment& env, const PhaseGrid& grid1,
                             const PhaseGrid& grid2, std::uint64_t n,
                             std::size_t beta2_init_index) {
  return run_two_phase(Policy::holobeam, env, grid1, grid2, n, beta2_init_index);
}

}  // namespace holobeam
