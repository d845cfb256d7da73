#include "holobeam/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "holobeam/error.hpp"

namespace holobeam {

AxisEnvironment::AxisEnvironment(RssEnvironment& env, const PhaseGrid& grid, Axis axis,
                                 double frozen_beta)
    : env_(env), grid_(grid), axis_(axis), frozen_beta_(frozen_beta) {}

double AxisEnvironment::pull(std::size_t arm) {
  const double beta = grid_.value(arm);
  ++pulls_;
  return axis_ == Axis::first ? env_.sample(beta, frozen_beta_)
                              : env_.sample(frozen_beta_, beta);
}

GaussianArmsEnvironment::GaussianArmsEnvironment(std::vector<double> means, double noise_sd,
                                                 std::uint64_t seed)
    : means_(std::move(means)), noise_sd_(noise_sd), rng_(seed) {
  if (means_.empty() || !(noise_sd_ >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "need at least one arm and a non-negative noise sd");
  }
}

double GaussianArmsEnvironment::pull(std::size_t arm) {
  ++pulls_;
  return means_.at(arm) + noise_sd_ * normal_(rng_);
}

int num_batches(std::size_t arm_count) {
  if (arm_count < 3) {
    throw Error(ErrorKind::invalid_argument, "batched elimination needs at least three arms");
  }
  if (arm_count == 3) return 0;
  const double ratio = std::log2(static_cast<double>(arm_count) / 3.0) / std::log2(1.5);
  return static_cast<int>(std::ceil(ratio));
}

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::int64_t>::max() / base) {
      throw Error(ErrorKind::invalid_argument, "batch count too large for exact shares");
    }
    r *= base;
  }
  return r;
}

Fraction reduced(std::int64_t num, std::int64_t den) {
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

}  // namespace

std::vector<Fraction> ideal_batch_fractions(int batches) {
  if (batches < 0) throw Error(ErrorKind::invalid_argument, "negative batch count");
  if (batches == 0) return {{1, 1}};
  if (batches == 1) return {{1, 2}, {1, 2}};
  const int L = batches;
  std::vector<Fraction> out;
  out.reserve(static_cast<std::size_t>(L) + 1);
  // l = 1, 2: 2^(L-2) / 3^(L-1); l >= 3: 2^(L-l+1) / 3^(L-l+2).
  const Fraction head = reduced(ipow(2, L - 2), ipow(3, L - 1));
  out.push_back(head);
  out.push_back(head);
  for (int l = 3; l <= L + 1; ++l) out.push_back(reduced(ipow(2, L - l + 1), ipow(3, L - l + 2)));
  return out;
}

std::uint64_t minimal_phase_budget(int batches) {
  // Up to five arms can survive the quartet batches, so the final batch
  // needs five pilots.
  return batches == 0 ? 3 : 4 * static_cast<std::uint64_t>(batches) + 5;
}

BatchSchedule batch_schedule(std::uint64_t n_half, int batches) {
  const std::uint64_t need = minimal_phase_budget(batches);
  if (n_half < need) {
    throw Error(ErrorKind::insufficient_budget,
                "phase budget " + std::to_string(n_half) + " below the minimum " +
                    std::to_string(need) + " for " + std::to_string(batches) + " batches");
  }
  BatchSchedule s;
  s.batches = batches;
  const auto shares = ideal_batch_fractions(batches);
  s.sizes.resize(shares.size());
  std::uint64_t used = 0;
  for (int l = 0; l < batches; ++l) {
    const auto& f = shares[static_cast<std::size_t>(l)];
    __extension__ using u128 = unsigned __int128;
    const auto ideal = static_cast<std::uint64_t>(
        (static_cast<u128>(n_half) * static_cast<std::uint64_t>(f.num)) /
        static_cast<std::uint64_t>(f.den));
    s.sizes[static_cast<std::size_t>(l)] = std::max<std::uint64_t>(ideal, 4);
    used += s.sizes[static_cast<std::size_t>(l)];
  }
  const std::uint64_t final_min = batches == 0 ? 3 : 5;
  // Lifting small batches to four pilots can eat into the final batch; take
  // the excess back from the latest quartet batches.
  for (int l = batches - 1; l >= 0 && used + final_min > n_half; --l) {
    auto& size = s.sizes[static_cast<std::size_t>(l)];
    const std::uint64_t give = std::min(size - 4, used + final_min - n_half);
    size -= give;
    used -= give;
  }
  s.sizes.back() = n_half - used;
  return s;
}

std::size_t Quartet::at(QuartetMember m) const {
  switch (m) {
    case QuartetMember::a: return a;
    case QuartetMember::b: return b;
    case QuartetMember::c: return c;
    case QuartetMember::d: return d;
  }
  return a;
}

Quartet quartet(Interval active) {
  if (active.last < active.first || active.size() < 3) {
    throw Error(ErrorKind::invalid_argument, "quartet needs an interval of at least three arms");
  }
  const std::size_t j = active.size();
  Quartet q;
  q.a = active.first;
  q.b = active.first + (j + 2) / 3 - 1;
  q.c = active.first + (2 * j) / 3 - 1;
  q.d = active.last;
  return q;
}

Interval eliminate(Interval active, const Quartet& q, QuartetMember best) {
  const bool merged_middle =
      q.b == q.c && (best == QuartetMember::b || best == QuartetMember::c);
  if (merged_middle) return {q.b, active.last};
  if (best == QuartetMember::a || best == QuartetMember::b) return {active.first, q.c};
  return {q.b, active.last};
}

namespace {

double sample_mean(ArmEnvironment& env, std::size_t arm, std::uint64_t pulls) {
  double sum = 0.0;
  for (std::uint64_t i = 0; i < pulls; ++i) sum += env.pull(arm);
  return sum / static_cast<double>(pulls);
}

// Index of the largest value, lower index on ties.
std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::distance(v.begin(), std::max_element(v.begin(), v.end())));
}

std::size_t round_robin_best(ArmEnvironment& env, std::uint64_t budget) {
  const std::size_t k = env.arm_count();
  if (budget < k) {
    throw Error(ErrorKind::insufficient_budget, "budget smaller than the number of arms");
  }
  const std::uint64_t per_arm = budget / k;
  std::vector<double> means(k);
  for (std::size_t arm = 0; arm < k; ++arm) means[arm] = sample_mean(env, arm, per_arm);
  return argmax(means);
}

// One quartet batch: samples the distinct members and returns the winner.
BatchRecord run_quartet_batch(ArmEnvironment& env, Interval active, std::uint64_t pilots) {
  BatchRecord rec;
  rec.active = active;
  rec.members = quartet(active);
  rec.pilots = pilots;

  const std::array<std::size_t, 4> idx{rec.members.a, rec.members.b, rec.members.c,
                                       rec.members.d};
  const std::uint64_t per_member = pilots / 4;
  std::array<std::uint64_t, 4> alloc{per_member, per_member, per_member, per_member};
  alloc[1] += pilots - 4 * per_member;  // leftover to B

  // Merge duplicate positions into the first slot that holds them.
  std::array<int, 4> owner{0, 1, 2, 3};
  for (int s = 1; s < 4; ++s) {
    for (int t = 0; t < s; ++t) {
      if (idx[static_cast<std::size_t>(s)] == idx[static_cast<std::size_t>(t)]) {
        owner[static_cast<std::size_t>(s)] = owner[static_cast<std::size_t>(t)];
        alloc[static_cast<std::size_t>(owner[static_cast<std::size_t>(t)])] +=
            alloc[static_cast<std::size_t>(s)];
        alloc[static_cast<std::size_t>(s)] = 0;
        break;
      }
    }
  }
  for (int s = 0; s < 4; ++s) {
    const auto us = static_cast<std::size_t>(s);
    if (owner[us] == s) rec.means[us] = sample_mean(env, idx[us], alloc[us]);
  }
  for (int s = 0; s < 4; ++s) {
    const auto us = static_cast<std::size_t>(s);
    rec.means[us] = rec.means[static_cast<std::size_t>(owner[us])];
  }

  // Preference order for ties: B first, then by distance from B, then lower.
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    const auto dist = [&](int s) {
      const std::size_t i = idx[static_cast<std::size_t>(s)];
      return i > rec.members.b ? i - rec.members.b : rec.members.b - i;
    };
    if (dist(x) != dist(y)) return dist(x) < dist(y);
    return idx[static_cast<std::size_t>(x)] < idx[static_cast<std::size_t>(y)];
  });
  int best = order[0];
  for (int s : order) {
    if (rec.means[static_cast<std::size_t>(s)] > rec.means[static_cast<std::size_t>(best)]) {
      best = s;
    }
  }
  rec.best = static_cast<QuartetMember>(best);
  rec.survivors = eliminate(active, rec.members, rec.best);
  return rec;
}

}  // namespace

std::size_t beta_i_holobeam(ArmEnvironment& env, std::uint64_t n_half, EliminationTrace* trace) {
  const std::size_t k = env.arm_count();
  if (k < 3) return round_robin_best(env, n_half);

  const int batches = num_batches(k);
  BatchSchedule schedule = batch_schedule(n_half, batches);
  if (trace) {
    *trace = EliminationTrace{};
    trace->schedule = schedule;
  }

  Interval active{0, k - 1};
  std::uint64_t final_pilots = schedule.sizes.back();
  for (int l = 0; l < batches; ++l) {
    const std::uint64_t pilots = schedule.sizes[static_cast<std::size_t>(l)];
    if (active.size() <= 3) {
      final_pilots += pilots;  // stopped early; unused batches feed the final one
      continue;
    }
    BatchRecord rec = run_quartet_batch(env, active, pilots);
    active = rec.survivors;
    if (trace) trace->batches.push_back(rec);
  }

  // Final batch over every survivor (normally three).
  const std::size_t survivors = active.size();
  const std::uint64_t per_arm = final_pilots / survivors;
  const std::size_t middle = (survivors - 1) / 2;
  std::vector<double> means(survivors);
  for (std::size_t i = 0; i < survivors; ++i) {
    std::uint64_t pulls = per_arm;
    if (i == middle) pulls += final_pilots - per_arm * survivors;
    means[i] = sample_mean(env, active.first + i, pulls);
  }
  if (trace) {
    trace->final_set = active;
    trace->final_means = means;
  }
  return active.first + argmax(means);
}

std::size_t sequential_halving(ArmEnvironment& env, std::uint64_t n_half) {
  const std::size_t k = env.arm_count();
  if (n_half < k) {
    throw Error(ErrorKind::insufficient_budget, "sequential halving needs a pull per arm");
  }
  std::vector<std::size_t> alive(k);
  std::iota(alive.begin(), alive.end(), std::size_t{0});
  const int rounds = k > 1 ? static_cast<int>(std::ceil(std::log2(static_cast<double>(k)))) : 0;

  std::uint64_t remaining = n_half;
  std::vector<double> means(k, 0.0);
  for (int r = 0; r < rounds && alive.size() > 1; ++r) {
    if (remaining < alive.size()) break;
    const std::uint64_t per_arm =
        std::max<std::uint64_t>(1, remaining / (alive.size() * static_cast<std::uint64_t>(rounds - r)));
    for (std::size_t arm : alive) {
      means[arm] = sample_mean(env, arm, per_arm);
      remaining -= per_arm;
    }
    std::stable_sort(alive.begin(), alive.end(), [&](std::size_t x, std::size_t y) {
      if (means[x] != means[y]) return means[x] > means[y];
      return x < y;
    });
    alive.resize((alive.size() + 1) / 2);
  }
  // alive is ordered best first whenever a round ran.
  return alive.front();
}

std::size_t uniform_explore(ArmEnvironment& env, std::uint64_t n_half) {
  return round_robin_best(env, n_half);
}

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::holobeam: return "holobeam";
    case Policy::seq_halving: return "seq_halving";
    case Policy::uniform: return "uniform";
  }
  return "unknown";
}

Policy parse_policy(std::string_view name) {
  if (name == "holobeam") return Policy::holobeam;
  if (name == "seq_halving") return Policy::seq_halving;
  if (name == "uniform") return Policy::uniform;
  throw Error(ErrorKind::invalid_argument, "unknown policy '" + std::string(name) + "'");
}

namespace {

std::size_t run_axis(Policy policy, ArmEnvironment& env, std::uint64_t budget) {
  switch (policy) {
    case Policy::holobeam: return beta_i_holobeam(env, budget);
    case Policy::seq_halving: return sequential_halving(env, budget);
    case Policy::uniform: return uniform_explore(env, budget);
  }
  return 0;
}

void check_phase_budget(Policy policy, std::size_t arms, std::uint64_t budget) {
  const std::uint64_t need = policy == Policy::holobeam && arms >= 3
                                 ? minimal_phase_budget(num_batches(arms))
                                 : static_cast<std::uint64_t>(arms);
  if (budget < need) {
    throw Error(ErrorKind::insufficient_budget,
                std::string(to_string(policy)) + " needs at least " + std::to_string(need) +
                    " pilots per phase, got " + std::to_string(budget));
  }
}

}  // namespace

PolicyOutput run_two_phase(Policy policy, RssEnvironment& env, const PhaseGrid& grid1,
                           const PhaseGrid& grid2, std::uint64_t n,
                           std::size_t beta2_init_index) {
  if (beta2_init_index >= grid2.size()) {
    throw Error(ErrorKind::invalid_argument, "beta2 initial index outside the grid");
  }
  const std::uint64_t phase1 = n / 2;
  const std::uint64_t phase2 = n - phase1;
  // Fail before spending pilots if either phase is infeasible.
  check_phase_budget(policy, grid1.size(), phase1);
  check_phase_budget(policy, grid2.size(), phase2);

  const std::uint64_t start = env.pilots_used();
  PolicyOutput out;
  AxisEnvironment axis1(env, grid1, Axis::first, grid2.value(beta2_init_index));
  out.k1 = run_axis(policy, axis1, phase1);
  AxisEnvironment axis2(env, grid2, Axis::second, grid1.value(out.k1));
  out.k2 = run_axis(policy, axis2, phase2);
  out.pilots_used = env.pilots_used() - start;
  return out;
}

}  // namespace holobeam
