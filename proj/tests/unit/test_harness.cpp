#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "holobeam/config.hpp"
#include "holobeam/error.hpp"
#include "holobeam/harness.hpp"

using namespace holobeam;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config() {
  return parse_config(R"({
    "pilot_power_dbm": [20, 40],
    "distance_m": 800,
    "budgets": [100, 600],
    "policies": ["holobeam", "seq_halving", "uniform"],
    "trials": 40,
    "base_seed": 99,
    "threads": 2
  })");
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::io_error;
}

}  // namespace

TEST(Config, DefaultsMatchReference) {
  const ExperimentConfig cfg = parse_config("{}");
  const HmtConfig ch = cfg.channel(20, 800);
  const HmtConfig ref = HmtConfig::reference();
  EXPECT_DOUBLE_EQ(ch.gain_constant(), ref.gain_constant());
  EXPECT_DOUBLE_EQ(ch.noise_power, ref.noise_power);
  EXPECT_DOUBLE_EQ(ch.radiation_factor, 0.4);
  EXPECT_EQ(cfg.trials, 1000u);
  EXPECT_EQ(cfg.total_slots, 10000u);
  EXPECT_EQ(cfg.user_model.kind, UserModel::Kind::uniform);
}

TEST(Config, PresetFileParses) {
  const ExperimentConfig cfg = load_config(std::filesystem::path(HOLOBEAM_TEST_DATA) / ".." /
                                           ".." / "configs" / "paper.cfg");
  EXPECT_EQ(dump_config(cfg), dump_config([] {
              ExperimentConfig d;
              d.radiation_factor = 0.4;
              return d;
            }()));
}

TEST(Config, DumpRoundTrip) {
  ExperimentConfig cfg = small_config();
  cfg.user_model = {UserModel::Kind::fixed, {0.25, -0.75}};
  cfg.beta2_init_index = 17;
  cfg.data_power_dbm = 10;
  EXPECT_EQ(dump_config(parse_config(dump_config(cfg))), dump_config(cfg));
}

TEST(Config, Rejections) {
  EXPECT_EQ(kind_of("{\"bogus\": 1}"), ErrorKind::invalid_config);
  EXPECT_EQ(kind_of("{\"trials\": 0}"), ErrorKind::invalid_config);
  EXPECT_EQ(kind_of("{\"trials\": \"many\"}"), ErrorKind::invalid_config);
  EXPECT_EQ(kind_of("{\"element_pitch\": 0.5}"), ErrorKind::invalid_config);
  EXPECT_EQ(kind_of("{\"policies\": [\"hba\"]}"), ErrorKind::invalid_config);
  EXPECT_EQ(kind_of("{\"budgets\": [20000]}"), ErrorKind::invalid_config);
  EXPECT_EQ(kind_of("{\"user_model\": {\"fixed\": [2, 0]}}"), ErrorKind::invalid_config);
  EXPECT_EQ(kind_of("{\"beta2_init\": 500}"), ErrorKind::invalid_config);
  EXPECT_EQ(kind_of("[1, 2]"), ErrorKind::invalid_config);
  EXPECT_EQ(kind_of("{\"trials\": 3"), ErrorKind::invalid_config);
  try {
    load_config("/nonexistent/holobeam.cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io_error);
  }
}

TEST(RunTrial, Deterministic) {
  const ExperimentConfig cfg = small_config();
  const CellKey cell{Policy::holobeam, 200, 20, 800};
  EXPECT_EQ(run_trial(cfg, cell, 5), run_trial(cfg, cell, 5));
  EXPECT_FALSE(run_trial(cfg, cell, 5) == run_trial(cfg, cell, 6));
}

TEST(RunTrial, UserSharedAcrossCells) {
  const ExperimentConfig cfg = small_config();
  const auto a = run_trial(cfg, {Policy::holobeam, 200, 20, 800}, 5);
  const auto b = run_trial(cfg, {Policy::uniform, 600, 40, 800}, 5);
  EXPECT_EQ(a.user.alpha1, b.user.alpha1);
  EXPECT_EQ(a.user.alpha2, b.user.alpha2);
}

TEST(RunTrial, NoiselessIsCorrect) {
  ExperimentConfig cfg = small_config();
  cfg.noise_dbm = -2990;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto t = run_trial(cfg, {Policy::holobeam, 200, 20, 800}, s);
    EXPECT_TRUE(t.correct) << s;
    EXPECT_EQ(t.rate, t.oracle_discrete_rate);
    EXPECT_EQ(t.pilots_used, 200u);
    EXPECT_LE(t.rate, t.oracle_rate);
  }
}

TEST(RunTrial, InsufficientBudgetIsAFailedTrial) {
  const ExperimentConfig cfg = small_config();
  const auto t = run_trial(cfg, {Policy::holobeam, 50, 20, 800}, 1);
  EXPECT_TRUE(t.failed);
  EXPECT_FALSE(t.correct);
  EXPECT_EQ(t.pilots_used, 0u);
  EXPECT_EQ(t.rate, 0.0);
  EXPECT_FALSE(t.failure.empty());
}

TEST(RunCell, SeedIsolationAndThreadIndependence) {
  ExperimentConfig cfg = small_config();
  const CellKey cell{Policy::holobeam, 200, 40, 800};
  cfg.trials = 10;
  cfg.threads = 1;
  const auto ten = run_cell(cfg, cell);
  cfg.trials = 25;
  cfg.threads = 4;
  const auto more = run_cell(cfg, cell);
  for (std::size_t i = 0; i < ten.size(); ++i) EXPECT_EQ(ten[i], more[i]) << i;
}

TEST(Aggregate, SingleTrialAndCi) {
  TrialOutcome t;
  t.correct = true;
  t.rate = 2.5;
  t.pilots_used = 100;
  t.oracle_rate = 3.0;
  const auto one = aggregate({Policy::holobeam, 100, 20, 800}, {t});
  EXPECT_EQ(one.error_rate, 0.0);
  EXPECT_EQ(one.error_ci95, 0.0);
  EXPECT_EQ(one.mean_rate, 2.5);
  EXPECT_EQ(one.mean_pilots, 100.0);
  EXPECT_EQ(one.oracle_rate, 3.0);
  TrialOutcome w = t;
  w.correct = false;
  const auto half = aggregate({Policy::holobeam, 100, 20, 800}, {t, w, t, w});
  EXPECT_EQ(half.error_rate, 0.5);
  EXPECT_NEAR(half.error_ci95, 1.96 * 0.25, 1e-15);
}

TEST(RunExperiment, InvariantsAndOrdering) {
  const ExperimentResult r = run_experiment(small_config());
  ASSERT_EQ(r.cells.size(), 12u);
  for (const auto& c : r.cells) {
    EXPECT_GE(c.error_rate, 0.0);
    EXPECT_LE(c.error_rate, 1.0);
    EXPECT_LE(c.mean_pilots, static_cast<double>(c.key.n));
    EXPECT_LE(c.mean_rate, c.oracle_rate);
  }
  EXPECT_EQ(r.cells.front().key.policy, Policy::holobeam);
  EXPECT_EQ(r.cells.back().key.policy, Policy::uniform);
  EXPECT_EQ(r.cells[0].key.n, 100u);
  EXPECT_EQ(r.cells[1].key.n, 600u);
  EXPECT_EQ(r.cells[2].key.power_dbm, 40.0);
}

TEST(RunExperiment, NoiselessHasZeroError) {
  ExperimentConfig cfg = small_config();
  cfg.noise_dbm = -2990;
  cfg.policies = {Policy::holobeam};
  const auto r = run_experiment(cfg);
  for (const auto& c : r.cells) {
    EXPECT_EQ(c.error_rate, 0.0);
    EXPECT_EQ(c.error_ci95, 0.0);
  }
}

TEST(Results, GoldenCsv) {
  const std::string csv = format_results(run_experiment(small_config()));
  EXPECT_EQ(csv, slurp(std::filesystem::path(HOLOBEAM_TEST_DATA) / "golden_small.csv"));
}

TEST(Results, RoundTrip) {
  const std::string csv = format_results(run_experiment(small_config()));
  const ExperimentResult back = parse_results(csv);
  EXPECT_EQ(format_results(back), csv);
  const auto tmp = std::filesystem::temp_directory_path() / "holobeam_roundtrip.csv";
  write_results(back, tmp);
  EXPECT_EQ(slurp(tmp), csv);
  EXPECT_EQ(format_results(read_results(tmp)), csv);
  std::filesystem::remove(tmp);
}

TEST(Results, EmptyIsHeaderOnly) {
  EXPECT_EQ(format_results({}), std::string(kResultsHeader) + "\n");
  EXPECT_TRUE(parse_results(std::string(kResultsHeader) + "\n").cells.empty());
}

TEST(Results, MalformedCsv) {
  const std::string h = std::string(kResultsHeader) + "\n";
  for (const std::string bad :
       {std::string("policy,n\n"), h + "holobeam,1,2\n", h + "holobeam,x,20,800,1,0,0,0,0,0,0\n",
        h + "hba,100,20,800,1,0,0,0,0,0,0\n"}) {
    try {
      parse_results(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::parse_error);
    }
  }
  try {
    read_results("/nonexistent/results.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io_error);
  }
}
