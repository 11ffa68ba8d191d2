#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "arh1/errors.hpp"
#include "arh1/harness.hpp"

namespace {

using namespace arh1;
namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("arh1_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + ARH1_BENCH_EXE + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.example = 1;
  c.T_grid = {250};
  c.N = 2;
  c.seed = 7;
  return c;
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig c;
  c.example = 0;
  SpectralModelSpec spec;
  spec.k_max = 3;
  spec.law = EigenvalueLaw::explicit_list({1.0, 0.5, 0.25});
  spec.prior = PriorSpec::explicit_params({2.0, 3.0, 4.0}, {1.5, 1.5, 1.5});
  c.custom = spec;
  c.T_grid = {100, 200};
  c.N = 17;
  c.kT_rule = TruncationRule::fixed(3);
  c.seed = 18446744073709551615ull;
  c.rho_mode = RhoMode::fixed_draw;
  c.formats = {OutputFormat::csv, OutputFormat::json};
  c.workers = 3;
  const auto j = config_to_json(c);
  EXPECT_EQ(j["example"], "custom");
  const auto back = config_from_json(j);
  EXPECT_EQ(config_to_json(back), j);
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.custom->prior.a, spec.prior.a);
  EXPECT_EQ(back.custom->law.values, spec.law.values);
  EXPECT_NO_THROW(back.validate());
}

TEST(Config, DefaultsAndValidation) {
  ExperimentConfig c;
  EXPECT_EQ(c.T_grid, kDefaultTGrid);
  EXPECT_EQ(c.N, 1000u);
  EXPECT_EQ(c.truncation().kind, TruncationRule::Kind::fixed);
  c.example = 3;
  EXPECT_EQ(c.truncation().kind, TruncationRule::Kind::power);
  EXPECT_EQ(c.truncation().alpha, 4.1);

  auto bad = small_config();
  bad.T_grid = {500, 250};
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = small_config();
  bad.N = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = small_config();
  bad.example = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
  bad = small_config();
  bad.kT_rule = TruncationRule{};
  bad.kT_rule->kind = TruncationRule::Kind::power;
  bad.kT_rule->alpha = 3.5;
  EXPECT_THROW(bad.validate(), ValidationError);
  EXPECT_THROW((void)config_from_json(nlohmann::json{{"N", "many"}}), ValidationError);
  EXPECT_THROW((void)config_from_json(nlohmann::json{{"formats", {"xml"}}}), ValidationError);
  EXPECT_THROW((void)config_from_json(nlohmann::json{{"rho_mode", "sometimes"}}), ValidationError);
}

TEST(RunExperiment, ReportCardinality) {
  const auto r = run_experiment(small_config());
  ASSERT_EQ(r.reports.size(), 2u);
  EXPECT_EQ(r.reports[0].estimator, EstimatorKind::classical);
  EXPECT_EQ(r.reports[1].estimator, EstimatorKind::bayes_minus);
  for (const auto& rep : r.reports) {
    EXPECT_EQ(rep.kT, 5u);
    EXPECT_EQ(rep.T, 250u);
    EXPECT_EQ(rep.N, 2u);
    EXPECT_EQ(rep.example, "1");
    EXPECT_GE(rep.efmse_param, 0.0);
    EXPECT_GE(rep.efmse_pred, 0.0);
    EXPECT_DOUBLE_EQ(rep.t_efmse_param, 250.0 * rep.efmse_param);
    EXPECT_DOUBLE_EQ(rep.ref_one_over_T, 0.004);
  }
  EXPECT_EQ(r.attempted, 2u);
  EXPECT_EQ(r.aborted, 0u);

  auto grid = small_config();
  grid.T_grid = {100, 200, 300};
  EXPECT_EQ(run_experiment(grid).reports.size(), 6u);
}

TEST(RunExperiment, WorkerCountDoesNotChangeOutput) {
  auto c = small_config();
  c.N = 40;
  c.T_grid = {100, 250};
  c.workers = 1;
  const auto one = run_experiment(c);
  c.workers = 8;
  const auto eight = run_experiment(c);
  EXPECT_EQ(one.reports, eight.reports);

  const auto d1 = scratch_dir("w1");
  const auto d8 = scratch_dir("w8");
  emit_reports(one.reports, {OutputFormat::csv}, d1);
  emit_reports(eight.reports, {OutputFormat::csv}, d8);
  EXPECT_EQ(slurp(d1 / "efmse.csv"), slurp(d8 / "efmse.csv"));
}

TEST(RunExperiment, FixedModeUsesOneRealizationAndSeedMatters) {
  auto c = small_config();
  c.N = 10;
  c.rho_mode = RhoMode::fixed_draw;
  const auto r = run_experiment(c);
  ASSERT_EQ(r.fixed_rho.size(), 5u);
  double limit = 0.0;
  for (double rho : r.fixed_rho) limit += 1.0 - rho * rho;
  EXPECT_NEAR(r.reports[0].theory_param_limit, limit, 1e-14);
  c.seed = 8;
  EXPECT_NE(run_experiment(c).reports[0].efmse_param, r.reports[0].efmse_param);
}

TEST(RunExperiment, ExplicitModeChecksLengths) {
  auto c = small_config();
  c.rho_mode = RhoMode::explicit_values;
  c.rho_values = {0.5, 0.4, 0.3, 0.2, 0.1};
  const auto r = run_experiment(c);
  EXPECT_NEAR(r.reports[0].theory_param_limit, 5.0 - (0.25 + 0.16 + 0.09 + 0.04 + 0.01), 1e-14);
  c.rho_values = {0.5, 0.4};
  EXPECT_THROW((void)run_experiment(c), ValidationError);
}

TEST(RunExperiment, AbortedThresholdAccounting) {
  ExperimentResult r;
  r.attempted = 10000;
  r.aborted = 10;
  EXPECT_FALSE(r.aborted_threshold_exceeded());
  r.aborted = 11;
  EXPECT_TRUE(r.aborted_threshold_exceeded());
}

TEST(EmitReports, CsvShapeJsonRoundTripAndPlots) {
  const auto r = run_experiment(small_config());
  const auto dir = scratch_dir("emit");
  const auto written = emit_reports(r.reports, {OutputFormat::csv, OutputFormat::json}, dir);
  EXPECT_EQ(written.size(), 4u);

  const std::string csv = slurp(dir / "efmse.csv");
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], kEfmseCsvHeader);
  EXPECT_EQ(rows[1].rfind("1,250,2,5,classical,", 0), 0u);
  EXPECT_EQ(rows[2].rfind("1,250,2,5,bayes,", 0), 0u);
  EXPECT_NE(rows[1].find(",0.004"), std::string::npos);

  EXPECT_EQ(read_reports_json(dir / "efmse.json"), r.reports);

  const std::string plot = slurp(dir / "plot_param.csv");
  EXPECT_EQ(plot.rfind("T,classical,bayes,one_over_T\n250,", 0), 0u);
  EXPECT_TRUE(fs::exists(dir / "plot_pred.csv"));

  EXPECT_THROW(emit_reports({}, {OutputFormat::csv}, dir), ValidationError);
}

TEST(EmitReports, UnwritableDirectoryFails) {
  const auto r = run_experiment(small_config());
  const auto dir = scratch_dir("blocked");
  std::ofstream(dir / "file") << "x";
  EXPECT_ANY_THROW(emit_reports(r.reports, {OutputFormat::csv}, dir / "file" / "sub"));
}

TEST(Diagnostics, ReportsCarryTargetsAndVerdicts) {
  const auto dir = scratch_dir("diag");
  DiagnosticParams small;
  small.T = 500;
  small.N = 300;
  const auto b = run_diagnostics(DiagnosticKind::bartlett, small, 3, dir);
  EXPECT_NEAR(b.record["targets"]["one_minus_rho_sq"].get<double>(), 0.64, 1e-15);
  EXPECT_NEAR(b.record["tolerance"]["absolute"].get<double>(), 0.064, 1e-15);
  ASSERT_TRUE(b.pass.has_value());
  const auto file = nlohmann::json::parse(slurp(dir / "diag_bartlett.json"));
  EXPECT_EQ(file, b.record);

  const auto n = run_diagnostic(DiagnosticKind::normality, small, 3);
  EXPECT_NEAR(n.record["targets"]["ks_critical_value"].get<double>(), 1.73 / std::sqrt(300.0), 1e-15);

  DiagnosticParams pos;
  pos.T = 100;
  pos.N = 10;
  const auto p = run_diagnostic(DiagnosticKind::positivity, pos, 3);
  EXPECT_FALSE(p.pass.has_value());
  EXPECT_TRUE(p.record["pass"].is_null());
  const double frac = p.record["outputs"]["satisfied_fraction"].get<double>();
  EXPECT_GE(frac, 0.0);
  EXPECT_LE(frac, 1.0);

  DiagnosticParams bad;
  bad.rho = 1.5;
  EXPECT_THROW((void)run_diagnostic(DiagnosticKind::ergodic, bad, 3), ValidationError);
  EXPECT_THROW((void)diagnostic_from_string("spectral"), ValidationError);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("cli");
  EXPECT_EQ(run_cli("run --example 1 --T 100 --N 4 --seed 7 --out " + (dir / "ok").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "ok" / "efmse.csv"));
  EXPECT_EQ(run_cli("run --example 4 --T 100 --N 4 --out " + dir.string()), 1);
  EXPECT_EQ(run_cli("run --example 1 --T 300,200 --N 4 --out " + dir.string()), 1);
  EXPECT_EQ(run_cli("run --example 1 --kT power:3 --T 100 --N 4 --out " + dir.string()), 1);
  EXPECT_EQ(run_cli("run --example 1 --workers none --T 100 --N 4 --out " + dir.string()), 1);
  EXPECT_EQ(run_cli("run --no-such-flag"), 1);
  EXPECT_EQ(run_cli("diag bartlett --rho 0.6"), 1);
  // Two-step paths are far from the large-T limit, so the diagnostic fails.
  EXPECT_EQ(run_cli("diag bartlett --seed 1 --rho 0.9 --T 2 --N 200 --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("diag ergodic --seed 1 --n 20000 --out " + dir.string()), 0);
  EXPECT_EQ(run_cli("simulate --example 2 --T 20 --k 3 --seed 5 --out " + (dir / "t.bin").string() +
                    " --format bin"),
            0);
  std::ifstream bin(dir / "t.bin", std::ios::binary);
  const auto traj = read_trajectory_binary(bin);
  EXPECT_EQ(traj.T(), 20u);
  EXPECT_EQ(traj.k(), 3u);
}

TEST(Cli, WorkerEnvironmentFallbackAndDeterminism) {
  const auto dir = scratch_dir("cli_det");
  const std::string common = "run --example 1 --T 250 --N 50 --seed 7 --out ";
  ASSERT_EQ(run_cli(common + (dir / "a").string() + " --workers 1"), 0);
  ASSERT_EQ(run_cli(common + (dir / "b").string() + " --workers 8"), 0);
  ASSERT_EQ(setenv("ARH1_BENCH_WORKERS", "3", 1), 0);
  ASSERT_EQ(run_cli(common + (dir / "c").string()), 0);
  unsetenv("ARH1_BENCH_WORKERS");
  const std::string a = slurp(dir / "a" / "efmse.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir / "b" / "efmse.csv"));
  EXPECT_EQ(a, slurp(dir / "c" / "efmse.csv"));
}

}  // namespace
