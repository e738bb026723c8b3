#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include <json.hpp>

#include "molgrating/io.hpp"
#include "molgrating/run.hpp"

using namespace molgrating;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("molgrating_run_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

SimulationConfig light_config(const std::filesystem::path& dir, double power = 9.5) {
  SimulationConfig c;
  c.setup.beam.power_per_wave = power;
  c.setup.numerics.velocity_nodes = 6;
  c.setup.numerics.vertical_nodes = 4;
  c.setup.numerics.source_nodes = 4;
  c.setup.numerics.check_convergence = false;
  c.output.directory = dir.string();
  return c;
}

}  // namespace

TEST(Simulate, RepeatedRunsWriteIdenticalFiles) {
  const auto dir = scratch("repeat");
  auto c = light_config(dir);
  run_simulate(c);
  const auto first = read_text_file(dir / "pattern.csv");
  const auto first_json = read_text_file(dir / "summary.json");
  run_simulate(c);
  EXPECT_EQ(read_text_file(dir / "pattern.csv"), first);
  EXPECT_EQ(read_text_file(dir / "summary.json"), first_json);
  std::filesystem::remove_all(dir);
}

TEST(Simulate, CsvMatchesInMemoryPattern) {
  const auto dir = scratch("csv");
  const auto r = run_simulate(light_config(dir));
  const auto back = read_pattern_csv(dir / "pattern.csv");
  ASSERT_EQ(back.intensity.size(), r.pattern.intensity.size());
  for (std::size_t i = 0; i < back.intensity.size(); ++i) {
    EXPECT_NEAR(back.intensity[i], r.pattern.intensity[i], 1e-11 * r.pattern.intensity[i] + 1e-300);
    EXPECT_NEAR(back.positions[i], r.pattern.positions[i], 1e-15);
  }
  std::filesystem::remove_all(dir);
}

TEST(Simulate, SummaryIsConsistent) {
  const auto dir = scratch("summary");
  const auto r = simulate(light_config(dir));
  const auto& s = r.summary;
  EXPECT_DOUBLE_EQ(s.mean_photon_number, 2.0 * s.phi.im);
  double sum = 0.0;
  for (double f : s.absorbed_fractions) {
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    sum += f;
  }
  EXPECT_LE(sum, 1.0 + 1e-9);
  ASSERT_TRUE(s.metrics.has_value());
  EXPECT_NEAR(s.metrics->spacing, 21.54e-6, 0.01e-6);
  EXPECT_EQ(r.pattern.metadata.config_digest, s.config_digest);

  const auto j = nlohmann::json::parse(summary_json(s));
  EXPECT_DOUBLE_EQ(j["mean_photon_number"].get<double>(), 2.0 * j["phi"]["im"].get<double>());
  EXPECT_EQ(j["config_digest"], s.config_digest);
  EXPECT_TRUE(j["convergence"].is_null());
}

TEST(Simulate, C70TwoPhotonFraction) {
  auto c = light_config(scratch("c70"));
  c.setup.species = *find_builtin_species("C70");
  c.setup.mode = SimulationMode::orders;
  const auto s = simulate(c).summary;
  EXPECT_NEAR(s.absorbed_fractions.at(2), 0.12, 0.03);
}

TEST(Simulate, ConvergenceReportWhenRequested) {
  auto c = light_config(scratch("conv"));
  c.setup.mode = SimulationMode::orders;
  c.setup.numerics.check_convergence = true;
  const auto s = simulate(c).summary;
  ASSERT_TRUE(s.convergence.has_value());
  EXPECT_GE(s.convergence->worst(), 0.0);
}

TEST(Simulate, EnvironmentOverridesOutputDirectory) {
  const auto dir = scratch("env");
  auto c = light_config(scratch("unused"));
  ::setenv(kOutputDirEnv, dir.c_str(), 1);
  EXPECT_EQ(output_directory(c), dir);
  c.setup.mode = SimulationMode::orders;
  run_simulate(c);
  ::unsetenv(kOutputDirEnv);
  EXPECT_TRUE(std::filesystem::exists(dir / "pattern.csv"));
  EXPECT_FALSE(std::filesystem::exists(scratch("unused") / "pattern.csv"));
  std::filesystem::remove_all(dir);
}

TEST(Scan, ZeroPowerIsEnvelopeOnly) {
  const auto dir = scratch("scan0");
  auto c = light_config(dir);
  c.setup.mode = SimulationMode::orders;
  const std::vector<double> powers{0.0};
  const auto points = run_power_scan(c, powers);
  ASSERT_EQ(points.size(), 1u);
  EXPECT_EQ(points[0].result.summary.phi.re, 0.0);
  EXPECT_NEAR(points[0].result.summary.orders.at(0), 1.0, 1e-12);
  const auto text = read_text_file(dir / "scan.csv");
  EXPECT_EQ(text.rfind("power_W,position_um,intensity\n", 0), 0u);
  EXPECT_TRUE(std::filesystem::exists(dir / "scan_summary.json"));
  std::filesystem::remove_all(dir);
}

TEST(Scan, PhaseIsLinearInPower) {
  const auto dir = scratch("scan");
  auto c = light_config(dir);
  c.setup.mode = SimulationMode::orders;
  const std::vector<double> powers{0.5, 3.0, 9.5, 14.0};
  const auto points = run_power_scan(c, powers);
  const double slope = points[0].result.summary.phi.re / 0.5;
  for (const auto& p : points) EXPECT_NEAR(p.result.summary.phi.re, slope * p.power, 1e-12);
  std::filesystem::remove_all(dir);
}

TEST(Scan, NullPowerBracketsZeroOrderMinimum) {
  const auto dir = scratch("scan_null");
  auto c = light_config(dir);
  c.setup.mode = SimulationMode::orders;
  const double null_power = power_for_phase(c.setup.species, c.setup.beam, 120.0, zero_order_null());
  auto order_zero = [&](const SimulationConfig& cfg, const std::vector<double>& powers) {
    std::vector<double> out;
    for (const auto& p : run_power_scan(cfg, powers)) out.push_back(p.result.summary.orders.at(0));
    return out;
  };

  // One velocity, beam centre, no absorption: the minimum sits at the inverted null.
  SimulationConfig ideal = c;
  ideal.setup.numerics.velocity_nodes = 1;
  ideal.setup.numerics.vertical_nodes = 1;
  ideal.setup.species.polarizability.imag_volume = 0.0;
  const auto sharp = order_zero(ideal, {null_power - 0.5, null_power, null_power + 0.5});
  EXPECT_LT(sharp[1], 1e-12);
  EXPECT_LT(sharp[1], sharp[0]);
  EXPECT_LT(sharp[1], sharp[2]);

  // Full averaging lowers the mean phase (the vertical mean scale is about 0.93), which
  // moves the averaged minimum above the null power; a scan across it still brackets it.
  const std::vector<double> powers{9.5, null_power, 13.0, 14.5, 17.0};
  const auto averaged = order_zero(c, powers);
  const auto lowest = std::min_element(averaged.begin(), averaged.end()) - averaged.begin();
  EXPECT_GT(lowest, 0);
  EXPECT_LT(lowest, static_cast<long>(powers.size()) - 1);
  std::filesystem::remove_all(dir);
}

TEST(Scan, RejectsBadPowerLists) {
  const auto c = light_config(scratch("bad"));
  EXPECT_THROW(run_power_scan(c, std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(run_power_scan(c, std::vector<double>{1.0, -2.0}), std::invalid_argument);
}

TEST(Orders, WritesSpectrum) {
  const auto dir = scratch("orders");
  const auto s = run_orders(light_config(dir));
  EXPECT_NEAR(s.total(), 1.0, 1e-6);
  EXPECT_EQ(read_text_file(dir / "orders.csv").rfind("m,intensity\n", 0), 0u);
  std::filesystem::remove_all(dir);
}

TEST(Compare, FilesAgainstThemselvesAndDarkBeam) {
  const auto lit = scratch("lit");
  const auto dark = scratch("dark");
  run_simulate(light_config(lit, 9.5));
  run_simulate(light_config(dark, 0.0));
  EXPECT_EQ(run_compare(lit / "pattern.csv", lit / "pattern.csv").nrmse, 0.0);
  EXPECT_GT(run_compare(lit / "pattern.csv", dark / "pattern.csv").nrmse, 0.1);

  auto coarse = light_config(dark, 0.0);
  coarse.setup.detector.step = 3e-6;
  coarse.output.pattern_csv = "coarse.csv";
  run_simulate(coarse);
  EXPECT_THROW(run_compare(lit / "pattern.csv", dark / "coarse.csv"), std::invalid_argument);
  EXPECT_THROW(run_compare(lit / "pattern.csv", dark / "nope.csv"), std::runtime_error);
  std::filesystem::remove_all(lit);
  std::filesystem::remove_all(dark);
}
