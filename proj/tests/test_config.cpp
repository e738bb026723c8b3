#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "molgrating/config.hpp"

using namespace molgrating;

TEST(Config, EmptyTextGivesApparatusDefaults) {
  const auto c = parse_config("");
  EXPECT_EQ(c.setup.species.name, "C60");
  EXPECT_EQ(c.setup.species.mass_amu, 720.0);
  EXPECT_EQ(c.setup.beam.wavelength, 514.5e-9);
  EXPECT_EQ(c.setup.beam.power_per_wave, 9.5);
  EXPECT_EQ(c.setup.beam.waist_y, 1.3e-3);
  EXPECT_EQ(c.setup.geometry.slit1_width, 7e-6);
  EXPECT_EQ(c.setup.geometry.slit2_width, 5e-6);
  EXPECT_EQ(c.setup.geometry.l12, 1.13);
  EXPECT_EQ(c.setup.geometry.l2d, 1.2);
  EXPECT_EQ(c.setup.velocity.v_peak, 120.0);
  EXPECT_EQ(c.setup.velocity.fwhm_ratio, 0.17);
  EXPECT_EQ(c.setup.vertical.beam_fwhm, 625e-6);
  EXPECT_EQ(c.setup.vertical.laser_waist, c.setup.beam.waist_y);
  EXPECT_EQ(c.setup.detector.width, 6e-6);
  EXPECT_EQ(c.setup.detector.step, 2e-6);
  EXPECT_EQ(c.setup.mode, SimulationMode::wave);
  EXPECT_EQ(c.setup.normalization, Normalization::unit_sum);
  EXPECT_EQ(c, SimulationConfig{});
}

TEST(Config, ParsesSectionsCommentsAndQuotes) {
  const auto c = parse_config(
      "# comment\n"
      "[species]\nname = C70   ; catalog entry\n"
      "[grating]\npower_W = 3.25\nwaist_y_m = 1.1e-3\n"
      "[run]\nmode = orders\nnormalization = peak\n"
      "[output]\ndirectory = \"out dir\"\n");
  EXPECT_EQ(c.setup.species.name, "C70");
  EXPECT_EQ(c.setup.species.polarizability.imag_volume, 20.0);
  EXPECT_EQ(c.setup.beam.power_per_wave, 3.25);
  EXPECT_EQ(c.setup.vertical.laser_waist, 1.1e-3);
  EXPECT_EQ(c.setup.mode, SimulationMode::orders);
  EXPECT_EQ(c.setup.normalization, Normalization::peak);
  EXPECT_EQ(c.output.directory, "out dir");
}

TEST(Config, NegativePowerNamesKeyAndLine) {
  try {
    parse_config("[grating]\npower_W = -1\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "grating.power_W");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("grating.power_W"), std::string::npos);
  }
}

TEST(Config, UnknownAndDuplicateKeysAreFatal) {
  try {
    parse_config("[grating]\npower_W = 1\npowr_W = 2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "grating.powr_W");
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse_config("[grating]\npower_W = 1\n\npower_W = 2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_THROW(parse_config("[nonsense]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("power_W = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[grating\n"), ConfigError);
  EXPECT_THROW(parse_config("[grating]\npower_W\n"), ConfigError);
}

TEST(Config, MalformedValues) {
  EXPECT_THROW(parse_config("[grating]\npower_W = 1.5W\n"), ConfigError);
  EXPECT_THROW(parse_config("[grating]\npower_W = nan\n"), ConfigError);
  EXPECT_THROW(parse_config("[numerics]\nvelocity_nodes = -3\n"), ConfigError);
  EXPECT_THROW(parse_config("[numerics]\nvelocity_nodes = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("[numerics]\ncheck_convergence = yes\n"), ConfigError);
  EXPECT_THROW(parse_config("[run]\nmode = ray\n"), ConfigError);
  EXPECT_THROW(parse_config("[velocity]\nfwhm_ratio = 1.5\n"), ConfigError);
}

TEST(Config, CustomSpeciesNeedsAllProperties) {
  EXPECT_THROW(parse_config("[species]\nname = C84\nmass_amu = 1008\n"), ConfigError);
  const auto c = parse_config(
      "[species]\nname = C84\nmass_amu = 1008\nalpha_re_A3 = 140\nalpha_im_A3 = 10\n");
  EXPECT_EQ(c.setup.species.mass_amu, 1008.0);
  EXPECT_EQ(c.setup.species.polarizability.real_volume, 140.0);
  // Catalog species can have single properties overridden.
  EXPECT_EQ(parse_config("[species]\nname = C60\nalpha_im_A3 = 0\n").setup.species.polarizability.imag_volume,
            0.0);
}

TEST(Config, SerialiseRoundTripIsExact) {
  SimulationConfig c;
  c.setup.species = {"X", 1234.567, {98.7654321, 3.0000000000000004}};
  c.setup.beam.power_per_wave = 0.1 + 0.2;
  c.setup.beam.wavelength = 532.1e-9;
  c.setup.geometry.l2d = 1.0 / 3.0;
  c.setup.velocity.fwhm_ratio = 0.123456789012345678;
  c.setup.detector.kernel = KernelShape::tophat;
  c.setup.numerics.threads = 3;
  c.setup.numerics.check_convergence = false;
  c.setup.numerics.tail_eps = 1e-12;
  c.setup.mode = SimulationMode::orders;
  c.output.pattern_csv = "p.csv";
  c.setup.vertical.laser_waist = c.setup.beam.waist_y;
  const auto text = serialize_config(c);
  const auto back = parse_config(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(serialize_config(back), text);
  EXPECT_EQ(parse_config(serialize_config(SimulationConfig{})), SimulationConfig{});
}

TEST(Config, DigestTracksContent) {
  SimulationConfig a;
  SimulationConfig b;
  EXPECT_EQ(config_digest(a), config_digest(b));
  EXPECT_EQ(config_digest(a).size(), 16u);
  b.setup.beam.power_per_wave = 9.50000001;
  EXPECT_NE(config_digest(a), config_digest(b));
}

TEST(Config, HistogramFileIsResolvedAgainstConfigDir) {
  const auto dir = std::filesystem::temp_directory_path() / "molgrating_config_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "v.txt") << "100 1\n120 2\n140 1\n";
  std::ofstream(dir / "run.ini") << "[velocity]\nshape = histogram\nhistogram_file = v.txt\n";
  const auto c = load_config(dir / "run.ini");
  ASSERT_EQ(c.setup.velocity.histogram.size(), 3u);
  EXPECT_EQ(c.setup.velocity.histogram[1].second, 2.0);
  EXPECT_THROW(parse_config("[velocity]\nshape = histogram\n"), ConfigError);
  EXPECT_THROW(parse_config("[velocity]\nshape = histogram\nhistogram_file = missing.txt\n", dir),
               ConfigError);
  EXPECT_THROW(load_config(dir / "absent.ini"), std::runtime_error);
  std::filesystem::remove_all(dir);
}
