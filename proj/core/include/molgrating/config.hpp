#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "molgrating/beamline.hpp"

namespace molgrating {

struct OutputSettings {
  std::string directory = ".";
  std::string pattern_csv = "pattern.csv";
  std::string summary_json = "summary.json";

  friend bool operator==(const OutputSettings&, const OutputSettings&) = default;
};

inline constexpr double kDefaultPowerPerWave = 9.5;  // W per running wave

struct SimulationConfig {
  ExperimentSetup setup = [] {
    ExperimentSetup s;
    s.beam.power_per_wave = kDefaultPowerPerWave;
    return s;
  }();
  /// Velocity table used when the velocity shape is `histogram`.
  std::string histogram_file;
  OutputSettings output;

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

/// Parse failure carrying the offending key ("section.key") and 1-based line, 0 when
/// the problem is not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, std::size_t line, const std::string& message);
  [[nodiscard]] const std::string& key() const { return key_; }
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

/// Sectioned key = value text. All quantities are SI; '#' and ';' start comments.
/// Missing keys take the apparatus defaults, unknown or repeated keys are fatal.
/// A histogram_file is resolved against base_dir and loaded.
SimulationConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
SimulationConfig load_config(const std::filesystem::path& path);

/// Every key, shortest round-trip number formatting; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SimulationConfig& config);

/// FNV-1a 64 hash of the serialised config, as 16 hex digits.
std::string config_digest(const SimulationConfig& config);

std::string_view to_string(SimulationMode mode);
std::string_view to_string(Normalization mode);

}  // namespace molgrating
