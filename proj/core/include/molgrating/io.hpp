#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "molgrating/beamline.hpp"

namespace molgrating {

/// Significant digits written for every CSV number.
inline constexpr int kCsvSignificantDigits = 12;

/// Fixed decimal notation with kCsvSignificantDigits significant digits.
std::string format_fixed(double value);

/// `position_um,intensity` header, one LF-terminated row per sample.
std::string format_pattern_csv(const DiffractionPattern& pattern);

/// Inverse of format_pattern_csv; positions come back in metres.
/// Throws std::runtime_error naming the line for malformed input.
DiffractionPattern parse_pattern_csv(std::string_view text);
DiffractionPattern read_pattern_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace molgrating
