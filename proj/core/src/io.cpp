#include "molgrating/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace molgrating {

namespace {

constexpr std::string_view kPatternHeader = "position_um,intensity";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view s, std::size_t line_no) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": malformed number '" +
                             std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_fixed(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("cannot format a non-finite value");
  int decimals = kCsvSignificantDigits - 1;
  if (value != 0.0) {
    const int exponent = static_cast<int>(std::floor(std::log10(std::abs(value))));
    decimals = std::clamp(kCsvSignificantDigits - 1 - exponent, 0, 40);
  }
  std::array<char, 128> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, decimals);
  if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return {buf.data(), res.ptr};
}

std::string format_pattern_csv(const DiffractionPattern& pattern) {
  if (pattern.positions.size() != pattern.intensity.size()) {
    throw std::invalid_argument("pattern positions and intensities differ in length");
  }
  std::string out(kPatternHeader);
  out += '\n';
  for (std::size_t i = 0; i < pattern.positions.size(); ++i) {
    out += format_fixed(pattern.positions[i] * 1e6);
    out += ',';
    out += format_fixed(pattern.intensity[i]);
    out += '\n';
  }
  return out;
}

DiffractionPattern parse_pattern_csv(std::string_view text) {
  DiffractionPattern pattern;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    const auto line = trim(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                           : eol - pos));
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kPatternHeader) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected header '" +
                                 std::string(kPatternHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected two columns");
    }
    pattern.positions.push_back(parse_number(line.substr(0, comma), line_no) * 1e-6);
    pattern.intensity.push_back(parse_number(line.substr(comma + 1), line_no));
  }
  if (!header_seen) throw std::runtime_error("pattern CSV is empty");
  return pattern;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

DiffractionPattern read_pattern_csv(const std::filesystem::path& path) {
  try {
    return parse_pattern_csv(read_text_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                             ec.message());
  }
}

}  // namespace molgrating
