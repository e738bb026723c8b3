#include "molgrating/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace molgrating {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

using Table = std::map<std::string, Entry>;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (!quoted && (s[i] == '#' || s[i] == ';')) return s.substr(0, i);
  }
  return s;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

double parse_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("expected a finite number, got '" + std::string(s) + "'");
  }
  return v;
}

template <typename Int>
Int parse_integer(std::string_view s) {
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool parse_bool(std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

enum class Constraint { any, positive, nonnegative };

double checked(double v, Constraint c) {
  if (c == Constraint::positive && !(v > 0.0)) throw std::invalid_argument("must be > 0");
  if (c == Constraint::nonnegative && !(v >= 0.0)) throw std::invalid_argument("must be >= 0");
  return v;
}

struct Field {
  std::string key;
  std::function<void(SimulationConfig&, std::string_view)> set;
  std::function<std::string(const SimulationConfig&)> get;
};

template <typename Member>
Field real_field(std::string key, Member member, Constraint c) {
  return {std::move(key),
          [member, c](SimulationConfig& cfg, std::string_view v) {
            std::invoke(member, cfg) = checked(parse_double(v), c);
          },
          [member](const SimulationConfig& cfg) {
            return format_double(std::invoke(member, const_cast<SimulationConfig&>(cfg)));
          }};
}

template <typename Int, typename Member>
Field int_field(std::string key, Member member, Int minimum) {
  return {std::move(key),
          [member, minimum](SimulationConfig& cfg, std::string_view v) {
            const Int n = parse_integer<Int>(v);
            if (n < minimum) {
              throw std::invalid_argument("must be >= " + std::to_string(minimum));
            }
            std::invoke(member, cfg) = n;
          },
          [member](const SimulationConfig& cfg) {
            return std::to_string(std::invoke(member, const_cast<SimulationConfig&>(cfg)));
          }};
}

template <typename Member>
Field string_field(std::string key, Member member) {
  return {std::move(key),
          [member](SimulationConfig& cfg, std::string_view v) {
            std::invoke(member, cfg) = unquote(v);
          },
          [member](const SimulationConfig& cfg) {
            return "\"" + std::invoke(member, const_cast<SimulationConfig&>(cfg)) + "\"";
          }};
}

template <typename Enum, std::size_t N>
Field enum_field(std::string key, std::function<Enum&(SimulationConfig&)> member,
                 std::array<std::pair<std::string_view, Enum>, N> names) {
  return {std::move(key),
          [member, names](SimulationConfig& cfg, std::string_view v) {
            for (const auto& [name, value] : names) {
              if (v == name) {
                member(cfg) = value;
                return;
              }
            }
            std::string allowed;
            for (const auto& [name, value] : names) allowed += (allowed.empty() ? "" : "|") + std::string(name);
            throw std::invalid_argument("expected one of " + allowed + ", got '" + std::string(v) + "'");
          },
          [member, names](const SimulationConfig& cfg) {
            const Enum e = member(const_cast<SimulationConfig&>(cfg));
            for (const auto& [name, value] : names) {
              if (value == e) return std::string(name);
            }
            return std::string();
          }};
}

// Accessors are lambdas so nested members read naturally in the table below.
#define MG_REF(expr) [](SimulationConfig& c) -> auto& { return c.expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(string_field("species.name", MG_REF(setup.species.name)));
    f.push_back(real_field("species.mass_amu", MG_REF(setup.species.mass_amu), Constraint::positive));
    f.push_back(real_field("species.alpha_re_A3", MG_REF(setup.species.polarizability.real_volume),
                           Constraint::any));
    f.push_back(real_field("species.alpha_im_A3", MG_REF(setup.species.polarizability.imag_volume),
                           Constraint::nonnegative));

    f.push_back(real_field("grating.wavelength_m", MG_REF(setup.beam.wavelength), Constraint::positive));
    f.push_back(real_field("grating.power_W", MG_REF(setup.beam.power_per_wave), Constraint::nonnegative));
    f.push_back(real_field("grating.waist_y_m", MG_REF(setup.beam.waist_y), Constraint::positive));
    f.push_back(real_field("grating.waist_z_m", MG_REF(setup.beam.waist_z), Constraint::positive));

    f.push_back(real_field("beamline.slit1_m", MG_REF(setup.geometry.slit1_width), Constraint::positive));
    f.push_back(real_field("beamline.slit2_m", MG_REF(setup.geometry.slit2_width), Constraint::positive));
    f.push_back(real_field("beamline.l12_m", MG_REF(setup.geometry.l12), Constraint::positive));
    f.push_back(real_field("beamline.l2d_m", MG_REF(setup.geometry.l2d), Constraint::positive));
    f.push_back(real_field("beamline.detector_span_m", MG_REF(setup.geometry.detector_span),
                           Constraint::positive));

    f.push_back(enum_field<VelocityShape, 2>(
        "velocity.shape", MG_REF(setup.velocity.shape),
        {{{"gaussian", VelocityShape::gaussian}, {"histogram", VelocityShape::histogram}}}));
    f.push_back(real_field("velocity.peak_m_per_s", MG_REF(setup.velocity.v_peak), Constraint::positive));
    f.push_back(real_field("velocity.fwhm_ratio", MG_REF(setup.velocity.fwhm_ratio), Constraint::positive));
    f.push_back(string_field("velocity.histogram_file", MG_REF(histogram_file)));

    f.push_back(real_field("vertical.beam_fwhm_m", MG_REF(setup.vertical.beam_fwhm), Constraint::positive));

    f.push_back(real_field("detector.width_m", MG_REF(setup.detector.width), Constraint::nonnegative));
    f.push_back(real_field("detector.step_m", MG_REF(setup.detector.step), Constraint::positive));
    f.push_back(enum_field<KernelShape, 2>(
        "detector.kernel", MG_REF(setup.detector.kernel),
        {{{"gaussian", KernelShape::gaussian}, {"tophat", KernelShape::tophat}}}));

    f.push_back(int_field<std::size_t>("numerics.velocity_nodes", MG_REF(setup.numerics.velocity_nodes), 1));
    f.push_back(int_field<std::size_t>("numerics.vertical_nodes", MG_REF(setup.numerics.vertical_nodes), 1));
    f.push_back(int_field<std::size_t>("numerics.source_nodes", MG_REF(setup.numerics.source_nodes), 1));
    f.push_back(int_field<std::size_t>("numerics.grating_samples_per_period",
                                       MG_REF(setup.numerics.grating_samples_per_period), 9));
    f.push_back(int_field<std::size_t>("numerics.spectrum_samples_per_period",
                                       MG_REF(setup.numerics.spectrum_samples_per_period), 1));
    f.push_back(int_field<std::size_t>("numerics.oversample", MG_REF(setup.numerics.oversample), 1));
    f.push_back(int_field<int>("numerics.m_max", MG_REF(setup.numerics.m_max), 0));
    f.push_back(real_field("numerics.tail_eps", MG_REF(setup.numerics.tail_eps), Constraint::positive));
    f.push_back(int_field<unsigned>("numerics.threads", MG_REF(setup.numerics.threads), 0u));
    f.push_back({"numerics.check_convergence",
                 [](SimulationConfig& c, std::string_view v) {
                   c.setup.numerics.check_convergence = parse_bool(v);
                 },
                 [](const SimulationConfig& c) {
                   return std::string(c.setup.numerics.check_convergence ? "true" : "false");
                 }});

    f.push_back(enum_field<SimulationMode, 2>(
        "run.mode", MG_REF(setup.mode),
        {{{"wave", SimulationMode::wave}, {"orders", SimulationMode::orders}}}));
    f.push_back(enum_field<Normalization, 2>(
        "run.normalization", MG_REF(setup.normalization),
        {{{"unit_sum", Normalization::unit_sum}, {"peak", Normalization::peak}}}));

    f.push_back(string_field("output.directory", MG_REF(output.directory)));
    f.push_back(string_field("output.pattern_csv", MG_REF(output.pattern_csv)));
    f.push_back(string_field("output.summary_json", MG_REF(output.summary_json)));
    return f;
  }();
  return table;
}

#undef MG_REF

const Field* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

Table tokenize(std::string_view text) {
  Table table;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const auto raw = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError("", line_no, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("", line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("", line_no, "missing key before '='");
    if (section.empty()) throw ConfigError(std::string(key), line_no, "key outside any section");
    const std::string path = section + "." + std::string(key);
    if (find_field(path) == nullptr) throw ConfigError(path, line_no, "unknown key");
    const auto [it, inserted] = table.emplace(path, Entry{std::string(trim(line.substr(eq + 1))), line_no});
    if (!inserted) {
      throw ConfigError(path, line_no,
                        "duplicate key (first set on line " + std::to_string(it->second.line) + ")");
    }
  }
  return table;
}

void apply(SimulationConfig& cfg, const Table& table, std::string_view key) {
  const auto it = table.find(std::string(key));
  if (it == table.end()) return;
  try {
    find_field(key)->set(cfg, it->second.value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(key), it->second.line, e.what());
  }
}

std::size_t line_of(const Table& table, const std::string& key) {
  const auto it = table.find(key);
  return it == table.end() ? 0 : it->second.line;
}

/// Runs a validator and attributes failures to the first present key of a section.
template <typename F>
void validate_section(const Table& table, const std::string& section, F&& check) {
  try {
    check();
  } catch (const std::invalid_argument& e) {
    for (const auto& [key, entry] : table) {
      if (key.rfind(section + ".", 0) == 0) throw ConfigError(key, entry.line, e.what());
    }
    throw ConfigError(section, 0, e.what());
  }
}

}  // namespace

ConfigError::ConfigError(std::string key, std::size_t line, const std::string& message)
    : std::runtime_error([&] {
        std::string where = line > 0 ? "line " + std::to_string(line) : std::string("config");
        if (!key.empty()) where += ", key '" + key + "'";
        return where + ": " + message;
      }()),
      key_(std::move(key)),
      line_(line) {}

std::string_view to_string(SimulationMode mode) {
  return mode == SimulationMode::wave ? "wave" : "orders";
}

std::string_view to_string(Normalization mode) {
  return mode == Normalization::unit_sum ? "unit_sum" : "peak";
}

SimulationConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  const Table table = tokenize(text);
  SimulationConfig cfg;

  // The species name picks a catalog entry first; explicit values then override it.
  apply(cfg, table, "species.name");
  const bool custom = table.contains("species.name");
  if (custom) {
    const auto builtin = find_builtin_species(cfg.setup.species.name);
    if (builtin) {
      cfg.setup.species = *builtin;
    } else {
      for (const char* key : {"species.mass_amu", "species.alpha_re_A3", "species.alpha_im_A3"}) {
        if (!table.contains(key)) {
          throw ConfigError(key, line_of(table, "species.name"),
                            "required for species '" + cfg.setup.species.name +
                                "', which is not in the catalog");
        }
      }
    }
  }
  for (const auto& f : fields()) {
    if (f.key != "species.name") apply(cfg, table, f.key);
  }
  cfg.setup.vertical.laser_waist = cfg.setup.beam.waist_y;

  if (cfg.setup.velocity.shape == VelocityShape::histogram) {
    if (cfg.histogram_file.empty()) {
      throw ConfigError("velocity.histogram_file", line_of(table, "velocity.shape"),
                        "required when velocity.shape = histogram");
    }
    std::filesystem::path path = cfg.histogram_file;
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    try {
      cfg.setup.velocity.histogram = load_velocity_histogram(path);
    } catch (const std::exception& e) {
      throw ConfigError("velocity.histogram_file", line_of(table, "velocity.histogram_file"), e.what());
    }
  }

  validate_section(table, "species", [&] { cfg.setup.species.validate(); });
  validate_section(table, "grating", [&] { cfg.setup.beam.validate(); });
  validate_section(table, "beamline", [&] { cfg.setup.geometry.validate(); });
  validate_section(table, "velocity", [&] { cfg.setup.velocity.validate(); });
  validate_section(table, "vertical", [&] { cfg.setup.vertical.validate(); });
  validate_section(table, "detector", [&] { cfg.setup.detector.validate(); });
  validate_section(table, "numerics", [&] { cfg.setup.numerics.validate(); });
  validate_section(table, "beamline", [&] { cfg.setup.validate(); });
  return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

std::string serialize_config(const SimulationConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string sec = f.key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += '\n';
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += f.key.substr(dot + 1) + " = " + f.get(config) + "\n";
  }
  return out;
}

std::string config_digest(const SimulationConfig& config) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const unsigned char ch : serialize_config(config)) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(hash));
  return buf.data();
}

}  // namespace molgrating
