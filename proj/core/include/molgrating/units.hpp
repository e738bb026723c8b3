#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <optional>

namespace molgrating {

/// CODATA 2018 values in SI units.
struct PhysicalConstants {
  static constexpr double h = 6.62607015e-34;
  static constexpr double hbar = h / (2.0 * std::numbers::pi);
  static constexpr double c = 299792458.0;
  static constexpr double eps0 = 8.8541878128e-12;
  static constexpr double amu = 1.66053906660e-27;
};

/// Polarizability expressed as a volume alpha / (4 pi eps0), in cubic angstrom.
struct ComplexPolarizability {
  double real_volume = 0.0;
  double imag_volume = 0.0;

  /// Throws std::invalid_argument when the imaginary part is negative (gain)
  /// or either component is not finite.
  void validate() const;

  friend bool operator==(const ComplexPolarizability&, const ComplexPolarizability&) = default;
};

struct MoleculeSpecies {
  std::string name;
  double mass_amu = 0.0;
  ComplexPolarizability polarizability;

  [[nodiscard]] double mass_kg() const { return mass_amu * PhysicalConstants::amu; }
  void validate() const;

  friend bool operator==(const MoleculeSpecies&, const MoleculeSpecies&) = default;
};

/// Built-in species with ground state polarizabilities at 514.5 nm.
std::span<const MoleculeSpecies> builtin_species();
std::optional<MoleculeSpecies> find_builtin_species(std::string_view name);

/// 4 pi eps0 * volume, in C m^2 / V.
std::complex<double> polarizability_si(const ComplexPolarizability& p);

/// Photon absorption cross section Im(alpha) k_L / eps0 in m^2.
double absorption_cross_section(const MoleculeSpecies& species, double laser_wavenumber);

/// h / (M v). Throws std::domain_error for v <= 0.
double de_broglie_wavelength(const MoleculeSpecies& species, double velocity);

inline constexpr double kAngstrom3 = 1e-30;

}  // namespace molgrating
