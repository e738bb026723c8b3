#include "molgrating/units.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace molgrating {

namespace {

const std::array<MoleculeSpecies, 2> kCatalog{{
    {"C60", 720.0, {101.0, 8.0}},
    {"C70", 840.0, {118.0, 20.0}},
}};

}  // namespace

void ComplexPolarizability::validate() const {
  if (!std::isfinite(real_volume) || !std::isfinite(imag_volume)) {
    throw std::invalid_argument("polarizability must be finite");
  }
  if (imag_volume < 0.0) {
    throw std::invalid_argument("imaginary polarizability must be >= 0 (no gain media)");
  }
}

void MoleculeSpecies::validate() const {
  if (!(mass_amu > 0.0) || !std::isfinite(mass_amu)) {
    throw std::invalid_argument("species '" + name + "': mass must be > 0");
  }
  polarizability.validate();
}

std::span<const MoleculeSpecies> builtin_species() { return kCatalog; }

std::optional<MoleculeSpecies> find_builtin_species(std::string_view name) {
  for (const auto& s : kCatalog) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

std::complex<double> polarizability_si(const ComplexPolarizability& p) {
  const double scale = 4.0 * std::numbers::pi * PhysicalConstants::eps0 * kAngstrom3;
  return {p.real_volume * scale, p.imag_volume * scale};
}

double absorption_cross_section(const MoleculeSpecies& species, double laser_wavenumber) {
  if (!(laser_wavenumber > 0.0)) {
    throw std::domain_error("laser wavenumber must be > 0");
  }
  return polarizability_si(species.polarizability).imag() * laser_wavenumber /
         PhysicalConstants::eps0;
}

double de_broglie_wavelength(const MoleculeSpecies& species, double velocity) {
  if (!(velocity > 0.0)) {
    throw std::domain_error("velocity must be > 0 for a de Broglie wavelength");
  }
  return PhysicalConstants::h / (species.mass_kg() * velocity);
}

}  // namespace molgrating
