// lattice.hpp — tight-binding description of a curved waveguide array.
//
// A circularly curved array of N coupled waveguides maps onto a Wannier-Stark
// ladder: nearest-neighbour coupling C plus a linear index gradient B across
// the array.  B follows from the bend radius through the dimensionless factor
// Ω = 2π·n_eff·d/λ, and the correlation dynamics repeat with the Bloch period
// λ_B = 2π/B.
#pragma once

#include <cstddef>
#include <vector>

namespace blochsim {

struct LatticeSpec {
  int num_sites = 0;        // N ≥ 2 waveguides
  double coupling = 0.0;    // C > 0, nearest-neighbour rate [1/cm]
  double ramp = 0.0;        // B ≥ 0, site-to-site propagation-constant step [1/cm]
  double diag_offset = 0.0; // uniform shift of all on-site terms (gauge freedom)

  void validate() const;  // throws std::invalid_argument naming the violated bound
};

// Fabrication-level description used to translate bend radius into a ramp.
// Lengths keep their customary units at the interface (µm, nm, cm) and are
// converted internally.
struct GeometrySpec {
  double effective_index = 0.0;     // n_eff of the guided mode
  double spacing_um = 0.0;          // waveguide pitch d [µm]
  double wavelength_nm = 0.0;       // vacuum wavelength λ [nm]
  double curvature_radius_cm = 0.0; // bend radius R [cm]
  double device_length_cm = 0.0;    // physical sample length L [cm]

  void validate() const;
  double omega() const;  // Ω = 2π·n_eff·d/λ (dimensionless)
};

// Symmetric tridiagonal Hamiltonian: diag[k] on-site, off[k] between k and k+1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // size() - 1 entries

  std::size_t size() const { return diag.size(); }
};

// H[k][k] = (k − (N−1)/2)·B + diag_offset, H[k][k±1] = C.  Centering the ramp
// keeps the spectrum symmetric and makes the gauge invariance explicit.
Tridiagonal build_hamiltonian(const LatticeSpec& spec);

// λ_B = 2π/B; throws std::domain_error for B ≤ 0.
double bloch_period(double ramp);

// B = Ω/R for the given geometry (and its inverse R = Ω/B).
double ramp_from_curvature(const GeometrySpec& geom);
double curvature_for_ramp(double ramp, const GeometrySpec& geom);

// One row of a device-design table: the bend radius for which the fixed-length
// sample spans the requested fraction of a Bloch period.
struct FractionDesign {
  double fraction = 0.0;         // L/λ_B ∈ (0, 1]
  double bloch_period_cm = 0.0;  // λ_B = L/fraction
  double ramp = 0.0;             // B = 2π/λ_B
  double curvature_radius_cm = 0.0;
};

FractionDesign curvature_for_fraction(double fraction, const GeometrySpec& geom);

}  // namespace blochsim
