#include "blochsim/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace blochsim {

namespace {

[[noreturn]] void bound_error(const std::string& field, const std::string& bound, double got) {
  throw std::invalid_argument(field + ": must be " + bound + " (got " + std::to_string(got) + ")");
}

}  // namespace

void LatticeSpec::validate() const {
  if (num_sites < 2) bound_error("LatticeSpec.num_sites", ">= 2", num_sites);
  if (!(coupling > 0.0)) bound_error("LatticeSpec.coupling", "> 0", coupling);
  if (!(ramp >= 0.0)) bound_error("LatticeSpec.ramp", ">= 0", ramp);
  if (!std::isfinite(ramp) || !std::isfinite(coupling) || !std::isfinite(diag_offset))
    throw std::invalid_argument("LatticeSpec: all entries must be finite");
}

void GeometrySpec::validate() const {
  if (!(effective_index > 0.0)) bound_error("GeometrySpec.effective_index", "> 0", effective_index);
  if (!(spacing_um > 0.0)) bound_error("GeometrySpec.spacing_um", "> 0", spacing_um);
  if (!(wavelength_nm > 0.0)) bound_error("GeometrySpec.wavelength_nm", "> 0", wavelength_nm);
  if (!(curvature_radius_cm > 0.0))
    bound_error("GeometrySpec.curvature_radius_cm", "> 0", curvature_radius_cm);
  if (!(device_length_cm > 0.0))
    bound_error("GeometrySpec.device_length_cm", "> 0", device_length_cm);
}

double GeometrySpec::omega() const {
  validate();
  // µm and nm cancel into a pure number: Ω = 2π·n_eff·d/λ.
  const double d_m = spacing_um * 1e-6;
  const double lambda_m = wavelength_nm * 1e-9;
  return 2.0 * std::numbers::pi * effective_index * d_m / lambda_m;
}

Tridiagonal build_hamiltonian(const LatticeSpec& spec) {
  spec.validate();
  const std::size_t n = static_cast<std::size_t>(spec.num_sites);
  Tridiagonal h;
  h.diag.resize(n);
  h.off.assign(n - 1, spec.coupling);
  const double center = 0.5 * static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k)
    h.diag[k] = (static_cast<double>(k) - center) * spec.ramp + spec.diag_offset;
  return h;
}

double bloch_period(double ramp) {
  if (!(ramp > 0.0)) throw std::domain_error("bloch_period: ramp must be > 0");
  return 2.0 * std::numbers::pi / ramp;
}

double ramp_from_curvature(const GeometrySpec& geom) {
  return geom.omega() / geom.curvature_radius_cm;
}

double curvature_for_ramp(double ramp, const GeometrySpec& geom) {
  if (!(ramp > 0.0)) throw std::domain_error("curvature_for_ramp: ramp must be > 0");
  return geom.omega() / ramp;
}

FractionDesign curvature_for_fraction(double fraction, const GeometrySpec& geom) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::domain_error("curvature_for_fraction: fraction must lie in (0, 1]");
  FractionDesign row;
  row.fraction = fraction;
  row.bloch_period_cm = geom.device_length_cm / fraction;
  row.ramp = 2.0 * std::numbers::pi / row.bloch_period_cm;
  row.curvature_radius_cm = curvature_for_ramp(row.ramp, geom);
  return row;
}

}  // namespace blochsim
