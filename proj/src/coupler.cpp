#include "blochsim/coupler.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace blochsim {

void CouplerSpec::validate() const {
  if (!(coupling > 0.0))
    throw std::invalid_argument("CouplerSpec.coupling: must be > 0 (got " +
                                std::to_string(coupling) + ")");
  if (!(detuning >= 0.0))
    throw std::invalid_argument("CouplerSpec.detuning: must be >= 0 (got " +
                                std::to_string(detuning) + ")");
  if (!(length >= 0.0))
    throw std::invalid_argument("CouplerSpec.length: must be >= 0 (got " +
                                std::to_string(length) + ")");
}

double effective_kappa(double detuning, double coupling) {
  if (!(coupling > 0.0)) throw std::invalid_argument("effective_kappa: coupling must be > 0");
  return std::hypot(0.5 * detuning, coupling);
}

double splitter_length(double detuning, double coupling) {
  if (std::fabs(detuning) > 2.0 * coupling)
    throw std::domain_error("splitter_length: no balanced length exists for detuning > 2*coupling");
  const double kappa = effective_kappa(detuning, coupling);
  // Rounding can push the ratio a ulp past 1 right at |detuning| = 2*coupling.
  const double arg = std::min(kappa / (std::numbers::sqrt2 * coupling), 1.0);
  return std::asin(arg) / kappa;
}

ComplexMat coupler_unitary(const CouplerSpec& spec) {
  spec.validate();
  const double kappa = effective_kappa(spec.detuning, spec.coupling);
  const double s = std::sin(kappa * spec.length);
  const double c = std::cos(kappa * spec.length);
  const double g = 0.5 * spec.detuning / kappa;
  const double h = spec.coupling / kappa;
  const cplx global = std::exp(cplx(0.0, 0.5 * spec.detuning * spec.length));

  ComplexMat m(2, 2);
  m(0, 0) = global * cplx(c, g * s);
  m(0, 1) = global * cplx(0.0, h * s);
  m(1, 0) = global * cplx(0.0, h * s);
  m(1, 1) = global * cplx(c, -g * s);
  return m;
}

PreparedEPR prepare_epr(double detuning, double coupling) {
  CouplerSpec spec{coupling, detuning, splitter_length(detuning, coupling)};
  const ComplexMat m = coupler_unitary(spec);

  // One photon per arm in: A_in has A₀₁ = A₁₀ = 1/2, so
  // A'_{qr} = (M_{q0}·M_{r1} + M_{q1}·M_{r0})/2.
  ComplexMat out(2, 2);
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t r = 0; r < 2; ++r)
      out(q, r) = 0.5 * (m(q, 0) * m(r, 1) + m(q, 1) * m(r, 0));

  // Relabel output ports (detuned arm second) so the diagonal phase comes out
  // as +phase_of_detuning rather than its negative.
  ComplexMat a(2, 2);
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t r = 0; r < 2; ++r) a(q, r) = out(1 - q, 1 - r);

  PreparedEPR epr;
  epr.amplitude = a;
  epr.phase = phase_of_detuning(detuning, coupling);
  return epr;
}

double phase_of_detuning(double detuning, double coupling) {
  if (!(coupling > 0.0)) throw std::invalid_argument("phase_of_detuning: coupling must be > 0");
  const double x = detuning / coupling;
  if (x < 0.0 || x > 2.0)
    throw std::domain_error("phase_of_detuning: detuning must lie in [0, 2*coupling]");
  // atan2 form keeps the removable singularity at x = 0 finite: φ(0) = 0.
  return std::numbers::pi - 2.0 * std::atan2(std::sqrt(4.0 - x * x), x);
}

double detuning_for_phase(double phase, double coupling) {
  if (!(coupling > 0.0)) throw std::invalid_argument("detuning_for_phase: coupling must be > 0");
  if (phase < 0.0 || phase > std::numbers::pi)
    throw std::domain_error("detuning_for_phase: phase must lie in [0, pi]");
  return 2.0 * coupling * std::sin(0.5 * phase);
}

double classical_mzi_ratio(double detuning, double coupling) {
  const ComplexMat stage1 =
      coupler_unitary({coupling, detuning, splitter_length(detuning, coupling)});
  const ComplexMat stage2 = coupler_unitary({coupling, 0.0, splitter_length(0.0, coupling)});
  const ComplexMat mzi = multiply(stage2, stage1);
  return std::norm(mzi(0, 0));
}

}  // namespace blochsim
