#include "blochsim/device.hpp"

#include <numbers>

#include "blochsim/coupler.hpp"

namespace blochsim {

FractionDevice build_fraction_device(const DeviceConfig& cfg, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::domain_error("build_fraction_device: fraction must lie in (0, 1]");
  FractionDevice d;
  d.fraction = fraction;
  d.bloch_period_cm = cfg.run.device_length_cm / fraction;
  d.lattice = cfg.lattice;
  d.lattice.ramp = 2.0 * std::numbers::pi / d.bloch_period_cm;
  d.transfer = propagator(eigensystem(build_hamiltonian(d.lattice)), cfg.run.device_length_cm);
  return d;
}

TwoPhotonAmplitude initial_state(const DeviceConfig& cfg) {
  const auto n = static_cast<std::size_t>(cfg.lattice.num_sites);
  switch (cfg.input.type) {
    case InputType::epr:
      return epr_state(cfg.input.site_a, cfg.input.site_b, resolved_input_phase(cfg), n);
    case InputType::separable:
      return separable_state(cfg.input.site_a, cfg.input.site_b, n);
    case InputType::distinguishable:
      break;
  }
  throw std::invalid_argument("initial_state: distinguishable pairs have no two-photon amplitude");
}

ComplexMat embedded_coupler_transfer(const DeviceConfig& cfg) {
  const ResolvedCoupler rc = resolve_coupler(cfg.coupler);
  const ComplexMat dc =
      coupler_unitary({rc.coupling, rc.detuning, rc.splitter_length_cm});
  const auto n = static_cast<std::size_t>(cfg.lattice.num_sites);
  ComplexMat e = ComplexMat::identity(n);
  const std::size_t off = cfg.input.site_a;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) e(off + i, off + j) = dc(i, j);
  return e;
}

CorrelationMatrix ideal_gamma(const DeviceConfig& cfg, double fraction) {
  const FractionDevice dev = build_fraction_device(cfg, fraction);
  if (cfg.input.type == InputType::distinguishable) {
    const ComplexMat t = multiply(dev.transfer.matrix, embedded_coupler_transfer(cfg));
    return distinguishable_correlation(t, cfg.input.site_a, cfg.input.site_b);
  }
  return correlation(evolve_state(initial_state(cfg), dev.transfer));
}

GammaAtFraction family_gamma(const DeviceConfig& cfg) {
  return [cfg](double fraction) { return ideal_gamma(cfg, fraction); };
}

std::optional<double> device_turning_point(const DeviceConfig& cfg, int grid_points) {
  // Reference period 1 turns the returned length into the cycle fraction.
  return turning_point(family_gamma(cfg), 1.0, grid_points);
}

}  // namespace blochsim
