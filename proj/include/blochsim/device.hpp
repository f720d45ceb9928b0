// device.hpp — wiring from a resolved configuration to physics results.
//
// A config describes a family of equal-length devices indexed by the
// Bloch-cycle fraction f: device f has ramp B = 2πf/L and is observed at its
// full physical length z = L.  This module builds the per-fraction lattice,
// prepares the configured input state, and produces ideal correlation
// matrices for both interfering and distinguishable pairs.
#pragma once

#include <optional>

#include "blochsim/analysis.hpp"
#include "blochsim/config.hpp"
#include "blochsim/evolve.hpp"
#include "blochsim/twophoton.hpp"

namespace blochsim {

struct FractionDevice {
  double fraction = 0.0;
  double bloch_period_cm = 0.0;
  LatticeSpec lattice;  // ramp filled in
  Propagator transfer;  // U(L)
};

FractionDevice build_fraction_device(const DeviceConfig& cfg, double fraction);

// The interfering input state on the full lattice (epr or separable).
TwoPhotonAmplitude initial_state(const DeviceConfig& cfg);

// Balanced-length coupler unitary embedded at the configured feed sites.
ComplexMat embedded_coupler_transfer(const DeviceConfig& cfg);

// Ideal correlation matrix of device `fraction` for the configured input.
CorrelationMatrix ideal_gamma(const DeviceConfig& cfg, double fraction);

// Γ(f) callable over the device family, for turning-point scans.
GammaAtFraction family_gamma(const DeviceConfig& cfg);

// Turning point as a cycle fraction f* = z*/λ_B, or nullopt if the bunching
// balance never changes sign on (0, 0.5].
std::optional<double> device_turning_point(const DeviceConfig& cfg, int grid_points = 50);

}  // namespace blochsim
