// coupler.hpp — detuned directional coupler used for on-chip EPR preparation.
//
// Two waveguides with coupling C_dc and a propagation-constant difference Δβ
// act as a beam splitter whose effective rate is κ = √((Δβ/2)² + C²).  Run to
// the balanced length z_BS the device is 50:50, and launching one photon into
// each arm produces the path-entangled pair (|2,0⟩ + e^{iφ}|0,2⟩)/√2 whose
// phase φ is set purely by the detuning.
#pragma once

#include "blochsim/matrix.hpp"

namespace blochsim {

struct CouplerSpec {
  double coupling = 0.0;  // C_dc > 0 [1/cm]; independent of the lattice coupling
  double detuning = 0.0;  // Δβ ≥ 0 [1/cm]
  double length = 0.0;    // z ≥ 0 [cm]

  void validate() const;
};

// Prepared pair state at the coupler output: diagonal 2×2 amplitude with
// |A₀₀| = |A₁₁| = 1/2 and arg(A₁₁/A₀₀) = phase.
struct PreparedEPR {
  ComplexMat amplitude;  // 2×2, off-diagonal ≈ 0
  double phase = 0.0;
};

// κ = √((Δβ/2)² + C²)
double effective_kappa(double detuning, double coupling);

// Balanced-splitter length z_BS = (1/κ)·arcsin(κ/(√2·C)); only the smallest
// positive solution.  No balanced length exists for Δβ > 2C.
double splitter_length(double detuning, double coupling);

// The closed-form two-arm evolution matrix, global phase e^{iΔβz/2} included;
// arm 0 carries the detuning.
ComplexMat coupler_unitary(const CouplerSpec& spec);

// Evolve the one-photon-per-arm input through the balanced-length coupler.
// Output ports are labelled with the detuned arm second, so the reported
// phase equals phase_of_detuning (positive for positive Δβ).
PreparedEPR prepare_epr(double detuning, double coupling);

// φ(Δβ) = π − 2·arctan(√(4 − (Δβ/C)²) / (Δβ/C)), taken through the
// two-argument arctangent so φ(0) = 0 exactly; strictly increasing on
// [0, 2C] with φ(2C) = π.
double phase_of_detuning(double detuning, double coupling);

// Exact inverse of phase_of_detuning: Δβ = 2C·sin(φ/2) for φ ∈ [0, π].
double detuning_for_phase(double phase, double coupling);

// Classical characterization: a detuned coupler at its balanced length
// cascaded with a standard 50:50 coupler forms a Mach-Zehnder whose output
// split depends only on φ.  Returns the port-0 intensity fraction for
// classical light entering port 0.
double classical_mzi_ratio(double detuning, double coupling);

}  // namespace blochsim
