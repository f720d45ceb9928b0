// twophoton.hpp — two-photon states, their lattice evolution, and correlation
// matrices.
//
// A pure two-photon state is stored as the symmetric amplitude matrix A in
// |Ψ⟩ = Σ_{m,n} A_{m,n} a_m†a_n†|0⟩, normalized so 2·Σ|A|² = 1.  Evolution is
// then two dense matrix products, A' = U·A·Uᵀ, and the coincidence pattern is
// Γ_{q,r} = 4|A'_{q,r}|² (ordered pairs, ΣΓ = 2).  A brute-force Fock-space
// oracle evolves the same state on the orthonormal pair basis with an
// unrelated eigensolver, pinning the evolution convention independently.
#pragma once

#include <cstddef>

#include "blochsim/evolve.hpp"
#include "blochsim/lattice.hpp"
#include "blochsim/matrix.hpp"

namespace blochsim {

class TwoPhotonAmplitude {
 public:
  // Validates shape, symmetry (to 1e-12) and normalization (to 1e-10), then
  // stores the exactly symmetrized matrix.
  explicit TwoPhotonAmplitude(ComplexMat a);

  const ComplexMat& amplitude() const { return a_; }
  std::size_t num_sites() const { return a_.rows(); }
  double norm() const;  // 2·Σ|A|², ≈ 1

 private:
  ComplexMat a_;
};

class CorrelationMatrix {
 public:
  // Validates symmetry, nonnegativity, and ΣΓ = 2 (to 1e-10).
  explicit CorrelationMatrix(RealMat gamma);

  const RealMat& gamma() const { return g_; }
  double operator()(std::size_t q, std::size_t r) const { return g_(q, r); }
  std::size_t num_sites() const { return g_.rows(); }

 private:
  RealMat g_;
};

// (|2_m⟩ + e^{iφ}|2_n⟩)-type pair: A_mm = 1/2, A_nn = e^{iφ}/2.
TwoPhotonAmplitude epr_state(std::size_t m, std::size_t n, double phase, std::size_t num_sites);

// One photon in each of two distinct sites: A_mn = A_nm = 1/2.
TwoPhotonAmplitude separable_state(std::size_t m, std::size_t n, std::size_t num_sites);

// Place a 2-mode state on lattice sites (offset, offset+1).
TwoPhotonAmplitude embed(const TwoPhotonAmplitude& two_mode, std::size_t offset,
                         std::size_t num_sites);

// A' = U·A·Uᵀ.
TwoPhotonAmplitude evolve_state(const TwoPhotonAmplitude& state, const Propagator& u);

// Γ_{q,r} = 4|A_{q,r}|².
CorrelationMatrix correlation(const TwoPhotonAmplitude& state);

// Unordered-pair event probabilities p_{q,r} = Γ_{q,r}/(1+δ_{qr});
// Σ_{q≤r} p = 1.  Feeds the coincidence sampler.
RealMat detection_probability(const CorrelationMatrix& gamma);

// Two independent photons entering ports (m0, n0) of the unitary device map T:
// Γ_{q,r} = |T_{q,m0}|²|T_{r,n0}|² + |T_{q,n0}|²|T_{r,m0}|².  No two-photon
// interference term, hence no bunching dip.
CorrelationMatrix distinguishable_correlation(const ComplexMat& transfer, std::size_t m0,
                                              std::size_t n0);

// Independent verification path: expand |Ψ⟩ on the orthonormal basis
// {|m,n⟩, m ≤ n} (√2 factor on doubly-occupied kets), build the two-particle
// Hamiltonian on that basis, diagonalize it with a cyclic Jacobi sweep (a
// different algorithm family from the tridiagonal QL used by Propagator), and
// read Γ from the evolved coefficients.  Restricted to num_sites ≤ 12.
CorrelationMatrix fock_oracle(const TwoPhotonAmplitude& state, const Tridiagonal& h, double distance);

}  // namespace blochsim
