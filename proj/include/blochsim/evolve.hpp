// evolve.hpp — spectral decomposition and propagator for the array Hamiltonian.
//
// U(z) = exp(−izH) built from a full eigendecomposition, so one solve serves
// any number of propagation distances.  The eigensolver is a self-contained
// implicit-shift QL iteration specialized to symmetric tridiagonal matrices;
// it is deterministic (no randomized pivoting) and orders eigenvalues
// ascending with matching eigenvector columns.
#pragma once

#include <cstddef>
#include <vector>

#include "blochsim/lattice.hpp"
#include "blochsim/matrix.hpp"

namespace blochsim {

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  RealMat eigenvectors;             // column j pairs with eigenvalues[j]

  std::size_t size() const { return eigenvalues.size(); }
};

// Implicit-shift QL with relative off-diagonal deflation at 1e-14; a band that
// fails to deflate within 50 sweeps raises std::runtime_error carrying the
// stuck index.
EigenSystem eigensystem(const Tridiagonal& h);

struct Propagator {
  ComplexMat matrix;      // U(z), unitary
  double distance = 0.0;  // z the matrix was built for

  std::size_t size() const { return matrix.rows(); }
};

Propagator propagator(const EigenSystem& es, double distance);

// |U_k,input|²: single-photon site occupation after distance z.
std::vector<double> single_photon_density(const Propagator& u, std::size_t input_site);

}  // namespace blochsim
