#include "blochsim/evolve.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace blochsim {

namespace {

constexpr int kMaxSweeps = 50;
constexpr double kDeflateTol = 1e-14;  // relative to the neighbouring diagonal magnitudes

double sign_like(double magnitude, double sign_of) {
  return sign_of >= 0.0 ? std::fabs(magnitude) : -std::fabs(magnitude);
}

}  // namespace

EigenSystem eigensystem(const Tridiagonal& h) {
  const std::size_t n = h.size();
  if (n == 0) throw std::invalid_argument("eigensystem: empty matrix");
  if (h.off.size() + 1 != n)
    throw std::invalid_argument("eigensystem: off-diagonal band size must be size() - 1");

  std::vector<double> d = h.diag;
  std::vector<double> e(n, 0.0);  // e[i] couples i and i+1; e[n-1] is a workspace slot
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = h.off[i];

  RealMat v = RealMat::identity(n);

  // Classic implicit-shift QL: chase one small off-diagonal element per sweep,
  // accumulating the plane rotations into v.
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= kDeflateTol * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxSweeps)
          throw std::runtime_error("eigensystem: QL failed to deflate index " +
                                   std::to_string(l) + " within " +
                                   std::to_string(kMaxSweeps) + " sweeps");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + sign_like(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i = m;
        bool underflow = false;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            // The rotation annihilated early; drop the shift and restart.
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * f;
            v(k, i) = c * v(k, i) - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  // Ascending order, eigenvector columns carried along.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t lo = i;
    for (std::size_t j = i + 1; j < n; ++j)
      if (d[j] < d[lo]) lo = j;
    if (lo != i) {
      std::swap(d[i], d[lo]);
      for (std::size_t k = 0; k < n; ++k) std::swap(v(k, i), v(k, lo));
    }
  }

  EigenSystem es;
  es.eigenvalues = std::move(d);
  es.eigenvectors = std::move(v);
  return es;
}

Propagator propagator(const EigenSystem& es, double distance) {
  const std::size_t n = es.size();
  if (n == 0 || es.eigenvectors.rows() != n || es.eigenvectors.cols() != n)
    throw std::invalid_argument("propagator: inconsistent eigensystem");

  // U = V·diag(e^{−izλ})·Vᵀ, assembled as (V·phase)·Vᵀ.
  ComplexMat w(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx phase = std::exp(cplx(0.0, -distance * es.eigenvalues[j]));
    for (std::size_t k = 0; k < n; ++k) w(k, j) = es.eigenvectors(k, j) * phase;
  }
  Propagator u;
  u.matrix = multiply(w, to_complex(transpose(es.eigenvectors)));
  u.distance = distance;
  return u;
}

std::vector<double> single_photon_density(const Propagator& u, std::size_t input_site) {
  const std::size_t n = u.size();
  if (input_site >= n) throw std::invalid_argument("single_photon_density: input_site out of range");
  std::vector<double> rho(n);
  for (std::size_t k = 0; k < n; ++k) rho[k] = std::norm(u.matrix(k, input_site));
  return rho;
}

}  // namespace blochsim
