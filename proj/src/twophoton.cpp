#include "blochsim/twophoton.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace blochsim {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kNormTol = 1e-10;

// Copy the upper triangle onto the lower one so symmetry holds bitwise.
template <typename T>
void mirror_upper(Mat<T>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) m(j, i) = m(i, j);
}

}  // namespace

TwoPhotonAmplitude::TwoPhotonAmplitude(ComplexMat a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols() || a_.rows() == 0)
    throw std::invalid_argument("TwoPhotonAmplitude: amplitude matrix must be square");
  for (std::size_t i = 0; i < a_.rows(); ++i)
    for (std::size_t j = i + 1; j < a_.cols(); ++j)
      if (std::abs(a_(i, j) - a_(j, i)) > kSymTol)
        throw std::invalid_argument("TwoPhotonAmplitude: amplitude matrix is not symmetric");
  mirror_upper(a_);
  const double n = norm();
  if (std::fabs(n - 1.0) > kNormTol)
    throw std::invalid_argument("TwoPhotonAmplitude: norm 2*sum|A|^2 = " + std::to_string(n) +
                                " deviates from 1");
}

double TwoPhotonAmplitude::norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < a_.rows(); ++i)
    for (std::size_t j = 0; j < a_.cols(); ++j) s += std::norm(a_(i, j));
  return 2.0 * s;
}

CorrelationMatrix::CorrelationMatrix(RealMat gamma) : g_(std::move(gamma)) {
  if (g_.rows() != g_.cols() || g_.rows() == 0)
    throw std::invalid_argument("CorrelationMatrix: matrix must be square");
  double sum = 0.0;
  for (std::size_t i = 0; i < g_.rows(); ++i)
    for (std::size_t j = 0; j < g_.cols(); ++j) {
      if (g_(i, j) < 0.0)
        throw std::invalid_argument("CorrelationMatrix: negative entry at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      if (j > i && std::fabs(g_(i, j) - g_(j, i)) > kSymTol)
        throw std::invalid_argument("CorrelationMatrix: matrix is not symmetric");
      sum += g_(i, j);
    }
  if (std::fabs(sum - 2.0) > kNormTol)
    throw std::invalid_argument("CorrelationMatrix: total " + std::to_string(sum) +
                                " deviates from the ordered-pair normalization 2");
  mirror_upper(g_);
}

namespace {

void check_site_pair(std::size_t m, std::size_t n, std::size_t num_sites, const char* who) {
  if (m == n) throw std::invalid_argument(std::string(who) + ": sites must be distinct");
  if (m >= num_sites || n >= num_sites)
    throw std::invalid_argument(std::string(who) + ": site index out of range");
}

}  // namespace

TwoPhotonAmplitude epr_state(std::size_t m, std::size_t n, double phase, std::size_t num_sites) {
  check_site_pair(m, n, num_sites, "epr_state");
  ComplexMat a(num_sites, num_sites);
  a(m, m) = 0.5;
  a(n, n) = 0.5 * std::exp(cplx(0.0, phase));
  return TwoPhotonAmplitude(std::move(a));
}

TwoPhotonAmplitude separable_state(std::size_t m, std::size_t n, std::size_t num_sites) {
  check_site_pair(m, n, num_sites, "separable_state");
  ComplexMat a(num_sites, num_sites);
  a(m, n) = 0.5;
  a(n, m) = 0.5;
  return TwoPhotonAmplitude(std::move(a));
}

TwoPhotonAmplitude embed(const TwoPhotonAmplitude& two_mode, std::size_t offset,
                         std::size_t num_sites) {
  if (two_mode.num_sites() != 2)
    throw std::invalid_argument("embed: input state must live on exactly 2 modes");
  if (offset + 1 >= num_sites)
    throw std::invalid_argument("embed: offset+1 must be < num_sites");
  ComplexMat a(num_sites, num_sites);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) a(offset + i, offset + j) = two_mode.amplitude()(i, j);
  return TwoPhotonAmplitude(std::move(a));
}

TwoPhotonAmplitude evolve_state(const TwoPhotonAmplitude& state, const Propagator& u) {
  if (u.size() != state.num_sites())
    throw std::invalid_argument("evolve_state: propagator and state dimensions differ");
  ComplexMat evolved = multiply(multiply(u.matrix, state.amplitude()), transpose(u.matrix));
  // U·A·Uᵀ is symmetric up to summation order; canonicalize before validating.
  mirror_upper(evolved);
  return TwoPhotonAmplitude(std::move(evolved));
}

CorrelationMatrix correlation(const TwoPhotonAmplitude& state) {
  const std::size_t n = state.num_sites();
  RealMat g(n, n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r < n; ++r) g(q, r) = 4.0 * std::norm(state.amplitude()(q, r));
  return CorrelationMatrix(std::move(g));
}

RealMat detection_probability(const CorrelationMatrix& gamma) {
  const std::size_t n = gamma.num_sites();
  RealMat p(n, n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r < n; ++r) p(q, r) = gamma(q, r) / (q == r ? 2.0 : 1.0);
  return p;
}

CorrelationMatrix distinguishable_correlation(const ComplexMat& transfer, std::size_t m0,
                                              std::size_t n0) {
  if (transfer.rows() != transfer.cols() || transfer.rows() == 0)
    throw std::invalid_argument("distinguishable_correlation: transfer matrix must be square");
  check_site_pair(m0, n0, transfer.rows(), "distinguishable_correlation");
  const double defect = unitarity_defect(transfer);
  if (defect >= 1e-8)
    throw std::invalid_argument(
        "distinguishable_correlation: transfer matrix is not unitary (defect " +
        std::to_string(defect) + ")");
  const std::size_t n = transfer.rows();
  RealMat g(n, n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r < n; ++r)
      g(q, r) = std::norm(transfer(q, m0)) * std::norm(transfer(r, n0)) +
                std::norm(transfer(q, n0)) * std::norm(transfer(r, m0));
  return CorrelationMatrix(std::move(g));
}

namespace {

// Cyclic Jacobi diagonalization of a dense symmetric matrix; deliberately a
// different algorithm family from the QL solver behind Propagator, so the
// oracle shares no numerical path with the implementation it checks.
void jacobi_eigensystem(RealMat a, std::vector<double>& w, RealMat& v) {
  const std::size_t n = a.rows();
  v = RealMat::identity(n);
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0;; ++sweep) {
    double off = 0.0, scale = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      scale += std::fabs(a(p, p));
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(off) <= 1e-14 * (scale + 1.0)) break;
    if (sweep == kMaxSweeps)
      throw std::runtime_error("jacobi_eigensystem: no convergence after 100 sweeps");

    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = 0.5 * (a(q, q) - a(p, p)) / apq;
        double t;
        if (std::fabs(theta) > 1e12) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double h = t * apq;

        a(p, p) -= h;
        a(q, q) += h;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i != p && i != q) {
            const double aip = a(i, p), aiq = a(i, q);
            a(i, p) = aip - s * (aiq + tau * aip);
            a(p, i) = a(i, p);
            a(i, q) = aiq + s * (aip - tau * aiq);
            a(q, i) = a(i, q);
          }
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = vip - s * (viq + tau * vip);
          v(i, q) = viq + s * (vip - tau * viq);
        }
      }
  }

  w.resize(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = a(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t lo = i;
    for (std::size_t j = i + 1; j < n; ++j)
      if (w[j] < w[lo]) lo = j;
    if (lo != i) {
      std::swap(w[i], w[lo]);
      for (std::size_t k = 0; k < n; ++k) std::swap(v(k, i), v(k, lo));
    }
  }
}

}  // namespace

CorrelationMatrix fock_oracle(const TwoPhotonAmplitude& state, const Tridiagonal& h,
                              double distance) {
  const std::size_t n = state.num_sites();
  if (n > 12) throw std::invalid_argument("fock_oracle: basis too large (num_sites > 12)");
  if (h.size() != n) throw std::invalid_argument("fock_oracle: Hamiltonian dimension mismatch");

  // Orthonormal pair basis {|m,n⟩, m ≤ n}; |m,m⟩ carries the √2 bosonic factor.
  std::vector<std::pair<std::size_t, std::size_t>> basis;
  basis.reserve(n * (n + 1) / 2);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t nn = m; nn < n; ++nn) basis.emplace_back(m, nn);
  const std::size_t dim = basis.size();

  const double sqrt2 = std::numbers::sqrt2;
  auto coeff_of = [&](const ComplexMat& a, std::size_t m, std::size_t nn) {
    return m == nn ? sqrt2 * a(m, m) : 2.0 * a(m, nn);
  };

  std::vector<cplx> c0(dim);
  for (std::size_t i = 0; i < dim; ++i)
    c0[i] = coeff_of(state.amplitude(), basis[i].first, basis[i].second);

  // Two-particle Hamiltonian on the pair basis, one basis column at a time:
  // a unit coefficient is an amplitude pattern, its image is H·A + A·H.
  RealMat h2(dim, dim);
  RealMat dense(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    dense(k, k) = h.diag[k];
    if (k + 1 < n) {
      dense(k, k + 1) = h.off[k];
      dense(k + 1, k) = h.off[k];
    }
  }
  for (std::size_t col = 0; col < dim; ++col) {
    const auto [m, nn] = basis[col];
    RealMat a(n, n);
    if (m == nn) {
      a(m, m) = 1.0 / sqrt2;
    } else {
      a(m, nn) = 0.5;
      a(nn, m) = 0.5;
    }
    const RealMat image = [&] {
      RealMat ha = multiply(dense, a);
      RealMat ah = multiply(a, dense);
      RealMat s(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s(i, j) = ha(i, j) + ah(i, j);
      return s;
    }();
    for (std::size_t row = 0; row < dim; ++row) {
      const auto [k, l] = basis[row];
      h2(row, col) = k == l ? sqrt2 * image(k, k) : 2.0 * image(k, l);
    }
  }
  // Exact symmetry for the Jacobi solver.
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double avg = 0.5 * (h2(i, j) + h2(j, i));
      h2(i, j) = avg;
      h2(j, i) = avg;
    }

  std::vector<double> w;
  RealMat v;
  jacobi_eigensystem(std::move(h2), w, v);

  // c(z) = V·e^{−izΛ}·Vᵀ·c0
  std::vector<cplx> tmp(dim), cz(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += v(i, j) * c0[i];
    tmp[j] = s * std::exp(cplx(0.0, -distance * w[j]));
  }
  for (std::size_t i = 0; i < dim; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) s += v(i, j) * tmp[j];
    cz[i] = s;
  }

  RealMat g(n, n);
  for (std::size_t i = 0; i < dim; ++i) {
    const auto [m, nn] = basis[i];
    const double mag2 = std::norm(cz[i]);
    if (m == nn) {
      g(m, m) = 2.0 * mag2;
    } else {
      g(m, nn) = mag2;
      g(nn, m) = mag2;
    }
  }
  return CorrelationMatrix(std::move(g));
}

}  // namespace blochsim
