#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "blochsim/evolve.hpp"
#include "blochsim/lattice.hpp"
#include "blochsim/rng.hpp"

using namespace blochsim;

namespace {

constexpr double kPi = std::numbers::pi;

LatticeSpec spec_of(int n, double c, double b) {
  LatticeSpec s;
  s.num_sites = n;
  s.coupling = c;
  s.ramp = b;
  return s;
}

}  // namespace

TEST_SUITE("evolve") {

TEST_CASE("two-site eigenvalues") {
  const EigenSystem es = eigensystem(build_hamiltonian(spec_of(2, 1.0, 0.0)));
  REQUIRE(es.size() == 2);
  CHECK(es.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(es.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("uniform-array spectrum matches the closed form") {
  const int n = 16;
  const double c = 0.45;
  const EigenSystem es = eigensystem(build_hamiltonian(spec_of(n, c, 0.0)));
  std::vector<double> expected;
  for (int j = 1; j <= n; ++j) expected.push_back(2.0 * c * std::cos(kPi * j / (n + 1)));
  std::sort(expected.begin(), expected.end());
  for (int j = 0; j < n; ++j) CHECK(es.eigenvalues[j] == doctest::Approx(expected[j]).epsilon(1e-12));
}

TEST_CASE("steep ramp approaches the equally spaced ladder") {
  const double b = 10.0;
  const EigenSystem es = eigensystem(build_hamiltonian(spec_of(8, 0.1, b)));  // B/C = 100
  for (std::size_t j = 0; j + 1 < es.size(); ++j) {
    const double spacing = es.eigenvalues[j + 1] - es.eigenvalues[j];
    CHECK(std::fabs(spacing - b) < 0.01 * b);
  }
}

TEST_CASE("eigensystem residuals and orthogonality") {
  const Tridiagonal h = build_hamiltonian(spec_of(20, 0.45, 0.33));
  const EigenSystem es = eigensystem(h);
  const std::size_t n = es.size();

  const RealMat vtv = multiply(transpose(es.eigenvectors), es.eigenvectors);
  double max_ortho = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      max_ortho = std::max(max_ortho, std::fabs(vtv(i, j) - (i == j ? 1.0 : 0.0)));
  CHECK(max_ortho < 1e-10);

  double h_norm = 0.0;
  for (double d : h.diag) h_norm = std::max(h_norm, std::fabs(d));
  for (double o : h.off) h_norm = std::max(h_norm, std::fabs(o));
  double max_resid = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      double hv = h.diag[i] * es.eigenvectors(i, j);
      if (i > 0) hv += h.off[i - 1] * es.eigenvectors(i - 1, j);
      if (i + 1 < n) hv += h.off[i] * es.eigenvectors(i + 1, j);
      max_resid = std::max(max_resid, std::fabs(hv - es.eigenvalues[j] * es.eigenvectors(i, j)));
    }
  CHECK(max_resid < 1e-10 * h_norm);
}

TEST_CASE("eigensystem is deterministic") {
  const Tridiagonal h = build_hamiltonian(spec_of(12, 0.8, 0.6));
  const EigenSystem a = eigensystem(h);
  const EigenSystem b = eigensystem(h);
  for (std::size_t j = 0; j < a.size(); ++j) CHECK(a.eigenvalues[j] == b.eigenvalues[j]);
  CHECK(max_abs_diff(a.eigenvectors, b.eigenvectors) == 0.0);
}

TEST_CASE("zero-distance propagator is the identity") {
  const Propagator u = propagator(eigensystem(build_hamiltonian(spec_of(6, 0.5, 0.2))), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j)
      CHECK(std::abs(u.matrix(i, j) - (i == j ? 1.0 : 0.0)) < 1e-13);
}

TEST_CASE("two-site propagator at the balanced length") {
  const Propagator u = propagator(eigensystem(build_hamiltonian(spec_of(2, 1.0, 0.0))), kPi / 4.0);
  CHECK(std::norm(u.matrix(0, 0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::norm(u.matrix(0, 1)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("unitarity over random specs") {
  CounterRng rng(17, 0xE7071u);
  for (int t = 0; t < 25; ++t) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 31);
    const double c = 0.1 + 1.9 * rng.next_double();
    const double b = 2.0 * rng.next_double();
    const double z = 20.0 * rng.next_double();
    const Propagator u = propagator(eigensystem(build_hamiltonian(spec_of(n, c, b))), z);
    CHECK(unitarity_defect(u.matrix) < 1e-10);
  }
}

TEST_CASE("group property") {
  const EigenSystem es = eigensystem(build_hamiltonian(spec_of(10, 0.45, 0.52)));
  const Propagator u1 = propagator(es, 1.3);
  const Propagator u2 = propagator(es, 2.9);
  const Propagator u12 = propagator(es, 1.3 + 2.9);
  CHECK(max_abs_diff(multiply(u1.matrix, u2.matrix), u12.matrix) < 1e-10);
}

TEST_CASE("flat lattice matches the uniform-array closed form") {
  const int n = 9;
  const double c = 0.45, z = 3.7;
  const Propagator u = propagator(eigensystem(build_hamiltonian(spec_of(n, c, 0.0))), z);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) {
      std::complex<double> ref = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double vk = std::sqrt(2.0 / (n + 1)) * std::sin(kPi * (k + 1) * j / (n + 1));
        const double vm = std::sqrt(2.0 / (n + 1)) * std::sin(kPi * (m + 1) * j / (n + 1));
        const double lambda = 2.0 * c * std::cos(kPi * j / (n + 1));
        ref += vk * vm * std::exp(std::complex<double>(0.0, -z * lambda));
      }
      CHECK(std::fabs(std::abs(u.matrix(k, m)) - std::abs(ref)) < 1e-10);
    }
}

TEST_CASE("gauge offset leaves propagator magnitudes unchanged") {
  LatticeSpec s = spec_of(14, 0.45, 0.41);
  const Propagator base = propagator(eigensystem(build_hamiltonian(s)), 5.0);
  s.diag_offset = 7.3;
  const Propagator shifted = propagator(eigensystem(build_hamiltonian(s)), 5.0);
  double drift = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = 0; j < base.size(); ++j)
      drift = std::max(drift, std::fabs(std::abs(base.matrix(i, j)) - std::abs(shifted.matrix(i, j))));
  CHECK(drift < 1e-12);
}

TEST_CASE("single-photon density basics") {
  const EigenSystem es = eigensystem(build_hamiltonian(spec_of(11, 0.6, 0.3)));
  const std::vector<double> p0 = single_photon_density(propagator(es, 0.0), 5);
  for (std::size_t k = 0; k < p0.size(); ++k)
    CHECK(p0[k] == doctest::Approx(k == 5 ? 1.0 : 0.0).epsilon(1e-12));

  const std::vector<double> p = single_photon_density(propagator(es, 4.2), 5);
  double total = 0.0;
  for (double v : p) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(single_photon_density(propagator(es, 1.0), 11), std::invalid_argument);
}

TEST_CASE("widest spread lands at half the cycle") {
  // 16 guides, 12 cm Bloch period, central launch: scan the site-index
  // standard deviation over one cycle and locate its maximum.
  const double period = 12.0;
  const EigenSystem es = eigensystem(build_hamiltonian(spec_of(16, 0.45, 2.0 * kPi / period)));
  double best_z = 0.0, best_spread = -1.0;
  for (int i = 0; i <= 600; ++i) {
    const double z = period * i / 600.0;
    const std::vector<double> p = single_photon_density(propagator(es, z), 8);
    double mean = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) mean += k * p[k];
    double var = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) var += (k - mean) * (k - mean) * p[k];
    if (var > best_spread) {
      best_spread = var;
      best_z = z;
    }
  }
  CHECK(std::fabs(best_z - period / 2.0) <= 0.02 * period);
}

TEST_CASE("revival after one cycle") {
  // 4C/B + 2 = 5.44 < 16: the packet never reaches the edges.
  const double period = 12.0;
  const double b = 2.0 * kPi / period;
  const EigenSystem es = eigensystem(build_hamiltonian(spec_of(16, 0.45, b)));
  const Propagator u = propagator(es, period);
  for (std::size_t input : {7, 8}) {
    const double fidelity = std::norm(u.matrix(input, input));
    CHECK(fidelity >= 0.99);
    const std::vector<double> p = single_photon_density(u, input);
    for (std::size_t k = 0; k < p.size(); ++k)
      CHECK(std::fabs(p[k] - (k == input ? 1.0 : 0.0)) < 1e-2);
  }
}

}  // TEST_SUITE
