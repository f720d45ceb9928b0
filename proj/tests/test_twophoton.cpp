#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "blochsim/coupler.hpp"
#include "blochsim/evolve.hpp"
#include "blochsim/rng.hpp"
#include "blochsim/twophoton.hpp"

using namespace blochsim;

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

LatticeSpec spec_of(int n, double c, double b) {
  LatticeSpec s;
  s.num_sites = n;
  s.coupling = c;
  s.ramp = b;
  return s;
}

Propagator splitter_5050() {
  return propagator(eigensystem(build_hamiltonian(spec_of(2, 1.0, 0.0))), kPi / 4.0);
}

// Reverse both indices of a correlation matrix: Gamma'_{q,r} = Gamma_{N-1-q,N-1-r}.
RealMat reflect(const RealMat& g) {
  const std::size_t n = g.rows();
  RealMat out(n, n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r < n; ++r) out(q, r) = g(n - 1 - q, n - 1 - r);
  return out;
}

}  // namespace

TEST_SUITE("twophoton") {

TEST_CASE("amplitude constructor enforces the contracts") {
  ComplexMat bad(2, 2);
  bad(0, 1) = 0.5;
  bad(1, 0) = 0.25;  // asymmetric
  CHECK_THROWS_WITH_AS(TwoPhotonAmplitude{bad}, doctest::Contains("symmetric"),
                       std::invalid_argument);

  ComplexMat unnorm(2, 2);
  unnorm(0, 0) = 1.0;  // 2*sum|A|^2 = 2
  CHECK_THROWS_WITH_AS(TwoPhotonAmplitude{unnorm}, doctest::Contains("norm"),
                       std::invalid_argument);

  ComplexMat rect(2, 3);
  CHECK_THROWS_AS(TwoPhotonAmplitude{rect}, std::invalid_argument);
}

TEST_CASE("co-located pair state") {
  const TwoPhotonAmplitude psi = epr_state(0, 1, 0.8 * kPi, 16);
  CHECK(std::abs(psi.amplitude()(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(psi.amplitude()(1, 1) - 0.5 * std::exp(cplx(0.0, 0.8 * kPi))) < 1e-15);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));

  for (double phi : {0.0, kPi / 2.0, kPi}) {
    const CorrelationMatrix g = correlation(epr_state(0, 1, phi, 16));
    CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g(0, 1) == 0.0);
  }

  CHECK_THROWS_AS(epr_state(3, 3, 0.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(epr_state(0, 16, 0.0, 16), std::invalid_argument);
}

TEST_CASE("one-photon-per-site state") {
  const TwoPhotonAmplitude psi = separable_state(0, 1, 2);
  CHECK(std::abs(psi.amplitude()(0, 1) - 0.5) < 1e-15);
  CHECK(std::abs(psi.amplitude()(1, 0) - 0.5) < 1e-15);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));

  const CorrelationMatrix g = correlation(psi);
  CHECK(g(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g(0, 0) == 0.0);
  CHECK(g(1, 1) == 0.0);

  CHECK_THROWS_AS(separable_state(0, 0, 4), std::invalid_argument);
}

TEST_CASE("embedding a two-mode state") {
  const TwoPhotonAmplitude small = epr_state(0, 1, 0.3, 2);
  const TwoPhotonAmplitude big = embed(small, 7, 16);
  CHECK(big.num_sites() == 16);
  CHECK(std::abs(big.amplitude()(7, 7) - small.amplitude()(0, 0)) < 1e-15);
  CHECK(std::abs(big.amplitude()(8, 8) - small.amplitude()(1, 1)) < 1e-15);
  CHECK(big.norm() == doctest::Approx(1.0).epsilon(1e-14));

  // project back
  ComplexMat back(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) back(i, j) = big.amplitude()(7 + i, 7 + j);
  CHECK(max_abs_diff(back, small.amplitude()) == 0.0);

  CHECK_THROWS_AS(embed(small, 15, 16), std::invalid_argument);
  CHECK_THROWS_AS(embed(embed(small, 0, 3), 0, 16), std::invalid_argument);
}

TEST_CASE("evolution basics") {
  const TwoPhotonAmplitude psi = separable_state(0, 1, 2);

  SUBCASE("identity propagator") {
    const Propagator id = propagator(eigensystem(build_hamiltonian(spec_of(2, 1.0, 0.0))), 0.0);
    const TwoPhotonAmplitude out = evolve_state(psi, id);
    CHECK(max_abs_diff(out.amplitude(), psi.amplitude()) < 1e-14);
  }

  SUBCASE("balanced splitter cancels coincidences") {
    const TwoPhotonAmplitude out = evolve_state(psi, splitter_5050());
    CHECK(std::abs(out.amplitude()(0, 1)) < 1e-10);
    const CorrelationMatrix g = correlation(out);
    CHECK(g(0, 1) < 1e-10);
    CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g(1, 1) == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("norm is preserved under long evolutions") {
    const Propagator u = propagator(eigensystem(build_hamiltonian(spec_of(12, 0.6, 0.4))), 9.5);
    const TwoPhotonAmplitude out = evolve_state(embed(psi, 5, 12), u);
    CHECK(std::fabs(out.norm() - 1.0) < 1e-10);
  }

  SUBCASE("dimension mismatch") {
    const Propagator u = propagator(eigensystem(build_hamiltonian(spec_of(3, 1.0, 0.0))), 1.0);
    CHECK_THROWS_AS(evolve_state(psi, u), std::invalid_argument);
  }
}

TEST_CASE("correlation matrix is exactly symmetric") {
  const Propagator u = propagator(eigensystem(build_hamiltonian(spec_of(10, 0.45, 0.3))), 6.0);
  const CorrelationMatrix g = correlation(evolve_state(epr_state(4, 5, 1.1, 10), u));
  CHECK(max_abs_diff(g.gamma(), transpose(g.gamma())) == 0.0);
  double total = 0.0;
  for (std::size_t q = 0; q < 10; ++q)
    for (std::size_t r = 0; r < 10; ++r) total += g(q, r);
  CHECK(total == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("detection probabilities") {
  SUBCASE("co-located diagonal splits by the bosonic factor") {
    const RealMat p = detection_probability(correlation(epr_state(0, 1, 0.0, 2)));
    CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("off-diagonal cells pass through; total mass is one") {
    const CorrelationMatrix g = correlation(
        evolve_state(epr_state(3, 4, 0.7, 8),
                     propagator(eigensystem(build_hamiltonian(spec_of(8, 0.5, 0.2))), 3.0)));
    const RealMat p = detection_probability(g);
    double total = 0.0;
    for (std::size_t q = 0; q < 8; ++q)
      for (std::size_t r = q; r < 8; ++r) {
        total += p(q, r);
        if (q != r) CHECK(p(q, r) == g(q, r));
      }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("distinguishable pairs") {
  SUBCASE("identity device") {
    ComplexMat id(4, 4);
    for (std::size_t i = 0; i < 4; ++i) id(i, i) = 1.0;
    const CorrelationMatrix g = distinguishable_correlation(id, 1, 2);
    CHECK(g(1, 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g(2, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g(1, 1) == 0.0);
  }

  SUBCASE("no interference dip at a balanced splitter") {
    const CorrelationMatrix g = distinguishable_correlation(splitter_5050().matrix, 0, 1);
    CHECK(g(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
    double total = 0.0;
    for (std::size_t q = 0; q < 2; ++q)
      for (std::size_t r = 0; r < 2; ++r) total += g(q, r);
    CHECK(total == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("non-unitary transfer is rejected") {
    ComplexMat t(3, 3);
    t(0, 0) = 1.0;
    t(1, 1) = 0.5;
    t(2, 2) = 1.0;
    CHECK_THROWS_WITH_AS(distinguishable_correlation(t, 0, 1), doctest::Contains("unitary"),
                         std::invalid_argument);
  }
}

TEST_CASE("pair-basis verifier agrees with the amplitude route") {
  SUBCASE("zero distance reproduces the input correlation") {
    const TwoPhotonAmplitude psi = epr_state(2, 5, 0.4 * kPi, 7);
    const Tridiagonal h = build_hamiltonian(spec_of(7, 0.5, 0.3));
    CHECK(max_abs_diff(fock_oracle(psi, h, 0.0).gamma(), correlation(psi).gamma()) < 1e-12);
  }

  SUBCASE("balanced-splitter coincidence cancellation") {
    const Tridiagonal h = build_hamiltonian(spec_of(2, 1.0, 0.0));
    const CorrelationMatrix g = fock_oracle(separable_state(0, 1, 2), h, kPi / 4.0);
    CHECK(g(0, 1) < 1e-10);
    CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("random instances") {
    CounterRng rng(99, 0xFACADEu);
    for (int t = 0; t < 10; ++t) {
      const std::size_t n = 3 + rng.next_u64() % 6;
      const LatticeSpec s = spec_of(static_cast<int>(n), 0.2 + rng.next_double(),
                                    1.5 * rng.next_double());
      const double z = 15.0 * rng.next_double();
      const std::size_t m = rng.next_u64() % n;
      std::size_t k = rng.next_u64() % (n - 1);
      if (k >= m) ++k;
      const TwoPhotonAmplitude psi = rng.next_double() < 0.5
                                         ? epr_state(m, k, 2.0 * kPi * rng.next_double(), n)
                                         : separable_state(m, k, n);
      const Tridiagonal h = build_hamiltonian(s);
      const CorrelationMatrix direct =
          correlation(evolve_state(psi, propagator(eigensystem(h), z)));
      CHECK(max_abs_diff(direct.gamma(), fock_oracle(psi, h, z).gamma()) < 1e-9);
    }
  }

  SUBCASE("basis cap") {
    const TwoPhotonAmplitude psi = epr_state(0, 1, 0.0, 13);
    CHECK_THROWS_WITH_AS(fock_oracle(psi, build_hamiltonian(spec_of(13, 0.5, 0.0)), 1.0),
                         doctest::Contains("basis too large"), std::invalid_argument);
  }
}

TEST_CASE("phase reversal mirrors the correlation under site reflection") {
  // For a feed at (m, n), negating the pair phase and reflecting the feed to
  // (N-1-m, N-1-n) produces the site-reflected correlation matrix.  Feeds that
  // are their own reflection image therefore give Gamma invariant under joint
  // reflection at every phase.
  const int n = 11;
  const LatticeSpec s = spec_of(n, 0.45, 0.37);
  const Propagator u = propagator(eigensystem(build_hamiltonian(s)), 4.1);

  CounterRng rng(31, 0x5EEDu);
  for (int t = 0; t < 6; ++t) {
    const std::size_t m = rng.next_u64() % n;
    std::size_t k = rng.next_u64() % (n - 1);
    if (k >= m) ++k;
    const double phi = 2.0 * kPi * rng.next_double();
    const CorrelationMatrix a = correlation(evolve_state(epr_state(m, k, phi, n), u));
    const CorrelationMatrix b = correlation(
        evolve_state(epr_state(n - 1 - m, n - 1 - k, -phi, n), u));
    CHECK(max_abs_diff(a.gamma(), reflect(b.gamma())) < 1e-12);
  }

  // Self-image feed at the center of an even lattice.
  const int ne = 16;
  const Propagator ue =
      propagator(eigensystem(build_hamiltonian(spec_of(ne, 0.45, 2.0 * kPi / 15.0))), 6.0);
  for (double phi : {0.0, 0.35 * kPi, 0.8 * kPi, kPi}) {
    const CorrelationMatrix g = correlation(evolve_state(epr_state(7, 8, phi, ne), ue));
    CHECK(max_abs_diff(g.gamma(), reflect(g.gamma())) < 1e-12);
  }
}

}  // TEST_SUITE
