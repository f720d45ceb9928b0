// analysis.hpp — derived statistics on correlation matrices: interparticle
// distance profile, similarity overlap, Bell-like inequality with Poissonian
// significance, bunching summaries, and the correlation turning point.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "blochsim/matrix.hpp"
#include "blochsim/twophoton.hpp"

namespace blochsim {

// g(Δ) = (1/δ_Δ)·Σ_q Γ_{q,q+Δ} with pair-count weights δ_Δ = N − Δ.
struct DistanceProfile {
  std::vector<double> values;
  std::vector<int> weights;
};

DistanceProfile interparticle_distance(const CorrelationMatrix& gamma);

// Bhattacharyya-type overlap S = (Σ√(Γa·Γb))² / (ΣΓa·ΣΓb) ∈ [0, 1];
// symmetric and scale-invariant in each argument.
double similarity(const CorrelationMatrix& a, const CorrelationMatrix& b);

// V_{k,l} = (2/3)√(Γ_kk·Γ_ll) − Γ_kl.  Positive entries certify nonclassical
// bunching; non-positive entries are rendered blank downstream.  The source
// diagonal rides along so count-based error propagation can reconstruct the
// Γ value behind every cell.
struct ViolationMatrix {
  RealMat values;
  std::vector<double> source_diagonal;
  std::optional<RealMat> significance;  // σ units, filled when counts exist
};

ViolationMatrix bell_violation(const CorrelationMatrix& gamma);

// First-order Poissonian error propagation: each raw count n carries σ(n)=√n
// (σ=1 for empty cells), scaled through the per-cell count→Γ factor implied
// by V's source values; returns V/σ_V.  A zero-count diagonal paired with a
// nonzero one has a divergent partial: that cell comes back NaN (undefined),
// not an exception.
RealMat violation_significance(const ViolationMatrix& v, const Mat<std::int64_t>& counts);

// d = Σ_q Γ_qq / 2: probability that both photons exit the same waveguide.
double diagonal_fraction(const CorrelationMatrix& gamma);

// Signed bunching balance: (largest diagonal cell) − (largest off-diagonal
// cell).  Positive means the correlation map is dominated by bunching peaks,
// negative by antibunching peaks.
double bunching_balance(const CorrelationMatrix& gamma);

// Correlation turning point of a fixed-length device family: gamma_at(f) must
// produce the correlation matrix of the device whose length spans the cycle
// fraction f = z/λ_B.  Scans f over (0, 0.5] on `grid_points` points, locates
// the first sign change of the bunching balance, refines it by bisection to
// 10⁻⁴, and returns z* = f*·bloch_period.  No sign change → nullopt.
using GammaAtFraction = std::function<CorrelationMatrix(double)>;
std::optional<double> turning_point(const GammaAtFraction& gamma_at, double bloch_period,
                                    int grid_points = 50);

}  // namespace blochsim
