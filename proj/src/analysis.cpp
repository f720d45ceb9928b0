#include "blochsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blochsim {

DistanceProfile interparticle_distance(const CorrelationMatrix& gamma) {
  const std::size_t n = gamma.num_sites();
  DistanceProfile p;
  p.values.resize(n);
  p.weights.resize(n);
  for (std::size_t delta = 0; delta < n; ++delta) {
    const std::size_t weight = n - delta;
    double sum = 0.0;
    for (std::size_t q = 0; q + delta < n; ++q) sum += gamma(q, q + delta);
    p.values[delta] = sum / static_cast<double>(weight);
    p.weights[delta] = static_cast<int>(weight);
  }
  return p;
}

double similarity(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  if (a.num_sites() != b.num_sites())
    throw std::invalid_argument("similarity: dimension mismatch");
  double cross = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (std::size_t q = 0; q < a.num_sites(); ++q)
    for (std::size_t r = 0; r < a.num_sites(); ++r) {
      cross += std::sqrt(a(q, r) * b(q, r));
      sum_a += a(q, r);
      sum_b += b(q, r);
    }
  if (sum_a <= 0.0 || sum_b <= 0.0)
    throw std::domain_error("similarity: all-zero correlation matrix");
  return cross * cross / (sum_a * sum_b);
}

ViolationMatrix bell_violation(const CorrelationMatrix& gamma) {
  const std::size_t n = gamma.num_sites();
  ViolationMatrix v;
  v.values = RealMat(n, n);
  v.source_diagonal.resize(n);
  for (std::size_t k = 0; k < n; ++k) v.source_diagonal[k] = gamma(k, k);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      v.values(k, l) = (2.0 / 3.0) * std::sqrt(gamma(k, k) * gamma(l, l)) - gamma(k, l);
  return v;
}

RealMat violation_significance(const ViolationMatrix& v, const Mat<std::int64_t>& counts) {
  const std::size_t n = v.values.rows();
  if (v.values.cols() != n || v.source_diagonal.size() != n)
    throw std::invalid_argument("violation_significance: inconsistent violation matrix");
  if (counts.rows() != n || counts.cols() != n)
    throw std::invalid_argument("violation_significance: counts dimension mismatch");

  // Reconstruct the Γ behind each cell from the stored diagonal, and collect
  // the per-cell count→Γ scale so empty cells can borrow a typical one.
  RealMat g(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      if (counts(k, l) < 0)
        throw std::invalid_argument("violation_significance: negative count");
      g(k, l) = k == l ? v.source_diagonal[k]
                       : (2.0 / 3.0) * std::sqrt(v.source_diagonal[k] * v.source_diagonal[l]) -
                             v.values(k, l);
    }

  std::vector<double> scales;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k; l < n; ++l)
      if (counts(k, l) > 0 && g(k, l) > 0.0)
        scales.push_back(g(k, l) / static_cast<double>(counts(k, l)));
  if (scales.empty())
    throw std::domain_error("violation_significance: no populated cells to calibrate against");
  std::nth_element(scales.begin(), scales.begin() + scales.size() / 2, scales.end());
  const double typical_scale = scales[scales.size() / 2];

  auto sigma_gamma = [&](std::size_t q, std::size_t r) {
    const auto cnt = counts(q, r);
    if (cnt > 0 && g(q, r) > 0.0) return g(q, r) / std::sqrt(static_cast<double>(cnt));
    if (cnt > 0) return typical_scale * std::sqrt(static_cast<double>(cnt));
    return typical_scale;  // σ = 1 count convention for empty cells
  };

  const double nan = std::numeric_limits<double>::quiet_NaN();
  RealMat sig(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      const double gkk = g(k, k), gll = g(l, l);
      double var;
      if (k == l) {
        // V_kk = −Γ_kk/3: single-count propagation.
        const double s = sigma_gamma(k, k) / 3.0;
        var = s * s;
      } else if (gkk > 0.0 && gll > 0.0) {
        const double pkk = std::sqrt(gll / gkk) / 3.0;
        const double pll = std::sqrt(gkk / gll) / 3.0;
        const double skk = pkk * sigma_gamma(k, k);
        const double sll = pll * sigma_gamma(l, l);
        const double skl = sigma_gamma(k, l);
        var = skk * skk + sll * sll + skl * skl;
      } else if (gkk == 0.0 && gll == 0.0) {
        // √(Γkk·Γll) is flat at the origin along both axes: only the direct
        // count term survives.
        const double skl = sigma_gamma(k, l);
        var = skl * skl;
      } else {
        // One empty diagonal against a populated one: the partial derivative
        // diverges and the cell has no defined significance.
        sig(k, l) = nan;
        continue;
      }
      sig(k, l) = v.values(k, l) / std::sqrt(var);
    }
  return sig;
}

double diagonal_fraction(const CorrelationMatrix& gamma) {
  double d = 0.0;
  for (std::size_t q = 0; q < gamma.num_sites(); ++q) d += gamma(q, q);
  return 0.5 * d;
}

double bunching_balance(const CorrelationMatrix& gamma) {
  const std::size_t n = gamma.num_sites();
  double diag = 0.0, off = 0.0;
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r < n; ++r) {
      if (q == r)
        diag = std::max(diag, gamma(q, r));
      else
        off = std::max(off, gamma(q, r));
    }
  return diag - off;
}

std::optional<double> turning_point(const GammaAtFraction& gamma_at, double bloch_period,
                                    int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("turning_point: grid_points must be >= 2");
  if (!(bloch_period > 0.0)) throw std::invalid_argument("turning_point: bloch_period must be > 0");

  auto balance_at = [&](double f) { return bunching_balance(gamma_at(f)); };

  double prev_f = 0.5 / grid_points;
  double prev_b = balance_at(prev_f);
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (int i = 2; i <= grid_points; ++i) {
    const double f = 0.5 * i / grid_points;
    const double b = balance_at(f);
    if (prev_b == 0.0) return prev_f * bloch_period;
    if ((prev_b < 0.0) != (b < 0.0)) {
      lo = prev_f;
      hi = f;
      found = true;
      break;
    }
    prev_f = f;
    prev_b = b;
  }
  if (!found) return std::nullopt;

  double blo = balance_at(lo);
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    const double bmid = balance_at(mid);
    if (bmid == 0.0) return mid * bloch_period;
    if ((bmid < 0.0) == (blo < 0.0)) {
      lo = mid;
      blo = bmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi) * bloch_period;
}

}  // namespace blochsim
