// noise.hpp — emulation of the coincidence measurement chain.
//
// Ideal detection probabilities become Poissonian coincidence counts over an
// integration window, with per-channel efficiencies, a uniform accidental
// floor, and a capture probability for same-site pairs (the fiber-splitter
// number resolution).  Inversion of those factors plus renormalization turns
// counts back into a Γ estimate.  All sampling uses counter-based streams, so
// results depend only on (seed, cell, stream) and never on evaluation order.
#pragma once

#include <cstdint>
#include <vector>

#include "blochsim/matrix.hpp"
#include "blochsim/twophoton.hpp"

namespace blochsim {

struct DetectionConfig {
  double pair_rate = 12.0;        // launched pairs per second.  Calibration
                                  // default: 12/s × 900 s ≈ 10⁴ coincidences,
                                  // not a measured value.
  double integration = 900.0;     // seconds
  double window = 1e-9;           // coincidence window [s]; bookkeeping only —
                                  // accidentals are configured as a rate
  double accidental_rate = 2e-6;  // total accidental events per second
  std::vector<double> efficiencies;  // per-channel, in (0,1]; empty → all 1
  double diagonal_split = 0.5;    // same-site pair capture probability
  std::uint64_t seed = 1;

  void validate(std::size_t num_sites) const;
  double efficiency(std::size_t channel) const;
};

class CountsMatrix {
 public:
  explicit CountsMatrix(Mat<std::int64_t> counts);  // symmetric, nonnegative

  const Mat<std::int64_t>& counts() const { return c_; }
  std::int64_t operator()(std::size_t q, std::size_t r) const { return c_(q, r); }
  std::size_t num_sites() const { return c_.rows(); }
  std::int64_t total_unordered() const;  // Σ_{q≤r}

 private:
  Mat<std::int64_t> c_;
};

// One Poisson draw per unordered pair (q ≤ r), keyed by (seed, q, r, stream):
// mean = pair_rate·integration·p_qr·η_q·η_r·(diagonal_split on the diagonal)
//      + accidental_rate·integration / (number of unordered pairs).
// `stream` separates independent draws sharing one seed (e.g. per fraction).
CountsMatrix sample_counts(const RealMat& pair_probs, const DetectionConfig& cfg,
                           std::uint64_t stream = 0);

// Invert efficiencies and the diagonal split cell-wise, then renormalize to
// the ordered-pair total ΣΓ = 2.
CorrelationMatrix estimate_gamma(const CountsMatrix& counts, const DetectionConfig& cfg);

// σ = √n per cell, with σ = 1 substituted for empty cells.
RealMat poisson_sigma(const CountsMatrix& counts);

struct BootstrapSummary {
  double mean = 0.0;
  double stddev = 0.0;
};

// Parametric bootstrap of the similarity S against a reference: each resample
// redraws every cell Poisson(n) around the observed counts, re-estimates Γ,
// and recomputes S.  Needs resamples ≥ 100.
BootstrapSummary bootstrap_similarity(const CountsMatrix& counts,
                                      const CorrelationMatrix& reference, int resamples,
                                      const DetectionConfig& cfg, std::uint64_t stream = 0);

}  // namespace blochsim
