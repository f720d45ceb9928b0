#include "blochsim/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "blochsim/analysis.hpp"
#include "blochsim/rng.hpp"

namespace blochsim {

void DetectionConfig::validate(std::size_t num_sites) const {
  if (!(pair_rate >= 0.0))
    throw std::invalid_argument("DetectionConfig.pair_rate: must be >= 0");
  if (!(integration >= 0.0))
    throw std::invalid_argument("DetectionConfig.integration: must be >= 0");
  if (!(window >= 0.0)) throw std::invalid_argument("DetectionConfig.window: must be >= 0");
  if (!(accidental_rate >= 0.0))
    throw std::invalid_argument("DetectionConfig.accidental_rate: must be >= 0");
  if (!(diagonal_split > 0.0) || diagonal_split > 1.0)
    throw std::invalid_argument("DetectionConfig.diagonal_split: must lie in (0, 1]");
  if (!efficiencies.empty() && efficiencies.size() != num_sites)
    throw std::invalid_argument("DetectionConfig.efficiencies: need one entry per channel (" +
                                std::to_string(num_sites) + ")");
  for (std::size_t i = 0; i < efficiencies.size(); ++i)
    if (!(efficiencies[i] > 0.0) || efficiencies[i] > 1.0)
      throw std::invalid_argument("DetectionConfig.efficiencies[" + std::to_string(i) +
                                  "]: must lie in (0, 1]");
}

double DetectionConfig::efficiency(std::size_t channel) const {
  return efficiencies.empty() ? 1.0 : efficiencies[channel];
}

CountsMatrix::CountsMatrix(Mat<std::int64_t> counts) : c_(std::move(counts)) {
  if (c_.rows() != c_.cols() || c_.rows() == 0)
    throw std::invalid_argument("CountsMatrix: matrix must be square");
  for (std::size_t q = 0; q < c_.rows(); ++q)
    for (std::size_t r = q; r < c_.cols(); ++r) {
      if (c_(q, r) < 0) throw std::invalid_argument("CountsMatrix: negative count");
      if (c_(q, r) != c_(r, q)) throw std::invalid_argument("CountsMatrix: matrix not symmetric");
    }
}

std::int64_t CountsMatrix::total_unordered() const {
  std::int64_t t = 0;
  for (std::size_t q = 0; q < c_.rows(); ++q)
    for (std::size_t r = q; r < c_.cols(); ++r) t += c_(q, r);
  return t;
}

CountsMatrix sample_counts(const RealMat& pair_probs, const DetectionConfig& cfg,
                           std::uint64_t stream) {
  const std::size_t n = pair_probs.rows();
  if (pair_probs.cols() != n || n == 0)
    throw std::invalid_argument("sample_counts: probability matrix must be square");
  cfg.validate(n);
  double total = 0.0;
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = q; r < n; ++r) total += pair_probs(q, r);
  if (std::fabs(total - 1.0) > 1e-8)
    throw std::invalid_argument("sample_counts: unordered-pair probabilities sum to " +
                                std::to_string(total) + ", expected 1");

  const double exposure = cfg.pair_rate * cfg.integration;
  const double accidental_per_cell =
      cfg.accidental_rate * cfg.integration / (0.5 * n * (n + 1));

  Mat<std::int64_t> counts(n, n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = q; r < n; ++r) {
      const double split = q == r ? cfg.diagonal_split : 1.0;
      const double mean =
          exposure * pair_probs(q, r) * cfg.efficiency(q) * cfg.efficiency(r) * split +
          accidental_per_cell;
      CounterRng rng(cfg.seed, kDomainCounts, (static_cast<std::uint64_t>(q) << 32) | r, stream);
      const auto draw = static_cast<std::int64_t>(poisson_draw(rng, mean));
      counts(q, r) = draw;
      counts(r, q) = draw;
    }
  return CountsMatrix(std::move(counts));
}

CorrelationMatrix estimate_gamma(const CountsMatrix& counts, const DetectionConfig& cfg) {
  const std::size_t n = counts.num_sites();
  cfg.validate(n);
  if (counts.total_unordered() == 0)
    throw std::domain_error("estimate_gamma: all counts are zero");

  // Ordered-pair raw weights: the diagonal takes a factor 2 (p_qq = Γ_qq/2)
  // on top of the split inversion.
  RealMat g(n, n);
  double sum = 0.0;
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r < n; ++r) {
      const double split = q == r ? cfg.diagonal_split : 1.0;
      const double pair_factor = q == r ? 2.0 : 1.0;
      g(q, r) = pair_factor * static_cast<double>(counts(q, r)) /
                (cfg.efficiency(q) * cfg.efficiency(r) * split);
      sum += g(q, r);
    }
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r < n; ++r) g(q, r) *= 2.0 / sum;
  return CorrelationMatrix(std::move(g));
}

RealMat poisson_sigma(const CountsMatrix& counts) {
  const std::size_t n = counts.num_sites();
  RealMat s(n, n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r < n; ++r)
      s(q, r) = counts(q, r) > 0 ? std::sqrt(static_cast<double>(counts(q, r))) : 1.0;
  return s;
}

BootstrapSummary bootstrap_similarity(const CountsMatrix& counts,
                                      const CorrelationMatrix& reference, int resamples,
                                      const DetectionConfig& cfg, std::uint64_t stream) {
  if (resamples < 100)
    throw std::invalid_argument("bootstrap_similarity: resamples must be >= 100");
  const std::size_t n = counts.num_sites();
  if (reference.num_sites() != n)
    throw std::invalid_argument("bootstrap_similarity: dimension mismatch");
  if (counts.total_unordered() == 0)
    throw std::domain_error("bootstrap_similarity: all counts are zero");

  double sum = 0.0, sum_sq = 0.0;
  for (int b = 0; b < resamples; ++b) {
    Mat<std::int64_t> re(n, n);
    std::int64_t total = 0;
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = q; r < n; ++r) {
        CounterRng rng(cfg.seed, kDomainBootstrap,
                       (stream << 32) | static_cast<std::uint64_t>(b),
                       (static_cast<std::uint64_t>(q) << 32) | r);
        const auto draw =
            static_cast<std::int64_t>(poisson_draw(rng, static_cast<double>(counts(q, r))));
        re(q, r) = draw;
        re(r, q) = draw;
        total += draw;
      }
    // A resample can only come back empty for vanishing count totals; score
    // it as zero overlap rather than failing the whole bootstrap.
    const double s = total == 0
                         ? 0.0
                         : similarity(estimate_gamma(CountsMatrix(std::move(re)), cfg), reference);
    sum += s;
    sum_sq += s * s;
  }

  BootstrapSummary out;
  out.mean = sum / resamples;
  const double var = (sum_sq - sum * sum / resamples) / (resamples - 1);
  out.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
  return out;
}

}  // namespace blochsim
