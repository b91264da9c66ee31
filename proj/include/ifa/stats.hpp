// Moment, correlation, and downturn statistics for generated asset series.
// Moments are population (divide-by-n) and kurtosis is non-excess (normal = 3).
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace ifa::stats {

struct MomentSummary {
  std::size_t count = 0;
  double mean = 0;
  double skewness = 0;
  double kurtosis = 0; // m4 / m2^2
};

// Throws std::domain_error for length < 2 or zero variance.
MomentSummary moments(const std::vector<double>& xs);

// Product-moment correlation; throws std::domain_error on length mismatch,
// length < 2, or a constant input.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// One correlation per window start (stride apart); windows where either side
// is constant yield nullopt rather than an error.
std::vector<std::optional<double>> rolling_correlation(const std::vector<double>& xs,
                                                       const std::vector<double>& ys,
                                                       int window = 50, int stride = 1);

// max of the two window sums over [t, t+window)
long best_asset_return(const std::vector<int>& xs, const std::vector<int>& ys, std::size_t t,
                       int window = 50);

struct CorrelationPoint {
  std::uint64_t rule = 0;
  long t = 0;             // window start, 0-based
  long best_return = 0;   // best asset's movement sum over the window
  double rolling_corr = 0;
};

struct DownturnBin {
  long lo = 0, hi = 0; // best-return range [lo, hi)
  std::size_t count = 0;
  double mean_corr = 0;
};

struct DownturnSummary {
  std::vector<DownturnBin> bins;
  // Spearman rank correlation of (best_return, rolling_corr) on each side;
  // nullopt when a side has fewer than two distinct returns.
  std::optional<double> spearman_negative;
  std::optional<double> spearman_positive;
  std::size_t negative_points = 0;
  std::size_t positive_points = 0;
};

DownturnSummary downturn_analysis(const std::vector<CorrelationPoint>& points, int bin_width = 10);

// Spearman rank correlation with average ranks for ties; nullopt if either
// input is constant.
std::optional<double> spearman(const std::vector<double>& xs, const std::vector<double>& ys);

struct HistogramBin {
  double lo = 0, hi = 0;
  std::size_t count = 0;
  double probability = 0;
  std::optional<double> log10_probability; // nullopt for empty bins
};

// Equal-width bins spanning [min, max]; values equal to max land in the last
// bin. Throws std::invalid_argument for empty input or bins < 1.
std::vector<HistogramBin> histogram(const std::vector<double>& values, int bins,
                                    bool log_probability = false);

} // namespace ifa::stats
