#include "ifa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ifa::stats {

MomentSummary moments(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::domain_error("moments need at least 2 values");
  const double n = double(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : xs) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (m2 == 0) throw std::domain_error("degenerate distribution: zero variance");
  MomentSummary s;
  s.count = xs.size();
  s.mean = mean;
  s.skewness = m3 / std::pow(m2, 1.5);
  s.kurtosis = m4 / (m2 * m2);
  return s;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::domain_error("length mismatch");
  if (xs.size() < 2) throw std::domain_error("pearson needs at least 2 values");
  const double n = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); i++) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    syy += ys[i] * ys[i];
    sxy += xs[i] * ys[i];
  }
  const double vx = n * sxx - sx * sx;
  const double vy = n * syy - sy * sy;
  if (vx <= 0 || vy <= 0) throw std::domain_error("constant series has no correlation");
  return (n * sxy - sx * sy) / std::sqrt(vx * vy);
}

std::vector<std::optional<double>> rolling_correlation(const std::vector<double>& xs,
                                                       const std::vector<double>& ys,
                                                       int window, int stride) {
  if (xs.size() != ys.size()) throw std::invalid_argument("length mismatch");
  if (window < 2) throw std::invalid_argument("window must be >= 2");
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  if (xs.size() < std::size_t(window)) throw std::invalid_argument("series shorter than window");
  std::vector<std::optional<double>> out;
  for (std::size_t t = 0; t + std::size_t(window) <= xs.size(); t += std::size_t(stride)) {
    std::vector<double> a(xs.begin() + long(t), xs.begin() + long(t) + window);
    std::vector<double> b(ys.begin() + long(t), ys.begin() + long(t) + window);
    try {
      out.push_back(pearson(a, b));
    } catch (const std::domain_error&) {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

long best_asset_return(const std::vector<int>& xs, const std::vector<int>& ys, std::size_t t,
                       int window) {
  if (xs.size() != ys.size()) throw std::invalid_argument("length mismatch");
  if (window < 1 || t + std::size_t(window) > xs.size())
    throw std::out_of_range("window out of range");
  long sx = 0, sy = 0;
  for (std::size_t i = t; i < t + std::size_t(window); i++) {
    sx += xs[i];
    sy += ys[i];
  }
  return std::max(sx, sy);
}

std::optional<double> spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) return std::nullopt;
  auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t(0));
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) j++;
      const double avg = (double(i) + double(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; k++) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  try {
    return pearson(ranks(xs), ranks(ys));
  } catch (const std::domain_error&) {
    return std::nullopt; // all values tied on one side
  }
}

DownturnSummary downturn_analysis(const std::vector<CorrelationPoint>& points, int bin_width) {
  if (points.empty()) throw std::invalid_argument("no points");
  if (bin_width < 1) throw std::invalid_argument("bin width must be >= 1");
  DownturnSummary s;

  std::map<long, std::pair<std::size_t, double>> bins; // floor(ret/width) -> (count, sum corr)
  for (const auto& pt : points) {
    long b = pt.best_return >= 0 ? pt.best_return / bin_width
                                 : -((-pt.best_return + bin_width - 1) / bin_width);
    auto& slot = bins[b];
    slot.first++;
    slot.second += pt.rolling_corr;
  }
  for (const auto& [b, slot] : bins) {
    DownturnBin db;
    db.lo = b * bin_width;
    db.hi = db.lo + bin_width;
    db.count = slot.first;
    db.mean_corr = slot.second / double(slot.first);
    s.bins.push_back(db);
  }

  std::vector<double> nret, ncorr, pret, pcorr;
  for (const auto& pt : points) {
    if (pt.best_return < 0) {
      nret.push_back(double(pt.best_return));
      ncorr.push_back(pt.rolling_corr);
    } else if (pt.best_return > 0) {
      pret.push_back(double(pt.best_return));
      pcorr.push_back(pt.rolling_corr);
    }
  }
  s.negative_points = nret.size();
  s.positive_points = pret.size();
  s.spearman_negative = spearman(nret, ncorr);
  s.spearman_positive = spearman(pret, pcorr);
  return s;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, int bins,
                                    bool log_probability) {
  if (values.empty()) throw std::invalid_argument("histogram of empty input");
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn, hi = *mx;
  const double width = (hi - lo) / double(bins);
  std::vector<HistogramBin> out(static_cast<std::size_t>(bins), HistogramBin{});
  for (int b = 0; b < bins; b++) {
    out[std::size_t(b)].lo = lo + width * b;
    out[std::size_t(b)].hi = lo + width * (b + 1);
  }
  for (double v : values) {
    int b = width > 0 ? int((v - lo) / width) : 0;
    if (b >= bins) b = bins - 1; // v == max
    if (b < 0) b = 0;
    out[std::size_t(b)].count++;
  }
  for (auto& hb : out) {
    hb.probability = double(hb.count) / double(values.size());
    if (log_probability && hb.count > 0) hb.log10_probability = std::log10(hb.probability);
  }
  return out;
}

} // namespace ifa::stats
