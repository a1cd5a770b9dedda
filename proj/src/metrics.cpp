#include "hcsnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hcsnet/error.hpp"

namespace hcsnet {

double spectral_efficiency(double sinr_linear) {
  if (!(sinr_linear >= 0.0)) throw DomainError("SINR must be non-negative");
  return std::log2(1.0 + sinr_linear);
}

Cdf empirical_cdf(const SampleSet& samples) {
  if (samples.values.empty()) throw DomainError("CDF of an empty sample set");
  std::vector<double> sorted = samples.values;
  for (double v : sorted) {
    if (!std::isfinite(v)) throw DomainError("CDF samples must be finite");
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  Cdf out;
  out.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

double cdf_at(const Cdf& cdf, double x) {
  const auto it = std::upper_bound(
      cdf.begin(), cdf.end(), x,
      [](double v, const CdfPoint& p) { return v < p.value; });
  return it == cdf.begin() ? 0.0 : std::prev(it)->probability;
}

bool stochastic_dominance(const Cdf& a, const Cdf& b, double tolerance) {
  if (a.empty() || b.empty()) throw DomainError("dominance needs non-empty CDFs");
  for (const Cdf* c : {&a, &b}) {
    for (const CdfPoint& p : *c) {
      if (cdf_at(a, p.value) > cdf_at(b, p.value) + tolerance) return false;
    }
  }
  return true;
}

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

double fit_scaling_exponent(std::span<const RunTiming> timings) {
  std::set<std::size_t> distinct;
  for (const RunTiming& t : timings) distinct.insert(t.n_rrhs);
  if (distinct.size() < 3) {
    throw InsufficientDataError("scaling fit needs at least three distinct sizes");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const RunTiming& t : timings) {
    if (!(t.wall_time_s > 0.0) || t.n_rrhs == 0 || t.iterations == 0) {
      throw DomainError("timings need positive size, time and iteration count");
    }
    const double x = std::log(static_cast<double>(t.n_rrhs));
    const double y = std::log(t.wall_time_s / static_cast<double>(t.iterations));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(timings.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace hcsnet
