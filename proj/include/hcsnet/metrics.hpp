#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hcsnet {

struct SampleSet {
  std::vector<double> values;
  std::string label;
};

struct CdfPoint {
  double value = 0.0;
  double probability = 0.0;

  friend bool operator==(const CdfPoint&, const CdfPoint&) = default;
};

using Cdf = std::vector<CdfPoint>;

struct RunTiming {
  std::string scheme;
  std::size_t n_rrhs = 0;
  double wall_time_s = 0.0;
  std::size_t iterations = 0;
};

// Shannon mapping, bit/s/Hz.
double spectral_efficiency(double sinr_linear);

// Sorted step function; the i-th sorted value carries probability i/n.
Cdf empirical_cdf(const SampleSet& samples);

// Right-continuous evaluation of a step CDF.
double cdf_at(const Cdf& cdf, double x);

// True iff F_a(x) <= F_b(x) + tolerance at every breakpoint of either CDF,
// i.e. `a` first-order dominates `b`.
bool stochastic_dominance(const Cdf& a, const Cdf& b, double tolerance);

// Largest |F(x) - G(x)| over breakpoints of `cdf` against a reference CDF.
template <typename Reference>
double ks_distance(const Cdf& cdf, Reference&& reference) {
  double worst = 0.0;
  double previous = 0.0;
  for (const CdfPoint& p : cdf) {
    const double g = reference(p.value);
    worst = std::max({worst, std::abs(p.probability - g), std::abs(previous - g)});
    previous = p.probability;
  }
  return worst;
}

double median(std::vector<double> values);

// Least-squares slope of log(wall time per iteration) against log(n).
double fit_scaling_exponent(std::span<const RunTiming> timings);

}  // namespace hcsnet
