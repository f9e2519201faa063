#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace maxwin::testing {

inline bool close_abs(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

inline bool close_rel(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::fabs(b); }

/// Kolmogorov-Smirnov statistic of `samples` against a continuous CDF.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic 1% critical value of the one-sample KS statistic, with the
/// Stephens small-sample correction.
inline double ks_critical_1pct(std::size_t n) {
  const double s = std::sqrt(static_cast<double>(n));
  return 1.6276 / (s + 0.12 + 0.11 / s);
}

/// Smallest within-cluster SSE over all nonempty 2-partitions whose clusters
/// are separated by a threshold (every low value <= every high value), by
/// enumeration of subsets.
inline double brute_force_two_cluster_sse(std::span<const double> v) {
  const std::size_t n = v.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    double max_low = -std::numeric_limits<double>::infinity();
    double min_high = std::numeric_limits<double>::infinity();
    double sl = 0, sh = 0, nl = 0, nh = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        min_high = std::min(min_high, v[i]);
        sh += v[i];
        nh += 1;
      } else {
        max_low = std::max(max_low, v[i]);
        sl += v[i];
        nl += 1;
      }
    }
    if (max_low >= min_high) {
      continue;
    }
    const double ml = sl / nl;
    const double mh = sh / nh;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = (mask >> i & 1) ? mh : ml;
      sse += (v[i] - m) * (v[i] - m);
    }
    best = std::min(best, sse);
  }
  return best;
}

/// Normal CDF through the C library's erfc, an implementation independent of
/// the one under test.
inline double phi_erfc(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace maxwin::testing
