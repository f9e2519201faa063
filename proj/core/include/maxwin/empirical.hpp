#pragma once

// Bootstrap validation on monthly station records: anomalies, detrending,
// AR(1) innovations, a variance-based two-group split, and bootstrap
// estimates of the winning probability at critical sample sizes.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "maxwin/mc_lab.hpp"
#include "maxwin/rng.hpp"

namespace maxwin {

struct YearMonth {
  int year;
  int month;  ///< 1..12

  std::int64_t index() const noexcept { return static_cast<std::int64_t>(year) * 12 + (month - 1); }
  friend auto operator<=>(const YearMonth&, const YearMonth&) = default;
};

struct Observation {
  YearMonth when;
  double value;  ///< degrees C; meaningless when !present
  bool present;
};

struct StationSeries {
  std::string station_id;
  double latitude;
  double longitude;
  std::vector<Observation> observations;  ///< strictly increasing in time

  std::size_t present_count() const;
};

/// Half-open latitude/longitude box, inclusive date range, completeness floor.
struct StationFilter {
  double lat_min = 30.0;
  double lat_max = 40.0;
  double lon_min = -95.0;
  double lon_max = -75.0;
  YearMonth start{1980, 1};
  YearMonth end{2025, 12};
  std::size_t min_present_months = 240;
};

struct LoadReport {
  std::vector<StationSeries> stations;
  std::size_t rows_read = 0;
  std::size_t stations_seen = 0;
  std::size_t dropped_outside_box = 0;
  std::size_t dropped_incomplete = 0;

  bool empty() const noexcept { return stations.empty(); }
};

/// Header of the input layout; one observation per row, empty tavg_c = missing.
inline constexpr const char* kStationCsvHeader = "station_id,latitude,longitude,year,month,tavg_c";

LoadReport load_stations(std::istream& in, const StationFilter& filter = {});
/// Throws IoError when the file cannot be opened.
LoadReport load_stations(const std::string& path, const StationFilter& filter = {});

/// A monthly series of present values; `t` is a month counter (year*12 + month-1).
struct TimedValue {
  std::int64_t t;
  double value;
};
using MonthlySeries = std::vector<TimedValue>;

MonthlySeries present_values(const StationSeries& s);

/// Subtracts the mean of each month-of-year. Every month that occurs needs at
/// least two values.
MonthlySeries deseasonalize(const MonthlySeries& x);
MonthlySeries deseasonalize(const StationSeries& s);

/// Removes the least-squares line in t.
MonthlySeries detrend_linear(const MonthlySeries& x);

struct Ar1Fit {
  double phi;
  std::vector<double> innovations;
  std::size_t n_used;  ///< number of consecutive-month pairs used
};

/// Conditional least squares without intercept, using only pairs of
/// consecutive months (gaps break the lag chain).
Ar1Fit ar1_innovations(const MonthlySeries& x);

struct KMeansSplit {
  std::vector<std::size_t> low;   ///< indices into the input, ascending
  std::vector<std::size_t> high;
  double low_center;
  double high_center;
  double sse;
};

/// Exact optimal two-cluster split of positive values, by scanning every
/// threshold between distinct sorted values.
KMeansSplit kmeans1d_split(std::span<const double> values);

enum class PoolLabel { kLowVariance, kHighVariance };

struct InnovationPool {
  PoolLabel label;
  std::vector<double> values;  ///< standardized by the low-variance pool's sd
  double sd;                   ///< pooled sample sd before standardization
};

struct PoolPair {
  InnovationPool low;
  InnovationPool high;
  double sigma_ratio;  ///< sd(high) / sd(low) > 1
};

/// Concatenates innovations within each cluster, labels the clusters by pooled
/// sd and divides both pools by the low pool's sd.
PoolPair build_pools(std::span<const Ar1Fit> fits, std::span<const std::size_t> cluster_a,
                     std::span<const std::size_t> cluster_b);

struct BootstrapOptions {
  std::uint64_t n1_cap = 10'000'000;
  unsigned threads = 0;
};

/// Frequency over b iterations of {max of n1 draws from pool1 > max of n2
/// draws from pool2}, drawing with replacement; iteration i uses substream i.
McEstimate bootstrap_winner(std::span<const double> pool1, std::span<const double> pool2, std::uint64_t n1,
                            std::uint64_t n2, std::uint64_t b, const RngStream& rng,
                            const BootstrapOptions& options = {});

struct EmpiricalStudyConfig {
  std::vector<double> c_values{0.1, 0.6, 3.0};
  std::vector<double> n2_grid;
  std::uint64_t b = 10'000;
  RngStream rng;
  BootstrapOptions bootstrap;
};

/// One row per (C, n2) with n1 = floor(C f(n2)) at sigma = sigma_ratio; row r
/// uses stream rng.stream_id + r.
std::vector<StudyRow> empirical_study(const PoolPair& pools, const EmpiricalStudyConfig& config);

struct StationDiagnostics {
  std::string station_id;
  double phi;
  double innovation_sd;
  std::size_t n_used;
  PoolLabel cluster;
};

struct EmpiricalResult {
  std::vector<StationDiagnostics> stations;
  KMeansSplit split;
  PoolPair pools;
  std::vector<StudyRow> rows;
};

/// Deseasonalize, detrend and fit AR(1) per station, split by innovation
/// variance, build pools and run the study.
EmpiricalResult run_empirical_pipeline(const std::vector<StationSeries>& stations,
                                       const EmpiricalStudyConfig& config);

}  // namespace maxwin
