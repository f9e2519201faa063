#include "maxwin/empirical.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <string_view>

#include "maxwin/errors.hpp"
#include "maxwin/evt_scaling.hpp"
#include "maxwin/limit_engine.hpp"
#include "maxwin/parallel.hpp"

namespace maxwin {

namespace {

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') {
    s.remove_suffix(1);
  }
  return s;
}

template <class T>
T parse_number(std::string_view field, const char* name, std::size_t line) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') {
    ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw ParseError(std::string("malformed ") + name + " '" + std::string(field) + "'", line);
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw ParseError(std::string("non-finite ") + name, line);
    }
  }
  return value;
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) {
    ss += (x - m) * (x - m);
  }
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

int month_of_year(std::int64_t t) {
  const auto m = static_cast<int>(t % 12);
  return m < 0 ? m + 12 : m;
}

bool in_box(const StationSeries& s, const StationFilter& f) {
  return s.latitude >= f.lat_min && s.latitude < f.lat_max && s.longitude >= f.lon_min && s.longitude < f.lon_max;
}

}  // namespace

std::size_t StationSeries::present_count() const {
  return static_cast<std::size_t>(
      std::count_if(observations.begin(), observations.end(), [](const Observation& o) { return o.present; }));
}

LoadReport load_stations(std::istream& in, const StationFilter& filter) {
  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != kStationCsvHeader) {
    throw ParseError(std::string("expected header '") + kStationCsvHeader + "'", 1);
  }

  std::map<std::string, StationSeries> by_id;
  std::map<std::string, std::size_t> first_line;
  LoadReport report;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim_cr(line);
    if (row.empty()) {
      continue;
    }
    std::array<std::string_view, 6> fields;
    std::size_t count = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= row.size(); ++i) {
      if (i == row.size() || row[i] == ',') {
        if (count == fields.size()) {
          throw ParseError("too many fields (expected 6)", line_no);
        }
        fields[count++] = row.substr(start, i - start);
        start = i + 1;
      }
    }
    if (count != fields.size()) {
      throw ParseError("expected 6 fields, found " + std::to_string(count), line_no);
    }
    if (fields[0].empty()) {
      throw ParseError("empty station_id", line_no);
    }
    const auto lat = parse_number<double>(fields[1], "latitude", line_no);
    const auto lon = parse_number<double>(fields[2], "longitude", line_no);
    const auto year = parse_number<int>(fields[3], "year", line_no);
    const auto month = parse_number<int>(fields[4], "month", line_no);
    if (lat < -90.0 || lat > 90.0) {
      throw ParseError("latitude out of range", line_no);
    }
    if (lon < -180.0 || lon > 180.0) {
      throw ParseError("longitude out of range", line_no);
    }
    if (month < 1 || month > 12) {
      throw ParseError("month " + std::to_string(month) + " outside 1..12", line_no);
    }
    Observation obs{{year, month}, 0.0, false};
    if (!fields[5].empty()) {
      obs.value = parse_number<double>(fields[5], "tavg_c", line_no);
      obs.present = true;
    }
    ++report.rows_read;

    const std::string id(fields[0]);
    auto [it, inserted] = by_id.try_emplace(id, StationSeries{id, lat, lon, {}});
    if (inserted) {
      first_line[id] = line_no;
    } else if (it->second.latitude != lat || it->second.longitude != lon) {
      throw ParseError("station " + id + " changes coordinates (first seen on line " +
                           std::to_string(first_line[id]) + ")",
                       line_no);
    }
    auto& obs_list = it->second.observations;
    if (!obs_list.empty() && !(obs_list.back().when < obs.when)) {
      const bool duplicate = std::any_of(obs_list.begin(), obs_list.end(),
                                         [&](const Observation& o) { return o.when == obs.when; });
      if (duplicate) {
        throw ParseError("duplicate month for station " + id, line_no);
      }
    }
    obs_list.push_back(obs);
  }

  report.stations_seen = by_id.size();
  for (auto& [id, station] : by_id) {
    if (!in_box(station, filter)) {
      ++report.dropped_outside_box;
      continue;
    }
    std::sort(station.observations.begin(), station.observations.end(),
              [](const Observation& a, const Observation& b) { return a.when < b.when; });
    std::erase_if(station.observations,
                  [&](const Observation& o) { return o.when < filter.start || filter.end < o.when; });
    if (station.present_count() < filter.min_present_months) {
      ++report.dropped_incomplete;
      continue;
    }
    report.stations.push_back(std::move(station));
  }
  return report;
}

LoadReport load_stations(const std::string& path, const StationFilter& filter) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open input file '" + path + "'");
  }
  return load_stations(in, filter);
}

MonthlySeries present_values(const StationSeries& s) {
  MonthlySeries out;
  out.reserve(s.observations.size());
  for (const auto& o : s.observations) {
    if (o.present) {
      out.push_back({o.when.index(), o.value});
    }
  }
  return out;
}

MonthlySeries deseasonalize(const MonthlySeries& x) {
  std::array<double, 12> sum{};
  std::array<std::size_t, 12> count{};
  for (const auto& p : x) {
    sum[month_of_year(p.t)] += p.value;
    ++count[month_of_year(p.t)];
  }
  std::string sparse;
  for (int m = 0; m < 12; ++m) {
    if (count[m] == 1) {
      sparse += (sparse.empty() ? "" : ", ") + std::to_string(m + 1);
    }
  }
  if (!sparse.empty()) {
    throw DomainError("deseasonalize: fewer than 2 observations for month(s) " + sparse);
  }
  std::array<double, 12> mean{};
  for (int m = 0; m < 12; ++m) {
    mean[m] = count[m] ? sum[m] / static_cast<double>(count[m]) : 0.0;
  }
  // Second pass removes the rounding residue of the first mean.
  std::array<double, 12> resid{};
  for (const auto& p : x) {
    resid[month_of_year(p.t)] += p.value - mean[month_of_year(p.t)];
  }
  for (int m = 0; m < 12; ++m) {
    if (count[m]) {
      mean[m] += resid[m] / static_cast<double>(count[m]);
    }
  }
  MonthlySeries out(x);
  for (auto& p : out) {
    p.value -= mean[month_of_year(p.t)];
  }
  return out;
}

MonthlySeries deseasonalize(const StationSeries& s) { return deseasonalize(present_values(s)); }

MonthlySeries detrend_linear(const MonthlySeries& x) {
  if (x.size() < 3) {
    throw DomainError("detrend_linear: need at least 3 values");
  }
  const double n = static_cast<double>(x.size());
  double t_mean = 0.0;
  for (const auto& p : x) {
    t_mean += static_cast<double>(p.t - x.front().t);
  }
  t_mean /= n;

  MonthlySeries out(x);
  for (int pass = 0; pass < 2; ++pass) {
    double v_mean = 0.0;
    for (const auto& p : out) {
      v_mean += p.value;
    }
    v_mean /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& p : out) {
      const double dt = static_cast<double>(p.t - x.front().t) - t_mean;
      sxy += dt * (p.value - v_mean);
      sxx += dt * dt;
    }
    const double slope = sxy / sxx;
    for (auto& p : out) {
      const double dt = static_cast<double>(p.t - x.front().t) - t_mean;
      p.value -= v_mean + slope * dt;
    }
  }
  return out;
}

Ar1Fit ar1_innovations(const MonthlySeries& x) {
  if (x.size() < 10) {
    throw DomainError("ar1_innovations: need at least 10 values");
  }
  double num = 0.0;
  double den = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i].t == x[i - 1].t + 1) {
      num += x[i].value * x[i - 1].value;
      den += x[i - 1].value * x[i - 1].value;
      ++pairs;
    }
  }
  if (pairs == 0) {
    throw DomainError("ar1_innovations: no consecutive-month pairs");
  }
  if (den == 0.0) {
    throw DomainError("ar1_innovations: zero lagged sum of squares (constant-zero series)");
  }
  const double phi = num / den;
  if (!(std::fabs(phi) < 1.0)) {
    throw DomainError("ar1_innovations: fitted phi outside (-1, 1)");
  }
  Ar1Fit fit{phi, {}, pairs};
  fit.innovations.reserve(pairs);
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i].t == x[i - 1].t + 1) {
      fit.innovations.push_back(x[i].value - phi * x[i - 1].value);
    }
  }
  return fit;
}

KMeansSplit kmeans1d_split(std::span<const double> values) {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("kmeans1d_split: values must be positive and finite");
    }
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  const std::size_t n = values.size();
  if (n < 2 || values[order.front()] == values[order.back()]) {
    throw DomainError("kmeans1d_split: need at least two distinct values");
  }

  // Prefix sums of sorted values (shifted by the median for conditioning).
  const double shift = values[order[n / 2]];
  std::vector<double> s1(n + 1, 0.0);
  std::vector<double> s2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = values[order[i]] - shift;
    s1[i + 1] = s1[i] + v;
    s2[i + 1] = s2[i] + v * v;
  }
  auto sse = [&](std::size_t a, std::size_t b) {
    const double m = static_cast<double>(b - a);
    const double s = s1[b] - s1[a];
    return std::max(0.0, (s2[b] - s2[a]) - s * s / m);
  };

  std::size_t best_cut = 0;
  double best = HUGE_VAL;
  for (std::size_t cut = 1; cut < n; ++cut) {
    if (values[order[cut - 1]] == values[order[cut]]) {
      continue;
    }
    const double total = sse(0, cut) + sse(cut, n);
    if (total < best) {
      best = total;
      best_cut = cut;
    }
  }

  KMeansSplit out;
  out.low.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_cut));
  out.high.assign(order.begin() + static_cast<std::ptrdiff_t>(best_cut), order.end());
  std::sort(out.low.begin(), out.low.end());
  std::sort(out.high.begin(), out.high.end());
  out.low_center = shift + (s1[best_cut] - s1[0]) / static_cast<double>(best_cut);
  out.high_center = shift + (s1[n] - s1[best_cut]) / static_cast<double>(n - best_cut);
  out.sse = best;
  return out;
}

PoolPair build_pools(std::span<const Ar1Fit> fits, std::span<const std::size_t> cluster_a,
                     std::span<const std::size_t> cluster_b) {
  auto concat = [&](std::span<const std::size_t> idx) {
    std::vector<double> pool;
    for (std::size_t i : idx) {
      if (i >= fits.size()) {
        throw DomainError("build_pools: station index out of range");
      }
      pool.insert(pool.end(), fits[i].innovations.begin(), fits[i].innovations.end());
    }
    if (pool.size() < 2) {
      throw DomainError("build_pools: each cluster needs at least two innovations");
    }
    return pool;
  };
  std::vector<double> a = concat(cluster_a);
  std::vector<double> b = concat(cluster_b);
  double sd_a = sample_sd(a);
  double sd_b = sample_sd(b);
  if (sd_a > sd_b) {
    std::swap(a, b);
    std::swap(sd_a, sd_b);
  }
  const double ratio = sd_b / sd_a;
  if (!(ratio > 1.0 + 1e-9)) {
    throw DomainError("build_pools: degenerate variance split (sigma ratio <= 1)");
  }
  for (double& v : a) {
    v /= sd_a;
  }
  for (double& v : b) {
    v /= sd_a;
  }
  return {{PoolLabel::kLowVariance, std::move(a), sd_a}, {PoolLabel::kHighVariance, std::move(b), sd_b}, ratio};
}

McEstimate bootstrap_winner(std::span<const double> pool1, std::span<const double> pool2, std::uint64_t n1,
                            std::uint64_t n2, std::uint64_t b, const RngStream& rng,
                            const BootstrapOptions& options) {
  if (pool1.empty() || pool2.empty()) {
    throw DomainError("bootstrap_winner: pools must be nonempty");
  }
  if (n1 < 1 || n2 < 1) {
    throw DomainError("bootstrap_winner: n1 and n2 must be >= 1");
  }
  if (n1 > options.n1_cap) {
    throw DomainError("bootstrap_winner: n1 = " + std::to_string(n1) + " exceeds the per-variable cap of " +
                      std::to_string(options.n1_cap) + "; use the theoretical limit instead");
  }
  if (b == 0) {
    throw DomainError("bootstrap_winner: b must be >= 1");
  }
  auto counts = parallel_count(b, 1, options.threads, [&](std::uint64_t begin, std::uint64_t end, auto out) {
    for (std::uint64_t i = begin; i < end; ++i) {
      SubstreamRng r(rng, i);
      double m1 = -HUGE_VAL;
      for (std::uint64_t j = 0; j < n1; ++j) {
        m1 = std::max(m1, pool1[r.below(pool1.size())]);
      }
      double m2 = -HUGE_VAL;
      for (std::uint64_t j = 0; j < n2; ++j) {
        m2 = std::max(m2, pool2[r.below(pool2.size())]);
      }
      out[0] += m1 > m2 ? 1 : 0;
    }
  });
  return McEstimate::from_counts(counts[0], b);
}

std::vector<StudyRow> empirical_study(const PoolPair& pools, const EmpiricalStudyConfig& config) {
  if (config.c_values.empty() || config.n2_grid.empty()) {
    throw DomainError("empirical_study: C and n2 grids must be nonempty");
  }
  const double sigma = pools.sigma_ratio;
  std::vector<StudyRow> rows;
  std::uint64_t row_index = 0;
  for (const double c : config.c_values) {
    const QuadResult limit = two_group_limit(c, sigma);
    for (const double n2 : config.n2_grid) {
      const CriticalN1 n1 = critical_n1(n2, sigma, c);
      if (!n1.floor_value) {
        throw DomainError("empirical_study: n1 overflows at n2 = " + std::to_string(n2));
      }
      const auto n2_count = static_cast<std::uint64_t>(std::llround(n2));
      const McEstimate est =
          bootstrap_winner(pools.low.values, pools.high.values, static_cast<std::uint64_t>(*n1.floor_value), n2_count,
                           config.b, config.rng.with_stream(config.rng.stream_id + row_index), config.bootstrap);
      StudyRow row;
      row.n2 = static_cast<double>(n2_count);
      row.n1_floor = n1.floor_value;
      row.n1 = static_cast<double>(*n1.floor_value);
      row.sigma = sigma;
      row.c = c;
      row.p_hat = est.p_hat;
      row.std_err = est.std_err;
      row.p_limit = limit.value;
      row.p_limit_err = limit.abs_err;
      rows.push_back(row);
      ++row_index;
    }
  }
  return rows;
}

EmpiricalResult run_empirical_pipeline(const std::vector<StationSeries>& stations,
                                       const EmpiricalStudyConfig& config) {
  if (stations.size() < 2) {
    throw DomainError("empirical pipeline: need at least two stations");
  }
  std::vector<Ar1Fit> fits;
  std::vector<double> variances;
  fits.reserve(stations.size());
  for (const auto& s : stations) {
    try {
      fits.push_back(ar1_innovations(detrend_linear(deseasonalize(s))));
    } catch (const DomainError& e) {
      throw DomainError("station " + s.station_id + ": " + e.what());
    }
    const auto& innov = fits.back().innovations;
    if (innov.size() < 2) {
      throw DomainError("station " + s.station_id + ": fewer than two innovations");
    }
    const double sd = sample_sd(innov);
    variances.push_back(sd * sd);
  }

  EmpiricalResult result;
  result.split = kmeans1d_split(variances);
  result.pools = build_pools(fits, result.split.low, result.split.high);

  std::vector<PoolLabel> label(stations.size(), PoolLabel::kLowVariance);
  for (std::size_t i : result.split.high) {
    label[i] = PoolLabel::kHighVariance;
  }
  for (std::size_t i = 0; i < stations.size(); ++i) {
    result.stations.push_back(
        {stations[i].station_id, fits[i].phi, std::sqrt(variances[i]), fits[i].n_used, label[i]});
  }
  result.rows = empirical_study(result.pools, config);
  return result;
}

}  // namespace maxwin
