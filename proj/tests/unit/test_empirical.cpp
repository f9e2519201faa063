#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "maxwin/empirical.hpp"
#include "maxwin/errors.hpp"
#include "maxwin/fixture.hpp"
#include "maxwin/gaussian.hpp"
#include "maxwin/rng.hpp"
#include "oracles.hpp"

using namespace maxwin;
using maxwin::testing::close_abs;

namespace {

std::string csv(const std::string& body) { return std::string(kStationCsvHeader) + "\n" + body; }

LoadReport load_text(const std::string& text, const StationFilter& f = {}) {
  std::istringstream in(text);
  return load_stations(in, f);
}

std::string station_rows(const std::string& id, double lat, double lon, int y0, int months,
                         const std::function<std::string(int)>& value) {
  std::string s;
  for (int i = 0; i < months; ++i) {
    const int t = y0 * 12 + i;
    s += id + "," + std::to_string(lat) + "," + std::to_string(lon) + "," + std::to_string(t / 12) + "," +
         std::to_string(t % 12 + 1) + "," + value(i) + "\n";
  }
  return s;
}

MonthlySeries series_from(const std::vector<double>& v, std::int64_t t0 = 1980 * 12) {
  MonthlySeries s;
  for (std::size_t i = 0; i < v.size(); ++i) s.push_back({t0 + static_cast<std::int64_t>(i), v[i]});
  return s;
}

std::vector<double> gaussian_ar1(double phi, double sd, std::size_t n, std::uint64_t seed) {
  SubstreamRng r(RngStream{seed, 0}, 0);
  std::vector<double> x(n);
  double prev = 0.0;
  for (auto& v : x) {
    prev = phi * prev + sd * std_normal_quantile(UnitProb(r.uniform()));
    v = prev;
  }
  return x;
}

double sd_of(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST_CASE("loading station records") {
  StationFilter f;
  f.min_present_months = 20;
  f.start = {2000, 1};
  f.end = {2001, 12};
  const std::string text = csv(station_rows("A", 35.0, -80.0, 2000, 24, [](int i) { return i == 3 ? "" : "1.5"; }) +
                               station_rows("B", 30.0, -95.0, 1999, 36, [](int) { return "2"; }) +
                               station_rows("NORTH", 40.0, -80.0, 2000, 24, [](int) { return "3"; }) +
                               station_rows("SHORT", 35.0, -80.0, 2000, 10, [](int) { return "4"; }));
  const LoadReport r = load_text(text, f);
  CHECK(r.rows_read == 24 + 36 + 24 + 10);
  CHECK(r.stations_seen == 4);
  CHECK(r.dropped_outside_box == 1);
  CHECK(r.dropped_incomplete == 1);
  REQUIRE(r.stations.size() == 2);
  CHECK(r.stations[0].station_id == "A");
  CHECK(r.stations[0].present_count() == 23);
  CHECK_FALSE(r.stations[0].observations[3].present);
  CHECK(r.stations[1].observations.size() == 24);
  CHECK(r.stations[1].observations.front().when == YearMonth{2000, 1});
  CHECK(present_values(r.stations[0]).size() == 23);
}

TEST_CASE("rows may arrive out of order and with CRLF endings") {
  const std::string text = std::string(kStationCsvHeader) + "\r\nX,35,-80,2000,2,1.0\r\nX,35,-80,2000,1,2.0\r\n";
  StationFilter f;
  f.min_present_months = 2;
  const auto r = load_text(text, f);
  REQUIRE(r.stations.size() == 1);
  CHECK(r.stations[0].observations[0].value == 2.0);
}

TEST_CASE("malformed input names the line") {
  CHECK_THROWS_WITH_AS(load_text("id,lat\n"), doctest::Contains("line 1"), ParseError);
  CHECK_THROWS_WITH_AS(load_text(csv("A,35,-80,2000,13,1\n")), doctest::Contains("line 2: month 13"), ParseError);
  CHECK_THROWS_WITH_AS(load_text(csv("A,35,-80,2000,1,1\nA,35,-80,2000,1,2\n")),
                       doctest::Contains("line 3: duplicate month"), ParseError);
  CHECK_THROWS_WITH_AS(load_text(csv("A,35,-80,2000,1,1\nA,36,-80,2000,2,2\n")),
                       doctest::Contains("changes coordinates"), ParseError);
  CHECK_THROWS_AS(load_text(csv("A,35,-80,2000,1,1,7\n")), ParseError);
  CHECK_THROWS_AS(load_text(csv("A,35,-80,2000,1\n")), ParseError);
  CHECK_THROWS_AS(load_text(csv("A,abc,-80,2000,1,1\n")), ParseError);
  CHECK_THROWS_AS(load_text(csv(",35,-80,2000,1,1\n")), ParseError);
  CHECK_THROWS_AS(load_text(csv("A,95,-80,2000,1,1\n")), ParseError);
  CHECK_THROWS_AS(load_text(csv("A,35,-80,2000,1,nan\n")), ParseError);
  CHECK_THROWS_AS(load_stations(std::string("/nonexistent/stations.csv")), IoError);
  try {
    load_text(csv("A,35,-80,2000,1,1\n\nA,35,-80,2000,0,1\n"));
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("deseasonalize") {
  std::vector<double> v;
  for (int i = 0; i < 60; ++i) v.push_back(10.0 * std::sin(i * 0.5236) + 0.01 * i);
  const MonthlySeries x = series_from(v);
  const MonthlySeries d = deseasonalize(x);
  for (int m = 0; m < 12; ++m) {
    double s = 0.0;
    for (const auto& p : d)
      if (p.t % 12 == m) s += p.value;
    CHECK(close_abs(s, 0.0, 1e-10));
  }
  const MonthlySeries dd = deseasonalize(d);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(close_abs(dd[i].value, d[i].value, 1e-10));

  MonthlySeries sparse = series_from(std::vector<double>(13, 1.0));
  CHECK_THROWS_WITH_AS(deseasonalize(sparse), doctest::Contains("month"), DomainError);
}

TEST_CASE("detrend") {
  std::vector<double> v;
  for (int i = 0; i < 100; ++i) v.push_back(3.0 + 0.2 * i + std::cos(i * 1.3));
  const MonthlySeries d = detrend_linear(series_from(v));
  double s = 0.0;
  double st = 0.0;
  for (const auto& p : d) {
    s += p.value;
    st += p.value * static_cast<double>(p.t - 1980 * 12);
  }
  CHECK(close_abs(s, 0.0, 1e-9));
  CHECK(close_abs(st, 0.0, 1e-7));
  const MonthlySeries dd = detrend_linear(d);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(close_abs(dd[i].value, d[i].value, 1e-10));
  CHECK_THROWS_AS(detrend_linear(series_from({1.0, 2.0})), DomainError);
}

TEST_CASE("AR(1) fit") {
  const auto x = gaussian_ar1(0.6, 1.0, 20000, 3);
  const Ar1Fit fit = ar1_innovations(series_from(x));
  CHECK(std::fabs(fit.phi - 0.6) < 0.02);
  CHECK(fit.n_used == x.size() - 1);
  CHECK(std::fabs(sd_of(fit.innovations) - 1.0) < 0.02);

  // A gap removes the two pairs that would straddle it.
  MonthlySeries gapped = series_from(std::vector<double>(x.begin(), x.begin() + 50));
  gapped.erase(gapped.begin() + 20);
  CHECK(ar1_innovations(gapped).n_used == 47);

  CHECK_THROWS_AS(ar1_innovations(series_from({1, 2, 3})), DomainError);
  CHECK_THROWS_AS(ar1_innovations(series_from(std::vector<double>(20, 0.0))), DomainError);
  MonthlySeries apart;
  for (int i = 0; i < 12; ++i) apart.push_back({i * 2, 1.0});
  CHECK_THROWS_AS(ar1_innovations(apart), DomainError);
}

TEST_CASE("two-cluster split is exactly optimal") {
  std::mt19937_64 gen(12);
  std::uniform_int_distribution<int> n_dist(2, 12);
  std::lognormal_distribution<double> v_dist(0.0, 0.7);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = n_dist(gen);
    std::vector<double> v(n);
    for (auto& x : v) x = v_dist(gen);
    if (rep % 5 == 0 && n > 2) v[n / 2] = v[0];
    const KMeansSplit s = kmeans1d_split(v);
    CHECK(std::fabs(s.sse - maxwin::testing::brute_force_two_cluster_sse(v)) <= 1e-9);
    CHECK(s.low.size() + s.high.size() == v.size());
    for (auto i : s.low)
      for (auto j : s.high) REQUIRE(v[i] < v[j]);
  }
  const std::vector<double> clear{1.0, 1.1, 0.9, 2.2, 2.3};
  const KMeansSplit s = kmeans1d_split(clear);
  CHECK(s.low == std::vector<std::size_t>{0, 1, 2});
  CHECK(close_abs(s.high_center, 2.25, 1e-15));
  CHECK_THROWS_AS(kmeans1d_split(std::vector<double>{1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(kmeans1d_split(std::vector<double>{1.0, -1.0}), DomainError);
}

TEST_CASE("pools are standardized by the low-variance pool") {
  std::vector<Ar1Fit> fits;
  fits.push_back({0.0, gaussian_ar1(0.0, 3.0, 400, 1), 400});
  fits.push_back({0.0, gaussian_ar1(0.0, 2.0, 400, 2), 400});
  fits.push_back({0.0, gaussian_ar1(0.0, 2.0, 400, 3), 400});
  const std::vector<std::size_t> high{0};
  const std::vector<std::size_t> low{1, 2};
  const PoolPair p = build_pools(fits, high, low);
  CHECK(p.low.label == PoolLabel::kLowVariance);
  CHECK(p.low.values.size() == 800);
  CHECK(close_abs(sd_of(p.low.values), 1.0, 1e-12));
  CHECK(close_abs(sd_of(p.high.values), p.sigma_ratio, 1e-12));
  CHECK(close_abs(p.sigma_ratio, p.high.sd / p.low.sd, 1e-15));
  CHECK(std::fabs(p.sigma_ratio - 1.5) < 0.15);

  std::vector<Ar1Fit> same{fits[1], fits[1]};
  CHECK_THROWS_AS(build_pools(same, std::vector<std::size_t>{0}, std::vector<std::size_t>{1}), DomainError);
  CHECK_THROWS_AS(build_pools(fits, std::vector<std::size_t>{7}, low), DomainError);
}

TEST_CASE("bootstrap winner") {
  const auto p1 = gaussian_ar1(0.0, 1.0, 5000, 4);
  const auto p2 = gaussian_ar1(0.0, 1.5, 5000, 5);
  const RngStream rng{77, 0};
  const McEstimate base = bootstrap_winner(p1, p2, 200, 20, 2000, rng);

  for (double k : {4.0, 2.5}) {
    std::vector<double> s1 = p1;
    std::vector<double> s2 = p2;
    for (auto& v : s1) v *= k;
    for (auto& v : s2) v *= k;
    CHECK(bootstrap_winner(s1, s2, 200, 20, 2000, rng).successes == base.successes);
  }
  BootstrapOptions serial;
  serial.threads = 1;
  BootstrapOptions wide;
  wide.threads = 5;
  CHECK(bootstrap_winner(p1, p2, 200, 20, 2001, rng, serial).successes ==
        bootstrap_winner(p1, p2, 200, 20, 2001, rng, wide).successes);

  // Pools of single values make the winner deterministic.
  CHECK(bootstrap_winner(std::vector<double>{2.0}, std::vector<double>{1.0}, 3, 3, 10, rng).p_hat == 1.0);

  BootstrapOptions capped;
  capped.n1_cap = 100;
  CHECK_THROWS_WITH_AS(bootstrap_winner(p1, p2, 200, 20, 10, rng, capped), doctest::Contains("cap"), DomainError);
  CHECK_THROWS_AS(bootstrap_winner(std::vector<double>{}, p2, 2, 2, 10, rng), DomainError);
  CHECK_THROWS_AS(bootstrap_winner(p1, p2, 2, 2, 0, rng), DomainError);
}

TEST_CASE("study rows reduce to bootstrap_winner") {
  std::vector<Ar1Fit> fits{{0.0, gaussian_ar1(0.0, 1.0, 3000, 6), 3000}, {0.0, gaussian_ar1(0.0, 1.5, 3000, 7), 3000}};
  const PoolPair pools = build_pools(fits, std::vector<std::size_t>{0}, std::vector<std::size_t>{1});
  EmpiricalStudyConfig cfg;
  cfg.c_values = {0.6, 3.0};
  cfg.n2_grid = {5, 20};
  cfg.b = 500;
  cfg.rng = {9, 100};
  const auto rows = empirical_study(pools, cfg);
  REQUIRE(rows.size() == 4);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto n1 = *critical_n1(rows[r].n2, pools.sigma_ratio, rows[r].c).floor_value;
    CHECK(rows[r].n1 == static_cast<double>(n1));
    const auto direct = bootstrap_winner(pools.low.values, pools.high.values, static_cast<std::uint64_t>(n1),
                                         static_cast<std::uint64_t>(rows[r].n2), 500, RngStream{9, 100 + r});
    CHECK(rows[r].p_hat == direct.p_hat);
    CHECK(rows[r].sigma == pools.sigma_ratio);
  }
}

TEST_CASE("fixture round trip through the pipeline") {
  FixtureSpec spec;
  std::ostringstream a;
  std::ostringstream b;
  write_fixture(a, spec);
  write_fixture(b, spec);
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  const LoadReport report = load_stations(in);
  CHECK(report.stations_seen == 26);
  CHECK(report.dropped_outside_box == 2);
  REQUIRE(report.stations.size() == 24);

  EmpiricalStudyConfig cfg;
  cfg.c_values = {0.6};
  cfg.n2_grid = {5, 20};
  cfg.b = 200;
  const EmpiricalResult res = run_empirical_pipeline(report.stations, cfg);
  CHECK(std::fabs(res.pools.sigma_ratio / 1.5 - 1.0) < 0.1);
  REQUIRE(res.stations.size() == 24);
  for (std::size_t i = 0; i < 24; ++i) {
    CHECK(res.stations[i].cluster == (i < 12 ? PoolLabel::kLowVariance : PoolLabel::kHighVariance));
    CHECK(std::fabs(res.stations[i].phi - 0.5) < 0.15);
  }
  CHECK(res.rows.size() == 2);

  spec.phi = 1.0;
  CHECK_THROWS_AS(write_fixture(a, spec), DomainError);
}

TEST_CASE("pipeline errors") {
  CHECK_THROWS_AS(run_empirical_pipeline({}, {}), DomainError);
}
