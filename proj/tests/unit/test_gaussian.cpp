#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "maxwin/errors.hpp"
#include "maxwin/gaussian.hpp"
#include "oracles.hpp"

using namespace maxwin;
using maxwin::testing::close_abs;
using maxwin::testing::close_rel;

// Reference values below were computed with 40-digit arithmetic.

TEST_CASE("log normal cdf matches high-precision references") {
  CHECK(close_rel(log_std_normal_cdf(-40.0), -804.60844201375378817, 1e-14));
  CHECK(close_rel(log_std_normal_cdf(-37.5), -707.66898931750719107, 1e-14));
  CHECK(close_rel(log_std_normal_cdf(-10.0), -53.231285150512470578, 1e-14));
  CHECK(close_rel(log_std_normal_cdf(3.0), -0.0013508099647481937988, 1e-13));
  CHECK(close_rel(log_std_normal_sf(40.0), -804.60844201375378817, 1e-14));
}

TEST_CASE("normal cdf in the lower tail keeps relative accuracy") {
  CHECK(close_rel(std_normal_cdf(-5.0), 2.8665157187919391167e-7, 1e-14));
  CHECK(close_rel(std_normal_cdf(-8.3), 5.205569744890285158e-17, 1e-14));
  CHECK(std_normal_cdf(0.0).value() == 0.5);
  CHECK(std_normal_cdf(-40.0).value() == 0.0);
  CHECK(std_normal_cdf(40.0).value() == 1.0);
}

TEST_CASE("quantile references") {
  CHECK(close_rel(std_normal_quantile(UnitProb(0.975)), 1.9599639845400542355, 1e-15));
  CHECK(close_rel(std_normal_quantile(UnitProb(std::exp(-1.0))), -0.33747496376420245528, 1e-14));
  CHECK(std_normal_quantile(UnitProb(0.5)) == 0.0);
  CHECK(close_rel(upper_tail_quantile(TailProb(-1e4)), 141.3798398731271637, 1e-14));
  CHECK(close_rel(upper_tail_quantile(TailProb(-1e6)), 1414.207782991017327, 1e-14));
  CHECK(upper_tail_quantile(TailProb(std::log(0.5))) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("gumbel cdf examples") {
  CHECK(close_abs(gumbel_cdf(0.0), std::exp(-1.0), 1e-16));
  CHECK(close_abs(gumbel_cdf(-std::log(std::log(2.0))), 0.5, 1e-15));
  CHECK(gumbel_cdf(50.0).value() == doctest::Approx(1.0).epsilon(1e-16));
  CHECK(gumbel_cdf(-10.0).value() == 0.0);
}

TEST_CASE("quantile round trip on a log grid") {
  double worst = 0.0;
  for (double lp = std::log(1e-12); lp <= std::log(0.5); lp += 0.05) {
    const double p = std::exp(lp);
    worst = std::max(worst, std::fabs(std_normal_cdf(std_normal_quantile(UnitProb(p))) - p));
    const double r = 1.0 - p;
    worst = std::max(worst, std::fabs(std_normal_cdf(std_normal_quantile(UnitProb(r))) - r));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("deep tail round trip") {
  double worst = 0.0;
  for (double lq = -1e5; lq <= std::log(0.5); lq = lq < -5.0 ? lq * 0.97 : lq + 0.01) {
    const double x = upper_tail_quantile(TailProb(lq));
    worst = std::max(worst, std::fabs(log_std_normal_sf(x) - lq) / std::fabs(lq));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("symmetry of the cdf") {
  for (double x = 0.0; x <= 8.0; x += 0.01) {
    CHECK(close_abs(std_normal_cdf(-x) + std_normal_cdf(x), 1.0, 1e-15));
  }
}

TEST_CASE("agreement with an erfc-based cdf") {
  // rounding x/sqrt(2) costs the oracle about x^2 ulps
  for (double x = -30.0; x <= 8.0; x += 0.173) {
    CHECK(close_rel(std_normal_cdf(x), maxwin::testing::phi_erfc(x), 1e-14 + 4e-16 * x * x));
  }
}

TEST_CASE("monotonicity on dense grids") {
  double prev_cdf = -1.0;
  double prev_log = -std::numeric_limits<double>::infinity();
  for (double x = -38.0; x <= 8.0; x += 1e-3) {
    const double c = std_normal_cdf(x);
    const double l = log_std_normal_cdf(x);
    REQUIRE(c >= prev_cdf);
    REQUIRE(l > prev_log);
    prev_cdf = c;
    prev_log = l;
  }
  double prev_q = -std::numeric_limits<double>::infinity();
  for (double p = 1e-6; p < 1.0 - 1e-6; p += 1e-5) {
    const double q = std_normal_quantile(UnitProb(p));
    REQUIRE(q > prev_q);
    prev_q = q;
  }
  double prev_t = std::numeric_limits<double>::infinity();
  for (double lq = -2e4; lq <= std::log(0.5); lq += 0.5) {
    const double t = upper_tail_quantile(TailProb(lq));
    REQUIRE(t < prev_t);
    prev_t = t;
  }
  double prev_g = -1.0;
  for (double x = -3.0; x <= 40.0; x += 1e-3) {
    const double g = gumbel_cdf(x);
    REQUIRE(g >= prev_g);
    prev_g = g;
  }
}

TEST_CASE("log pdf") {
  CHECK(close_abs(log_std_normal_pdf(0.0), -0.5 * std::log(2.0 * std::numbers::pi), 1e-15));
  CHECK(close_rel(log_std_normal_pdf(100.0), -5000.0 - 0.5 * std::log(2.0 * std::numbers::pi), 1e-15));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(UnitProb(1.5), DomainError);
  CHECK_THROWS_AS(UnitProb(-0.1), DomainError);
  CHECK_THROWS_AS(UnitProb(std::nan("")), DomainError);
  CHECK_THROWS_AS(TailProb(0.1), DomainError);
  CHECK_THROWS_AS(TailProb(-std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(std_normal_quantile(UnitProb(0.0)), DomainError);
  CHECK_THROWS_AS(std_normal_quantile(UnitProb(1.0)), DomainError);
  CHECK_THROWS_AS(upper_tail_quantile(TailProb(-0.5)), DomainError);
  CHECK_THROWS_AS(std_normal_cdf(std::nan("")), DomainError);
}
