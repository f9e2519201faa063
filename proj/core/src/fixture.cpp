#include "maxwin/fixture.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "maxwin/errors.hpp"
#include "maxwin/gaussian.hpp"

namespace maxwin {

namespace {

double normal(SubstreamRng& r) { return std_normal_quantile(UnitProb(r.uniform())); }

}  // namespace

void write_fixture(std::ostream& out, const FixtureSpec& spec) {
  if (!(std::fabs(spec.phi) < 1.0)) {
    throw DomainError("write_fixture: phi must lie in (-1, 1)");
  }
  if (!(spec.sd_low > 0.0) || !(spec.sd_high > 0.0)) {
    throw DomainError("write_fixture: innovation sds must be positive");
  }
  if (spec.end < spec.start) {
    throw DomainError("write_fixture: end precedes start");
  }
  if (!(spec.missing_fraction >= 0.0 && spec.missing_fraction < 1.0)) {
    throw DomainError("write_fixture: missing fraction must lie in [0, 1)");
  }

  out << kStationCsvHeader << '\n';
  const std::size_t total = spec.low_stations + spec.high_stations + spec.outside_stations;
  const std::int64_t first = spec.start.index();
  const std::int64_t last = spec.end.index();
  char buf[160];

  for (std::size_t s = 0; s < total; ++s) {
    SubstreamRng r(spec.rng, s);
    const bool outside = s >= spec.low_stations + spec.high_stations;
    const double sd = (s < spec.low_stations) ? spec.sd_low : spec.sd_high;
    double lat = 30.5 + 9.0 * r.uniform();
    const double lon = -94.5 + 19.0 * r.uniform();
    if (outside) {
      lat += 15.0;
    }
    const double offset = spec.base_temperature + 2.0 * (r.uniform() - 0.5);
    const double phase = 2.0 * std::numbers::pi * r.uniform() / 12.0;

    std::snprintf(buf, sizeof buf, "SYN%05zu", s);
    const std::string id(buf);

    double noise = normal(r) * sd / std::sqrt(1.0 - spec.phi * spec.phi);
    for (std::int64_t t = first; t <= last; ++t) {
      if (t > first) {
        noise = spec.phi * noise + sd * normal(r);
      }
      const auto year = static_cast<int>(t / 12);
      const auto month = static_cast<int>(t % 12) + 1;
      const double years = static_cast<double>(t - first) / 12.0;
      const double value = offset +
                           spec.seasonal_amplitude * std::sin(2.0 * std::numbers::pi * month / 12.0 + phase) +
                           spec.trend_per_decade * years / 10.0 + noise;
      const bool missing = r.uniform() < spec.missing_fraction;
      if (missing) {
        std::snprintf(buf, sizeof buf, "%s,%.4f,%.4f,%d,%d,", id.c_str(), lat, lon, year, month);
      } else {
        std::snprintf(buf, sizeof buf, "%s,%.4f,%.4f,%d,%d,%.3f", id.c_str(), lat, lon, year, month, value);
      }
      out << buf << '\n';
    }
  }
}

}  // namespace maxwin
