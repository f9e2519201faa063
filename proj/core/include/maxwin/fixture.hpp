#pragma once

#include <cstddef>
#include <iosfwd>

#include "maxwin/empirical.hpp"
#include "maxwin/rng.hpp"

namespace maxwin {

/// Synthetic monthly station records drawn from the model the empirical
/// pipeline assumes: seasonal cycle + linear trend + Gaussian AR(1) noise,
/// with two clusters of stations that differ only in innovation sd.
struct FixtureSpec {
  std::size_t low_stations = 12;
  std::size_t high_stations = 12;
  std::size_t outside_stations = 2;  ///< placed north of the default box
  double sd_low = 1.0;
  double sd_high = 1.5;
  double phi = 0.5;
  double trend_per_decade = 0.3;
  double seasonal_amplitude = 10.0;
  double base_temperature = 15.0;
  YearMonth start{1980, 1};
  YearMonth end{2025, 12};
  double missing_fraction = 0.01;
  RngStream rng{20260221, 0};
};

/// Writes the fixture in the station CSV layout (header included).
void write_fixture(std::ostream& out, const FixtureSpec& spec);

}  // namespace maxwin
