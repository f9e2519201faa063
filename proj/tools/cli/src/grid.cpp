#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>

#include "maxwin_cli/cli.hpp"

namespace maxwin::cli {

namespace {

constexpr std::size_t kDefaultGridCount = 12;

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || std::isnan(v)) {
    throw UsageError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view text) {
  text = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || v == 0) {
    throw UsageError("grid count must be a positive integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  if (text.find(':') != std::string_view::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    const double lo = parse_number(text.substr(0, c1));
    const double hi = parse_number(text.substr(c1 + 1, c2 == std::string_view::npos ? text.npos : c2 - c1 - 1));
    const std::size_t count =
        c2 == std::string_view::npos ? kDefaultGridCount : parse_count(text.substr(c2 + 1));
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
      throw UsageError("log-spaced grid needs 0 < lo <= hi < inf: '" + std::string(text) + "'");
    }
    if (count == 1 || lo == hi) {
      return {lo};
    }
    std::vector<double> out(count);
    const double a = std::log10(lo);
    const double step = (std::log10(hi) - a) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = std::pow(10.0, a + step * static_cast<double>(i));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
  }
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number(text.substr(start, comma == text.npos ? text.npos : comma - start)));
    if (comma == text.npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_size_grid(std::string_view text) {
  std::vector<double> out;
  for (const double v : parse_grid(text)) {
    if (!(v >= 1.0) || !std::isfinite(v) || v > 9.0e15) {
      throw UsageError("sample sizes must lie in [1, 9e15]: '" + std::string(text) + "'");
    }
    const double r = std::round(v);
    if (std::find(out.begin(), out.end(), r) == out.end()) {
      out.push_back(r);
    }
  }
  return out;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("MAXWIN_SEED");
  if (env == nullptr || *env == '\0') {
    return 20260221;
  }
  const std::string_view s(env);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("MAXWIN_SEED is not an unsigned 64-bit integer: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace maxwin::cli
