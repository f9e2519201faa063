#include "maxwin/evt_scaling.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "maxwin/errors.hpp"

namespace maxwin {

namespace {

const double kLog4Pi = std::log(4.0 * std::numbers::pi);
const double kLog2 = std::numbers::ln2;

void require_sigma_at_least_one(double sigma, const char* op) {
  if (!(sigma >= 1.0) || !std::isfinite(sigma)) {
    throw DomainError(std::string(op) + ": sigma must be finite and >= 1");
  }
}

void require_n2(double n2, const char* op) {
  if (!(n2 >= 2.0) || !std::isfinite(n2)) {
    throw DomainError(std::string(op) + ": n2 must be finite and >= 2");
  }
}

}  // namespace

ExtendedReal ExtendedReal::finite(double v) {
  if (!std::isfinite(v)) {
    throw DomainError("ExtendedReal::finite: value is not finite");
  }
  return ExtendedReal(Kind::kFinite, v);
}

ExtendedReal ExtendedReal::from_double(double v) {
  if (std::isnan(v)) {
    throw DomainError("ExtendedReal: NaN is not an extended real");
  }
  if (std::isinf(v)) {
    return v > 0 ? pos_infinity() : neg_infinity();
  }
  return finite(v);
}

double ExtendedReal::value() const {
  if (kind_ != Kind::kFinite) {
    throw DomainError("ExtendedReal::value: endpoint has no finite value");
  }
  return value_;
}

double ExtendedReal::to_double() const noexcept {
  switch (kind_) {
    case Kind::kPosInfinity:
      return HUGE_VAL;
    case Kind::kNegInfinity:
      return -HUGE_VAL;
    case Kind::kFinite:
      break;
  }
  return value_;
}

void GroupSpec::validate() const {
  if (!(size >= 1.0) || !std::isfinite(size)) {
    throw DomainError("GroupSpec: size must be finite and >= 1");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("GroupSpec: sigma must be finite and > 0");
  }
}

ScalingLaw::ScalingLaw(ExtendedReal c_value, double sigma_value) : c(c_value), sigma(sigma_value) {
  if (c.is_neg_infinity() || (c.is_finite() && c.value() < 0.0)) {
    throw DomainError("ScalingLaw: C must lie in [0, +inf]");
  }
  if (!(sigma > 1.0) || !std::isfinite(sigma)) {
    throw DomainError("ScalingLaw: sigma must be finite and > 1");
  }
}

NormingConstants norming_constants(double n) {
  if (!(n >= 2.0) || !std::isfinite(n)) {
    throw DomainError("norming_constants: n must be finite and >= 2");
  }
  return norming_constants_from_log(std::log(n));
}

NormingConstants norming_constants_from_log(double log_n) {
  if (!(log_n >= kLog2) || !std::isfinite(log_n)) {
    throw DomainError("norming_constants: ln n must be finite and >= ln 2");
  }
  const double root = std::sqrt(2.0 * log_n);
  return {1.0 / root, root - (std::log(log_n) + kLog4Pi) / (2.0 * root)};
}

ExtendedReal kappa(const ScalingLaw& law) {
  if (law.c.is_pos_infinity()) {
    return ExtendedReal::pos_infinity();
  }
  const double c = law.c.value();
  if (c == 0.0) {
    return ExtendedReal::neg_infinity();
  }
  const double s2 = law.sigma * law.sigma;
  return ExtendedReal::finite(std::log(c / law.sigma) / s2 + 0.5 * (1.0 - 1.0 / s2) * kLog4Pi);
}

double CriticalScale::value() const { return std::exp(log_value); }

CriticalScale critical_scale(double n2, double sigma) {
  require_n2(n2, "critical_scale");
  require_sigma_at_least_one(sigma, "critical_scale");
  const double s2 = sigma * sigma;
  const double log_n2 = std::log(n2);
  return {s2 * log_n2 - 0.5 * (s2 - 1.0) * std::log(log_n2)};
}

CriticalN1 critical_n1(double n2, double sigma, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError("critical_n1: C must be finite and > 0");
  }
  const double log_real = std::log(c) + critical_scale(n2, sigma).log_value;
  const double real = std::exp(log_real);
  if (real < 1.0) {
    throw DomainError("critical_n1: empty group at this scale (C f(n2) < 1)");
  }
  CriticalN1 out{std::nullopt, real, log_real};
  // 2^63 is exactly representable; anything below it floors into int64.
  if (real < 9223372036854775808.0) {
    out.floor_value = static_cast<std::int64_t>(std::floor(real));
  }
  return out;
}

double beta(double n1, double n2, double sigma) {
  if (!(n1 >= 1.0) || !std::isfinite(n1)) {
    throw DomainError("beta: n1 must be finite and >= 1");
  }
  return beta_from_log(std::log(n1), n2, sigma);
}

double beta_from_log(double log_n1, double n2, double sigma) {
  if (!(log_n1 >= 0.0) || !std::isfinite(log_n1)) {
    throw DomainError("beta: ln n1 must be finite and >= 0");
  }
  return std::exp(log_n1 - critical_scale(n2, sigma).log_value);
}

double centering_gap(double n1, double n2, double sigma) {
  if (!(n1 >= 2.0) || !std::isfinite(n1)) {
    throw DomainError("centering_gap: n1 must be finite and >= 2");
  }
  return centering_gap_from_log(std::log(n1), n2, sigma);
}

double centering_gap_from_log(double log_n1, double n2, double sigma) {
  require_n2(n2, "centering_gap");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("centering_gap: sigma must be finite and > 0");
  }
  const NormingConstants g1 = norming_constants_from_log(log_n1);
  const NormingConstants g2 = norming_constants(n2);
  return (g1.b - sigma * g2.b) / (sigma * g2.a);
}

}  // namespace maxwin
