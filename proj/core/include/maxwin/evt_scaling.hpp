#pragma once

#include <cstdint>
#include <optional>

namespace maxwin {

/// A real number or one of the two infinite endpoints. Degenerate scaling
/// constants (C = 0, C = +inf) and their kappa values are first-class.
class ExtendedReal {
 public:
  enum class Kind { kFinite, kPosInfinity, kNegInfinity };

  static ExtendedReal finite(double v);
  static ExtendedReal pos_infinity() { return ExtendedReal(Kind::kPosInfinity, 0.0); }
  static ExtendedReal neg_infinity() { return ExtendedReal(Kind::kNegInfinity, 0.0); }
  /// Maps IEEE +-inf onto the endpoint markers; rejects NaN.
  static ExtendedReal from_double(double v);

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::kFinite; }
  bool is_pos_infinity() const noexcept { return kind_ == Kind::kPosInfinity; }
  bool is_neg_infinity() const noexcept { return kind_ == Kind::kNegInfinity; }

  /// Finite value; throws DomainError on an endpoint.
  double value() const;
  /// Finite value or IEEE +-inf.
  double to_double() const noexcept;

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  ExtendedReal(Kind k, double v) : kind_(k), value_(v) {}
  Kind kind_;
  double value_;
};

/// One Gaussian group: effective sample size n >= 1 and standard deviation.
struct GroupSpec {
  double size;
  double sigma;

  void validate() const;
};

/// (C, sigma) of the critical law n1 ~ C n2^{sigma^2} (log n2)^{-(sigma^2-1)/2}.
struct ScalingLaw {
  ExtendedReal c;
  double sigma;

  ScalingLaw(ExtendedReal c_value, double sigma_value);
};

/// a_n, b_n of the Gaussian extreme-value theorem.
struct NormingConstants {
  double a;
  double b;
};

NormingConstants norming_constants(double n);
/// Same, from ln n (for sizes beyond double range). Requires ln n >= ln 2.
NormingConstants norming_constants_from_log(double log_n);

/// kappa(C, sigma) = ln(C/sigma)/sigma^2 + (1 - 1/sigma^2) ln(4 pi)/2,
/// with kappa(0) = -inf and kappa(inf) = +inf.
ExtendedReal kappa(const ScalingLaw& law);

/// f(n2) = n2^{sigma^2} (ln n2)^{-(sigma^2-1)/2}, kept in log space.
struct CriticalScale {
  double log_value;
  double value() const;  ///< may be +inf if f(n2) exceeds double range
};

CriticalScale critical_scale(double n2, double sigma);

struct CriticalN1 {
  /// floor(C f(n2)) when it fits in int64; nullopt marks "too large".
  std::optional<std::int64_t> floor_value;
  double real_value;      ///< may be +inf when only log_real_value is meaningful
  double log_real_value;
};

CriticalN1 critical_n1(double n2, double sigma, double c);

/// beta = n1 / f(n2).
double beta(double n1, double n2, double sigma);
double beta_from_log(double log_n1, double n2, double sigma);

/// (b_{n1} - sigma b_{n2}) / (sigma a_{n2}).
double centering_gap(double n1, double n2, double sigma);
double centering_gap_from_log(double log_n1, double n2, double sigma);

}  // namespace maxwin
