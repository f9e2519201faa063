#pragma once

// Scalar special functions for the standard normal and Gumbel laws.
//
// Everything that can underflow is also offered in log space so that
// probabilities such as Phi(x)^n with n ~ 1e18, or upper tails of 1e-350,
// stay representable.

namespace maxwin {

/// Probability in [0, 1].
class UnitProb {
 public:
  explicit UnitProb(double value);
  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

/// Natural log of an upper-tail probability q in (0, 1].
class TailProb {
 public:
  explicit TailProb(double log_value);
  static TailProb from_probability(double q);
  double log_value() const noexcept { return log_value_; }

 private:
  double log_value_;
};

/// Phi(x). Relative error ~1e-15 on both tails (Cody's rational approximations).
UnitProb std_normal_cdf(double x);

/// ln Phi(x), finite for |x| < 1e170.
double log_std_normal_cdf(double x);

/// ln(1 - Phi(x)) = ln Phi(-x).
double log_std_normal_sf(double x);

/// ln phi(x), the log density.
double log_std_normal_pdf(double x);

/// Phi^{-1}(p) for 0 < p < 1.
double std_normal_quantile(UnitProb p);

/// x >= 0 with 1 - Phi(x) = q, computed from ln q without forming q.
/// Requires ln q <= ln(1/2).
double upper_tail_quantile(TailProb q);

/// exp(-exp(-x)).
UnitProb gumbel_cdf(double x);

}  // namespace maxwin
