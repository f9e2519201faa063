#include "maxwin/gaussian.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "maxwin/errors.hpp"

namespace maxwin {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
constexpr double kSqrt32 = 5.656854249492380195206754896838;
constexpr double kLogHalf = -0.69314718055994530941723212145818;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(what) + ": argument must be finite");
  }
}

// Both tails of the standard normal, in linear and log form.
struct NormalTails {
  double lower;
  double upper;
  double log_lower;
  double log_upper;
};

// W. J. Cody, "Rational Chebyshev approximations for the error function",
// Math. Comp. 23 (1969), in the arrangement used by R's pnorm_both. The
// exponential factor is split as exp(-xs^2/2) * exp(-del/2) with xs rounded to
// 1/16 so the product keeps full relative precision deep in the tails.
NormalTails cody_tails(double x) {
  static constexpr std::array<double, 5> a = {
      2.2352520354606839287, 161.02823106855587881, 1067.6894854603709582,
      18154.981253343561249, 0.065682337918207449113};
  static constexpr std::array<double, 4> b = {
      47.20258190468824187, 976.09855173777669322, 10260.932208618978205,
      45507.789335026729956};
  static constexpr std::array<double, 9> c = {
      0.39894151208813466764, 8.8831497943883759412, 93.506656132177855979,
      597.27027639480026226,  2494.5375852903726711, 6848.1904505362823326,
      11602.651437647350124,  9842.7148383839780218, 1.0765576773720192317e-8};
  static constexpr std::array<double, 8> d = {
      22.266688044328115691, 235.38790178262499861, 1519.377599407554805,
      6485.558298266760755,  18615.571640885098091, 34900.952721145977266,
      38912.003286093271411, 19685.429676859990727};
  static constexpr std::array<double, 6> p = {
      0.21589853405795699,     0.1274011611602473639,  0.022235277870649807,
      0.001421619193227893466, 2.9112874951168792e-5, 0.02307344176494017303};
  static constexpr std::array<double, 5> q = {
      1.28426009614491121, 0.468238212480865118, 0.0659881378689285515,
      0.00378239633202758244, 7.29751555083966205e-5};

  const double y = std::fabs(x);
  NormalTails t{};

  if (y <= 0.67448975) {
    double xnum = 0.0;
    double xden = 0.0;
    if (y > 0.5 * std::numeric_limits<double>::epsilon()) {
      const double xsq = x * x;
      xnum = a[4] * xsq;
      xden = xsq;
      for (int i = 0; i < 3; ++i) {
        xnum = (xnum + a[i]) * xsq;
        xden = (xden + b[i]) * xsq;
      }
    }
    const double temp = x * (xnum + a[3]) / (xden + b[3]);
    t.lower = 0.5 + temp;
    t.upper = 0.5 - temp;
    t.log_lower = std::log(t.lower);
    t.log_upper = std::log(t.upper);
    return t;
  }

  double ratio = 0.0;
  if (y <= kSqrt32) {
    double xnum = c[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + c[i]) * y;
      xden = (xden + d[i]) * y;
    }
    ratio = (xnum + c[7]) / (xden + d[7]);
  } else if (y < 1e170) {
    const double xsq = 1.0 / (x * x);
    double xnum = p[5] * xsq;
    double xden = xsq;
    for (int i = 0; i < 4; ++i) {
      xnum = (xnum + p[i]) * xsq;
      xden = (xden + q[i]) * xsq;
    }
    double temp = xsq * (xnum + p[4]) / (xden + q[4]);
    ratio = (kInvSqrt2Pi - temp) / y;
  } else {
    const double inf = std::numeric_limits<double>::infinity();
    t = x > 0 ? NormalTails{1.0, 0.0, 0.0, -inf} : NormalTails{0.0, 1.0, -inf, 0.0};
    return t;
  }

  const double xs = std::trunc(y * 16.0) / 16.0;
  const double del = (y - xs) * (y + xs);
  const double log_small = -xs * xs * 0.5 - del * 0.5 + std::log(ratio);
  const double small = std::exp(-xs * xs * 0.5) * std::exp(-del * 0.5) * ratio;
  const double log_big = std::log1p(-small);
  const double big = 1.0 - small;

  if (x > 0) {
    t = {big, small, log_big, log_small};
  } else {
    t = {small, big, log_small, log_big};
  }
  return t;
}

// AS 241 (Wichura 1988), PPND16. Central region |p - 1/2| <= 0.425.
double as241_central(double q) {
  const double r = 0.180625 - q * q;
  const double num =
      (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
            6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
          1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
        1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
  const double den =
      (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
            3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
          5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
        4.2313330701600911252e+1) * r + 1.0);
  return q * num / den;
}

// AS 241 tail region; r = sqrt(-ln q) with q the tail mass. Returns the
// positive deviate, valid for r up to about 27.
double as241_tail(double r) {
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    return num / den;
  }
  r -= 5.0;
  const double num =
      (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
            1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
          2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
        5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
  const double den =
      (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
            1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
          1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
        5.99832206555887937690e-1) * r + 1.0);
  return num / den;
}

// Starting point beyond the AS 241 range: solve the Mills-ratio relation
// x^2/2 + ln x + ln sqrt(2 pi) = -ln q by fixed-point iteration.
double asymptotic_tail_guess(double neg_log_q) {
  double x = std::sqrt(2.0 * neg_log_q);
  for (int i = 0; i < 4; ++i) {
    x = std::sqrt(2.0 * (neg_log_q - std::log(x) - kLogSqrt2Pi));
  }
  return x;
}

}  // namespace

UnitProb::UnitProb(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError("probability must lie in [0, 1]");
  }
}

TailProb::TailProb(double log_value) : log_value_(log_value) {
  if (!(log_value <= 0.0) || std::isinf(log_value)) {
    throw DomainError("log tail probability must be finite and <= 0");
  }
}

TailProb TailProb::from_probability(double q) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw DomainError("tail probability must lie in (0, 1]");
  }
  return TailProb(std::log(q));
}

UnitProb std_normal_cdf(double x) {
  require_finite(x, "std_normal_cdf");
  return UnitProb(cody_tails(x).lower);
}

double log_std_normal_cdf(double x) {
  require_finite(x, "log_std_normal_cdf");
  return cody_tails(x).log_lower;
}

double log_std_normal_sf(double x) {
  require_finite(x, "log_std_normal_sf");
  return cody_tails(x).log_upper;
}

double log_std_normal_pdf(double x) {
  require_finite(x, "log_std_normal_pdf");
  return -0.5 * x * x - kLogSqrt2Pi;
}

double std_normal_quantile(UnitProb prob) {
  const double p = prob.value();
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("std_normal_quantile: p must lie strictly inside (0, 1)");
  }
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    double x = as241_central(q);
    for (int i = 0; i < 2; ++i) {
      const NormalTails t = cody_tails(x);
      const double resid = x <= 0 ? t.lower - p : (1.0 - p) - t.upper;
      x -= resid / std::exp(log_std_normal_pdf(x));
    }
    return x;
  }
  if (p < 0.5) {
    return -upper_tail_quantile(TailProb(std::log(p)));
  }
  return upper_tail_quantile(TailProb(std::log1p(-p)));
}

double upper_tail_quantile(TailProb tail) {
  const double log_q = tail.log_value();
  if (log_q > kLogHalf) {
    throw DomainError("upper_tail_quantile: requires ln q <= ln(1/2); use std_normal_quantile");
  }
  if (log_q == kLogHalf) {
    return 0.0;
  }

  double x;
  const double q = std::exp(log_q);
  if (q > 0.075) {
    x = -as241_central(q - 0.5);
  } else {
    const double r = std::sqrt(-log_q);
    x = r <= 27.0 ? as241_tail(r) : asymptotic_tail_guess(-log_q);
  }

  // Newton on g(x) = ln(1 - Phi(x)) - ln q, g'(x) = -phi(x) / (1 - Phi(x)).
  for (int iter = 0; iter < 8; ++iter) {
    const double log_sf = cody_tails(x).log_upper;
    const double step = (log_sf - log_q) * std::exp(log_sf - log_std_normal_pdf(x));
    x += step;
    if (iter >= 1 && std::fabs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(x)) {
      break;
    }
  }
  return x < 0.0 ? 0.0 : x;
}

UnitProb gumbel_cdf(double x) {
  require_finite(x, "gumbel_cdf");
  return UnitProb(std::exp(-std::exp(-x)));
}

}  // namespace maxwin
