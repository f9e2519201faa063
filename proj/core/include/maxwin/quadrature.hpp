#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace maxwin {

/// Value of a numerical integral with an absolute error estimate.
struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;
  std::size_t evaluations = 0;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  std::size_t max_evaluations = 4'000'000;
};

/// Writes the log of each integrand component at one abscissa into `out`.
/// -inf is a valid value (zero integrand); NaN is rejected.
using LogIntegrand = std::function<void(double, std::span<double>)>;

/// Integrals over (0, inf) of several integrands sharing one node set.
///
/// The callback is evaluated at u = ln x and must return ln(f(x) * x), i.e.
/// the log integrand with respect to u. Internally u = t - exp(-t), which gives
/// double-exponential decay at both ends, so integrable endpoint singularities
/// of the form x^{-alpha} (alpha < 1) and stretched-exponential tails need no
/// special casing. The t-window is extended until the integrand at its ends is
/// below e^{-50} of the peak; the trapezoid step is then halved until
/// successive estimates agree to `abs_tol`.
std::vector<QuadResult> integrate_half_line(std::size_t components, const LogIntegrand& log_integrand,
                                            const QuadOptions& options = {});

/// Search window for integrate_real_line: the integrand's mass is expected
/// around [lo, hi]; `scale` is the narrowest feature width.
struct RealLineWindow {
  double lo;
  double hi;
  double scale;
};

/// Integrals over the real line of smooth integrands that decay at least
/// exponentially in both directions; the callback returns ln f(x). The window
/// is scanned, trimmed to where the integrand exceeds e^{-50} of its peak,
/// extended while the ends are still above that level, then refined by step
/// halving.
std::vector<QuadResult> integrate_real_line(std::size_t components, const LogIntegrand& log_integrand,
                                            const RealLineWindow& window, const QuadOptions& options = {});

}  // namespace maxwin
