#include "maxwin/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxwin/errors.hpp"

namespace maxwin {

namespace {

constexpr double kNegligible = 50.0;  // log-distance below the peak treated as zero
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Log integrand in the integration variable t, one value per component.
using NodeFn = std::function<void(double, std::span<double>)>;

class Evaluator {
 public:
  Evaluator(std::size_t components, NodeFn fn) : fn_(std::move(fn)), buf_(components) {}

  std::span<const double> operator()(double t) {
    fn_(t, buf_);
    ++count_;
    for (double v : buf_) {
      if (std::isnan(v)) {
        throw QuadratureError("integrand evaluated to NaN", std::nan(""), HUGE_VAL);
      }
    }
    return buf_;
  }

  double max_at(double t) {
    auto v = (*this)(t);
    return *std::max_element(v.begin(), v.end());
  }

  std::size_t count() const { return count_; }

 private:
  NodeFn fn_;
  std::vector<double> buf_;
  std::size_t count_ = 0;
};

// Composite trapezoid on [lo, lo + n*h0], halving the step until successive
// estimates agree. Values are exp(log - shift) so tiny integrals keep precision.
std::vector<QuadResult> refine(Evaluator& eval, std::size_t components, double lo, double h0, std::size_t n,
                               double shift, const QuadOptions& opt) {
  std::vector<double> sum(components, 0.0);
  std::vector<double> edge(components, 0.0);
  auto accumulate = [&](double t, double weight, std::vector<double>& into) {
    auto v = eval(t);
    for (std::size_t d = 0; d < components; ++d) {
      into[d] += weight * std::exp(v[d] - shift);
    }
  };

  for (std::size_t i = 0; i <= n; ++i) {
    const bool end = (i == 0 || i == n);
    accumulate(lo + static_cast<double>(i) * h0, end ? 0.5 : 1.0, sum);
    if (end) {
      accumulate(lo + static_cast<double>(i) * h0, 1.0, edge);
    }
  }

  const double scale = std::exp(shift);
  std::vector<double> prev(components);
  std::vector<double> cur(components);
  for (std::size_t d = 0; d < components; ++d) {
    cur[d] = h0 * sum[d];
  }

  double h = h0;
  std::size_t intervals = n;
  for (int level = 1;; ++level) {
    prev = cur;
    h *= 0.5;
    for (std::size_t j = 0; j < intervals; ++j) {
      accumulate(lo + (2.0 * static_cast<double>(j) + 1.0) * h, 1.0, sum);
    }
    intervals *= 2;

    double worst = 0.0;
    for (std::size_t d = 0; d < components; ++d) {
      cur[d] = h * sum[d];
      worst = std::max(worst, std::fabs(cur[d] - prev[d]) * scale);
    }
    if (level >= 2 && worst <= opt.abs_tol) {
      std::vector<QuadResult> out(components);
      for (std::size_t d = 0; d < components; ++d) {
        out[d].value = cur[d] * scale;
        out[d].abs_err = (std::fabs(cur[d] - prev[d]) + h * edge[d]) * scale;
        out[d].evaluations = eval.count();
      }
      return out;
    }
    if (eval.count() + 2 * intervals > opt.max_evaluations) {
      throw QuadratureError("quadrature did not converge within the evaluation budget", cur[0] * scale, worst);
    }
  }
}

}  // namespace

std::vector<QuadResult> integrate_half_line(std::size_t components, const LogIntegrand& log_integrand,
                                            const QuadOptions& options) {
  // u = t - e^{-t}, du/dt = 1 + e^{-t}.
  Evaluator eval(components, [&](double t, std::span<double> out) {
    const double e = std::exp(-t);
    log_integrand(t - e, out);
    const double log_jac = std::log1p(e);
    for (double& v : out) {
      v += log_jac;
    }
  });

  constexpr double step = 0.5;
  constexpr double t_limit = 40.0;
  double peak = kNegInf;
  for (double t = -4.0; t <= 4.0; t += step) {
    peak = std::max(peak, eval.max_at(t));
  }
  double lo = -4.0;
  double hi = 4.0;
  for (double v = eval.max_at(lo); v > peak - kNegligible; v = eval.max_at(lo)) {
    peak = std::max(peak, v);
    lo -= step;
    if (lo < -t_limit) {
      throw QuadratureError("integrand does not decay as x -> 0", std::nan(""), HUGE_VAL);
    }
  }
  for (double v = eval.max_at(hi); v > peak - kNegligible; v = eval.max_at(hi)) {
    peak = std::max(peak, v);
    hi += step;
    if (hi > t_limit) {
      throw QuadratureError("integrand does not decay as x -> inf", std::nan(""), HUGE_VAL);
    }
  }
  while (hi - lo > 2.0 * step && eval.max_at(lo + step) <= peak - kNegligible) {
    lo += step;
  }
  while (hi - lo > 2.0 * step && eval.max_at(hi - step) <= peak - kNegligible) {
    hi -= step;
  }
  if (peak == kNegInf) {
    std::vector<QuadResult> zero(components);
    for (auto& z : zero) {
      z.evaluations = eval.count();
    }
    return zero;
  }
  const auto n = static_cast<std::size_t>(std::lround((hi - lo) / step));
  return refine(eval, components, lo, step, n, peak, options);
}

std::vector<QuadResult> integrate_real_line(std::size_t components, const LogIntegrand& log_integrand,
                                            const RealLineWindow& window, const QuadOptions& options) {
  if (!(window.scale > 0.0) || !(window.hi >= window.lo) || !std::isfinite(window.lo) ||
      !std::isfinite(window.hi)) {
    throw DomainError("integrate_real_line: invalid window");
  }
  Evaluator eval(components, log_integrand);

  const double step = window.scale / 4.0;
  const auto scan_n = static_cast<std::size_t>(std::ceil((window.hi - window.lo) / step));
  if (scan_n > options.max_evaluations) {
    throw QuadratureError("integration window too wide for its feature scale", std::nan(""), HUGE_VAL);
  }
  std::vector<double> scan(scan_n + 1);
  double peak = kNegInf;
  for (std::size_t i = 0; i <= scan_n; ++i) {
    scan[i] = eval.max_at(window.lo + static_cast<double>(i) * step);
    peak = std::max(peak, scan[i]);
  }
  if (peak == kNegInf) {
    std::vector<QuadResult> zero(components);
    for (auto& z : zero) {
      z.evaluations = eval.count();
    }
    return zero;
  }

  std::size_t first = 0;
  while (first < scan_n && scan[first] <= peak - kNegligible) {
    ++first;
  }
  std::size_t last = scan_n;
  while (last > first && scan[last] <= peak - kNegligible) {
    --last;
  }
  double lo = window.lo + (static_cast<double>(first) - 1.0) * step;
  double hi = window.lo + (static_cast<double>(last) + 1.0) * step;

  const std::size_t max_extend = options.max_evaluations / 4;
  std::size_t extended = 0;
  for (double v = eval.max_at(lo); v > peak - kNegligible; v = eval.max_at(lo)) {
    peak = std::max(peak, v);
    lo -= step;
    if (++extended > max_extend) {
      throw QuadratureError("integrand does not decay as x -> -inf", std::nan(""), HUGE_VAL);
    }
  }
  for (double v = eval.max_at(hi); v > peak - kNegligible; v = eval.max_at(hi)) {
    peak = std::max(peak, v);
    hi += step;
    if (++extended > max_extend) {
      throw QuadratureError("integrand does not decay as x -> +inf", std::nan(""), HUGE_VAL);
    }
  }

  const double h0 = 2.0 * step;
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h0));
  return refine(eval, components, lo, h0, std::max<std::size_t>(n, 2), peak, options);
}

}  // namespace maxwin
