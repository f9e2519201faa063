#include "maxwin/limit_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "maxwin/errors.hpp"
#include "maxwin/gaussian.hpp"

namespace maxwin {

QuadResult two_group_limit(const ScalingLaw& law, const QuadOptions& options) {
  return two_group_limit_from_kappa(kappa(law), law.sigma, options);
}

QuadResult two_group_limit(double c, double sigma, const QuadOptions& options) {
  return two_group_limit(ScalingLaw(ExtendedReal::from_double(c), sigma), options);
}

QuadResult two_group_limit_from_kappa(ExtendedReal kappa_value, double sigma, const QuadOptions& options) {
  if (!(sigma >= 1.0) || !std::isfinite(sigma)) {
    throw DomainError("two_group_limit: sigma must be finite and >= 1");
  }
  if (kappa_value.is_pos_infinity()) {
    return {1.0, 0.0, 0};
  }
  if (kappa_value.is_neg_infinity()) {
    return {0.0, 0.0, 0};
  }
  const double k = kappa_value.value();
  const double inv_s2 = 1.0 / (sigma * sigma);
  // y = e^u: integrand e^u exp(-e^u - e^{-kappa} e^{u/sigma^2}).
  auto log_f = [=](double u, std::span<double> out) {
    out[0] = u - std::exp(u) - std::exp(u * inv_s2 - k);
  };
  return integrate_half_line(1, log_f, options).front();
}

LimitSpecK::LimitSpecK(std::vector<LimitGroup> groups, std::size_t baseline)
    : groups_(std::move(groups)), baseline_(baseline) {
  if (groups_.size() < 2) {
    throw DomainError("LimitSpecK: need at least two groups");
  }
  if (baseline_ >= groups_.size()) {
    throw DomainError("LimitSpecK: baseline index out of range");
  }
  const LimitGroup& base = groups_[baseline_];
  if (base.sigma != 1.0 || !base.c.is_finite() || base.c.value() != 1.0) {
    throw DomainError("LimitSpecK: baseline group must have sigma = 1 and C = 1");
  }
  for (std::size_t k = 0; k < groups_.size(); ++k) {
    if (k == baseline_) {
      continue;
    }
    const LimitGroup& g = groups_[k];
    if (!(g.sigma > 1.0) || !std::isfinite(g.sigma)) {
      throw DomainError("LimitSpecK: group " + std::to_string(k + 1) + " must have sigma > 1");
    }
    if (!g.c.is_finite() || !(g.c.value() > 0.0)) {
      throw DomainError("LimitSpecK: group " + std::to_string(k + 1) +
                        " has a degenerate C (kappa not finite); multi-group limits need 0 < C < inf");
    }
  }
}

LimitSpecK LimitSpecK::with_detected_baseline(std::vector<LimitGroup> groups) {
  std::size_t baseline = groups.size();
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (groups[k].sigma == 1.0) {
      if (baseline != groups.size()) {
        throw DomainError("LimitSpecK: more than one group has sigma = 1");
      }
      baseline = k;
    }
  }
  if (baseline == groups.size()) {
    throw DomainError("LimitSpecK: no baseline group with sigma = 1");
  }
  return LimitSpecK(std::move(groups), baseline);
}

std::vector<double> LimitSpecK::kappas() const {
  std::vector<double> out(groups_.size(), 0.0);
  for (std::size_t k = 0; k < groups_.size(); ++k) {
    if (k != baseline_) {
      out[k] = kappa(ScalingLaw(groups_[k].c, groups_[k].sigma)).value();
    }
  }
  return out;
}

bool LimitSpecK::has_shared_sigma() const {
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    for (std::size_t j = i + 1; j < groups_.size(); ++j) {
      if (i != baseline_ && j != baseline_ && groups_[i].sigma == groups_[j].sigma) {
        return true;
      }
    }
  }
  return false;
}

MultiLimitResult multi_group_limits(const LimitSpecK& spec, const QuadOptions& options) {
  const std::size_t K = spec.size();
  MultiLimitResult result;
  result.kappas = spec.kappas();
  result.shared_sigma = spec.has_shared_sigma();

  std::vector<double> inv_s2(K);
  std::vector<double> log_coef(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double s = spec.groups()[k].sigma;
    inv_s2[k] = 1.0 / (s * s);
    log_coef[k] = -result.kappas[k] - 2.0 * std::log(s);
  }
  // x = e^u: component k is (e^{-kappa_k}/sigma_k^2) e^{u/sigma_k^2} exp(-S(u)).
  auto log_f = [&](double u, std::span<double> out) {
    double total = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      total += std::exp(u * inv_s2[j] - result.kappas[j]);
    }
    for (std::size_t k = 0; k < K; ++k) {
      out[k] = log_coef[k] + u * inv_s2[k] - total;
    }
  };
  result.probabilities = integrate_half_line(K, log_f, options);
  return result;
}

QuadResult finite_n_winner(const GroupSpec& g1, const GroupSpec& g2, const QuadOptions& options) {
  return finite_n_winner_multi({g1, g2}, 0, options);
}

QuadResult finite_n_winner_multi(const std::vector<GroupSpec>& groups, std::size_t k, const QuadOptions& options) {
  if (groups.size() < 2) {
    throw DomainError("finite_n_winner: need at least two groups");
  }
  if (k >= groups.size()) {
    throw DomainError("finite_n_winner: group index out of range");
  }
  for (const auto& g : groups) {
    g.validate();
  }

  // Center and width of each group's maximum; tiny groups fall back to (0, sigma).
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double min_scale = lo;
  double max_scale = 0.0;
  for (const auto& g : groups) {
    double center = 0.0;
    double scale = g.sigma;
    if (g.size >= 2.0) {
      const NormingConstants nc = norming_constants(g.size);
      center = g.sigma * nc.b;
      scale = g.sigma * nc.a;
    }
    lo = std::min(lo, center);
    hi = std::max(hi, center);
    min_scale = std::min(min_scale, scale);
    max_scale = std::max(max_scale, scale);
  }
  const RealLineWindow window{lo - 10.0 * max_scale, hi + 50.0 * max_scale, min_scale};

  const GroupSpec& target = groups[k];
  const double log_lead = std::log(target.size / target.sigma);
  auto log_f = [&](double x, std::span<double> out) {
    double acc = log_lead + log_std_normal_pdf(x / target.sigma);
    for (std::size_t j = 0; j < groups.size(); ++j) {
      const double power = (j == k) ? groups[j].size - 1.0 : groups[j].size;
      if (power != 0.0) {
        acc += power * log_std_normal_cdf(x / groups[j].sigma);
      }
    }
    out[0] = acc;
  };
  return integrate_real_line(1, log_f, window, options).front();
}

double solve_c_for_target(double p_target, double sigma) {
  if (!(p_target > 0.0 && p_target < 1.0)) {
    throw DomainError("solve_c_for_target: target must lie strictly inside (0, 1)");
  }
  if (!(sigma > 1.0) || !std::isfinite(sigma)) {
    throw DomainError("solve_c_for_target: sigma must be finite and > 1");
  }
  const QuadOptions opts{.abs_tol = 1e-12};
  auto excess = [&](double log_c) { return two_group_limit(std::exp(log_c), sigma, opts).value - p_target; };

  double lo = -60.0;
  double hi = 60.0;
  if (excess(lo) > 0.0 || excess(hi) < 0.0) {
    throw DomainError("solve_c_for_target: target not bracketed for ln C in [-60, 60]");
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double log_c = 0.5 * (lo + hi);
  if (std::fabs(excess(log_c)) > 1e-8) {
    throw DomainError("solve_c_for_target: bisection did not reach 1e-8 accuracy");
  }
  return std::exp(log_c);
}

}  // namespace maxwin
