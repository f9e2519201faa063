#pragma once

#include <cstddef>
#include <vector>

#include "maxwin/evt_scaling.hpp"
#include "maxwin/quadrature.hpp"

namespace maxwin {

/// Limiting P(group 1 wins) under the critical law with constants (C, sigma):
///   int_0^inf exp(-y - e^{-kappa(C, sigma)} y^{1/sigma^2}) dy.
/// C = 0 and C = +inf return exactly 0 and 1 without quadrature.
QuadResult two_group_limit(const ScalingLaw& law, const QuadOptions& options = {});
QuadResult two_group_limit(double c, double sigma, const QuadOptions& options = {});

/// The same integral parameterized directly by kappa; requires sigma >= 1.
QuadResult two_group_limit_from_kappa(ExtendedReal kappa_value, double sigma, const QuadOptions& options = {});

/// One group of the multi-group limit. The baseline group has sigma = 1 and
/// C = 1 (so kappa = 0); every other group needs sigma > 1 and 0 < C < inf.
struct LimitGroup {
  ExtendedReal c;
  double sigma;
};

class LimitSpecK {
 public:
  /// Throws DomainError naming the violated invariant.
  LimitSpecK(std::vector<LimitGroup> groups, std::size_t baseline);
  /// Picks the unique group with sigma == 1 as the baseline.
  static LimitSpecK with_detected_baseline(std::vector<LimitGroup> groups);

  const std::vector<LimitGroup>& groups() const noexcept { return groups_; }
  std::size_t baseline() const noexcept { return baseline_; }
  std::size_t size() const noexcept { return groups_.size(); }
  /// kappa_k for each group (0 for the baseline).
  std::vector<double> kappas() const;
  /// True when two non-baseline groups share the same sigma.
  bool has_shared_sigma() const;

 private:
  std::vector<LimitGroup> groups_;
  std::size_t baseline_;
};

struct MultiLimitResult {
  std::vector<QuadResult> probabilities;
  std::vector<double> kappas;
  bool shared_sigma = false;
};

/// p_k = int_0^inf (e^{-kappa_k}/sigma_k^2) x^{1/sigma_k^2 - 1}
///              exp(-sum_j e^{-kappa_j} x^{1/sigma_j^2}) dx, for every k.
MultiLimitResult multi_group_limits(const LimitSpecK& spec, const QuadOptions& options = {.abs_tol = 1e-9});

/// Exact P(M1 > M2) for finite (possibly non-integer) sizes.
QuadResult finite_n_winner(const GroupSpec& g1, const GroupSpec& g2, const QuadOptions& options = {});

/// Exact P(group k attains the overall maximum); k is 0-based.
QuadResult finite_n_winner_multi(const std::vector<GroupSpec>& groups, std::size_t k,
                                 const QuadOptions& options = {});

/// C with two_group_limit(C, sigma) = p_target to within 1e-8, by bisection
/// on ln C over [-60, 60].
double solve_c_for_target(double p_target, double sigma);

}  // namespace maxwin
