#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "maxwin/evt_scaling.hpp"
#include "maxwin/limit_engine.hpp"
#include "maxwin/rng.hpp"

namespace maxwin {

/// Monte Carlo frequency with its binomial standard error.
struct McEstimate {
  double p_hat = 0.0;
  std::uint64_t trials = 0;
  double std_err = 0.0;
  std::uint64_t successes = 0;

  static McEstimate from_counts(std::uint64_t successes, std::uint64_t trials);
};

/// sigma * Phi^{-1}(u^{1/n}), distributed as the maximum of n iid N(0, sigma^2)
/// (n may be non-integer). The tail 1 - u^{1/n} is formed as -expm1(ln u / n),
/// so n far beyond 1e16 stays exact.
double sample_group_max(double n, double sigma, double u);

/// -ln(-ln u), a standard Gumbel variate.
double sample_gumbel(double u);

/// P(M1 > M2) by simulation. Trial t uses substream t of `rng`; the result
/// is identical for any `threads` (0 = all hardware threads).
McEstimate mc_two_group(const GroupSpec& g1, const GroupSpec& g2, std::uint64_t trials, const RngStream& rng,
                        unsigned threads = 0);

/// Winning frequency of every group; ties go to the lowest index.
std::vector<McEstimate> mc_multi(const std::vector<GroupSpec>& groups, std::uint64_t trials, const RngStream& rng,
                                 unsigned threads = 0);

struct ArgmaxIdentityRow {
  double lhs;          ///< n_k * P(overall argmax is the first element of group k)
  double rhs;          ///< P(group k wins)
  double lhs_se;
  double rhs_se;
  double combined_se;  ///< standard error of the paired difference lhs - rhs
};

/// Simulates every individual variable (integer sizes up to 1000) and
/// estimates both sides of n_k P(argmax = X^{(k)}_1) = P(group k wins).
std::vector<ArgmaxIdentityRow> mc_argmax_identity(const std::vector<GroupSpec>& groups, std::uint64_t trials,
                                                  const RngStream& rng, unsigned threads = 0);

/// Frequency of Lambda_1 > sigma^2 (Lambda_2 - kappa(C, sigma)) over Gumbel pairs.
McEstimate mc_limit_pair(double c, double sigma, std::uint64_t trials, const RngStream& rng, unsigned threads = 0);

/// Winning frequencies of Z_k = sigma_k^2 (Lambda_k - kappa_k) for a multi-group limit.
std::vector<McEstimate> mc_limit_multi(const LimitSpecK& spec, std::uint64_t trials, const RngStream& rng,
                                       unsigned threads = 0);

struct StudyRow {
  double n2 = 0.0;
  double n1 = 0.0;                        ///< floor(C f(n2)), or C f(n2) when the floor overflows int64
  std::optional<std::int64_t> n1_floor;
  double sigma = 0.0;
  double c = 0.0;
  double p_hat = 0.0;
  double std_err = 0.0;
  double p_limit = 0.0;
  double p_limit_err = 0.0;
  std::optional<double> p_exact;
};

struct StudyConfig {
  double sigma = 1.5;
  std::vector<double> c_values;
  std::vector<double> n2_grid;
  std::uint64_t trials = 100'000;
  RngStream rng;
  bool exact = false;
  unsigned threads = 0;
};

/// One row per (C, n2) in that nesting order; row r draws from stream
/// rng.stream_id + r.
std::vector<StudyRow> convergence_study(const StudyConfig& config);

}  // namespace maxwin
