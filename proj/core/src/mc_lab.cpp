#include "maxwin/mc_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "maxwin/errors.hpp"
#include "maxwin/gaussian.hpp"
#include "maxwin/parallel.hpp"

namespace maxwin {

namespace {

constexpr double kLogHalf = -0.69314718055994530941723212145818;

void require_unit_open(double u, const char* op) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError(std::string(op) + ": u must lie strictly inside (0, 1)");
  }
}

void require_trials(std::uint64_t trials) {
  if (trials == 0) {
    throw DomainError("Monte Carlo: trials must be >= 1");
  }
}

std::size_t argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < v.size(); ++j) {
    if (v[j] > v[best]) {
      best = j;
    }
  }
  return best;
}

}  // namespace

McEstimate McEstimate::from_counts(std::uint64_t successes, std::uint64_t trials) {
  require_trials(trials);
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  return {p, trials, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), successes};
}

double sample_group_max(double n, double sigma, double u) {
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw DomainError("sample_group_max: n must be finite and >= 1");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("sample_group_max: sigma must be finite and > 0");
  }
  require_unit_open(u, "sample_group_max");
  const double log_p = std::log(u) / n;           // ln u^{1/n}
  const double log_q = std::log(-std::expm1(log_p));  // ln(1 - u^{1/n})
  if (log_q <= kLogHalf) {
    return sigma * upper_tail_quantile(TailProb(log_q));
  }
  return sigma * std_normal_quantile(UnitProb(std::exp(log_p)));
}

double sample_gumbel(double u) {
  require_unit_open(u, "sample_gumbel");
  return -std::log(-std::log(u));
}

McEstimate mc_two_group(const GroupSpec& g1, const GroupSpec& g2, std::uint64_t trials, const RngStream& rng,
                        unsigned threads) {
  g1.validate();
  g2.validate();
  require_trials(trials);
  auto counts = parallel_count(trials, 1, threads, [&](std::uint64_t begin, std::uint64_t end, auto out) {
    for (std::uint64_t t = begin; t < end; ++t) {
      SubstreamRng r(rng, t);
      const double m1 = sample_group_max(g1.size, g1.sigma, r.uniform());
      const double m2 = sample_group_max(g2.size, g2.sigma, r.uniform());
      out[0] += m1 > m2 ? 1 : 0;
    }
  });
  return McEstimate::from_counts(counts[0], trials);
}

std::vector<McEstimate> mc_multi(const std::vector<GroupSpec>& groups, std::uint64_t trials, const RngStream& rng,
                                 unsigned threads) {
  if (groups.size() < 2) {
    throw DomainError("mc_multi: need at least two groups");
  }
  for (const auto& g : groups) {
    g.validate();
  }
  require_trials(trials);
  const std::size_t K = groups.size();
  auto counts = parallel_count(trials, K, threads, [&](std::uint64_t begin, std::uint64_t end, auto out) {
    std::vector<double> maxima(K);
    for (std::uint64_t t = begin; t < end; ++t) {
      SubstreamRng r(rng, t);
      for (std::size_t k = 0; k < K; ++k) {
        maxima[k] = sample_group_max(groups[k].size, groups[k].sigma, r.uniform());
      }
      ++out[argmax_lowest(maxima)];
    }
  });
  std::vector<McEstimate> out;
  out.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    out.push_back(McEstimate::from_counts(counts[k], trials));
  }
  return out;
}

std::vector<ArgmaxIdentityRow> mc_argmax_identity(const std::vector<GroupSpec>& groups, std::uint64_t trials,
                                                  const RngStream& rng, unsigned threads) {
  if (groups.size() < 2) {
    throw DomainError("mc_argmax_identity: need at least two groups");
  }
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) {
    g.validate();
    if (g.size != std::floor(g.size)) {
      throw DomainError("mc_argmax_identity: group sizes must be integers");
    }
    if (g.size > 1000.0) {
      throw DomainError("mc_argmax_identity: group sizes above 1000 are not simulated per variable");
    }
    sizes.push_back(static_cast<std::size_t>(g.size));
  }
  require_trials(trials);
  const std::size_t K = groups.size();

  // Slots [0, K): first element of group k is the overall argmax.
  // Slots [K, 2K): group k holds the overall maximum.
  auto counts = parallel_count(trials, 2 * K, threads, [&](std::uint64_t begin, std::uint64_t end, auto out) {
    for (std::uint64_t t = begin; t < end; ++t) {
      SubstreamRng r(rng, t);
      double best = -std::numeric_limits<double>::infinity();
      std::size_t best_group = 0;
      std::size_t best_index = 0;
      for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < sizes[k]; ++i) {
          const double x = groups[k].sigma * std_normal_quantile(UnitProb(r.uniform()));
          if (x > best) {
            best = x;
            best_group = k;
            best_index = i;
          }
        }
      }
      ++out[K + best_group];
      if (best_index == 0) {
        ++out[best_group];
      }
    }
  });

  const double T = static_cast<double>(trials);
  std::vector<ArgmaxIdentityRow> rows;
  rows.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double n = static_cast<double>(sizes[k]);
    const double pa = static_cast<double>(counts[k]) / T;
    const double pb = static_cast<double>(counts[K + k]) / T;
    // Per-trial difference n*1[A] - 1[B] with A inside B takes values n-1, -1, 0.
    const double mean = n * pa - pb;
    const double second = (n - 1.0) * (n - 1.0) * pa + (pb - pa);
    const double var = std::max(0.0, second - mean * mean);
    rows.push_back({n * pa, pb, n * std::sqrt(pa * (1.0 - pa) / T), std::sqrt(pb * (1.0 - pb) / T),
                    std::sqrt(var / T)});
  }
  return rows;
}

McEstimate mc_limit_pair(double c, double sigma, std::uint64_t trials, const RngStream& rng, unsigned threads) {
  const ExtendedReal k = kappa(ScalingLaw(ExtendedReal::from_double(c), sigma));
  if (!k.is_finite()) {
    throw DomainError("mc_limit_pair: kappa must be finite (0 < C < inf)");
  }
  require_trials(trials);
  const double kv = k.value();
  const double s2 = sigma * sigma;
  auto counts = parallel_count(trials, 1, threads, [&](std::uint64_t begin, std::uint64_t end, auto out) {
    for (std::uint64_t t = begin; t < end; ++t) {
      SubstreamRng r(rng, t);
      const double l1 = sample_gumbel(r.uniform());
      const double l2 = sample_gumbel(r.uniform());
      out[0] += l1 > s2 * (l2 - kv) ? 1 : 0;
    }
  });
  return McEstimate::from_counts(counts[0], trials);
}

std::vector<McEstimate> mc_limit_multi(const LimitSpecK& spec, std::uint64_t trials, const RngStream& rng,
                                       unsigned threads) {
  require_trials(trials);
  const std::size_t K = spec.size();
  const std::vector<double> kappas = spec.kappas();
  auto counts = parallel_count(trials, K, threads, [&](std::uint64_t begin, std::uint64_t end, auto out) {
    std::vector<double> z(K);
    for (std::uint64_t t = begin; t < end; ++t) {
      SubstreamRng r(rng, t);
      for (std::size_t k = 0; k < K; ++k) {
        const double s = spec.groups()[k].sigma;
        z[k] = s * s * (sample_gumbel(r.uniform()) - kappas[k]);
      }
      ++out[argmax_lowest(z)];
    }
  });
  std::vector<McEstimate> out;
  for (std::size_t k = 0; k < K; ++k) {
    out.push_back(McEstimate::from_counts(counts[k], trials));
  }
  return out;
}

std::vector<StudyRow> convergence_study(const StudyConfig& config) {
  if (config.c_values.empty() || config.n2_grid.empty()) {
    throw DomainError("convergence_study: C and n2 grids must be nonempty");
  }
  std::vector<StudyRow> rows;
  std::uint64_t row_index = 0;
  for (const double c : config.c_values) {
    const QuadResult limit = two_group_limit(c, config.sigma);
    for (const double n2 : config.n2_grid) {
      const CriticalN1 n1 = critical_n1(n2, config.sigma, c);
      StudyRow row;
      row.n2 = n2;
      row.n1_floor = n1.floor_value;
      row.n1 = n1.floor_value ? static_cast<double>(*n1.floor_value) : n1.real_value;
      if (!std::isfinite(row.n1)) {
        throw DomainError("convergence_study: n1 exceeds the double range at n2 = " + std::to_string(n2));
      }
      row.sigma = config.sigma;
      row.c = c;
      const GroupSpec g1{row.n1, 1.0};
      const GroupSpec g2{n2, config.sigma};
      const McEstimate est =
          mc_two_group(g1, g2, config.trials, config.rng.with_stream(config.rng.stream_id + row_index), config.threads);
      row.p_hat = est.p_hat;
      row.std_err = est.std_err;
      row.p_limit = limit.value;
      row.p_limit_err = limit.abs_err;
      if (config.exact) {
        row.p_exact = finite_n_winner(g1, g2).value;
      }
      rows.push_back(row);
      ++row_index;
    }
  }
  return rows;
}

}  // namespace maxwin
