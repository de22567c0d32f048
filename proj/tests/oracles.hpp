// Test-only oracles, kept independent of the library's implementation paths:
// a quadrature-based Student-t CDF, a permutation-mask rank-sum enumerator
// with O(n^2) counting midranks, and a brute-force symmetric-equilibrium
// check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "cyclescope/game_model.hpp"

namespace oracles {

inline double t_density(double x, double dof) {
  const double log_c = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                       0.5 * std::log(dof * std::acos(-1.0));
  return std::exp(log_c - 0.5 * (dof + 1.0) * std::log1p(x * x / dof));
}

// Student-t CDF by composite Simpson integration of the density over [0, |t|].
inline double t_cdf_quadrature(double t, double dof) {
  const double upper = std::fabs(t);
  const int intervals = 40000;  // even
  const double h = upper / intervals;
  double acc = t_density(0.0, dof) + t_density(upper, dof);
  for (int i = 1; i < intervals; ++i) {
    acc += t_density(i * h, dof) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  const double half_mass = acc * h / 3.0;
  return t >= 0.0 ? 0.5 + half_mass : 0.5 - half_mass;
}

inline double t_two_sided_p_quadrature(double t, double dof) {
  return 2.0 * (1.0 - t_cdf_quadrature(std::fabs(t), dof));
}

// Midranks by pairwise counting: rank_i = #{v_j < v_i} + (#{v_j == v_i}+1)/2.
inline std::vector<double> counting_midranks(const std::vector<double>& v) {
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      less += v[j] < v[i];
      equal += v[j] == v[i];
    }
    ranks[i] = static_cast<double>(less) + 0.5 * static_cast<double>(equal + 1);
  }
  return ranks;
}

// Exact two-sided rank-sum p by enumerating selection masks with
// std::prev_permutation.
inline double rank_sum_exact_p_oracle(const std::vector<double>& a,
                                      const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<double> ranks = counting_midranks(pooled);
  double w_obs = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w_obs += ranks[i];

  std::vector<int> mask(pooled.size(), 0);
  std::fill(mask.begin(), mask.begin() + a.size(), 1);
  std::sort(mask.begin(), mask.end(), std::greater<int>());
  std::uint64_t total = 0, c_le = 0, c_ge = 0;
  do {
    double w = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) w += ranks[i];
    }
    ++total;
    if (w <= w_obs) ++c_le;
    if (w >= w_obs) ++c_ge;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return std::min(1.0, 2.0 * static_cast<double>(std::min(c_le, c_ge)) /
                           static_cast<double>(total));
}

// Symmetric-equilibrium condition checked directly from the definition.
inline bool is_symmetric_equilibrium(const cyclescope::PayoffMatrix& m,
                                     const cyclescope::MixedProfile& sigma,
                                     double tol = 1e-9) {
  const auto u = cyclescope::expected_payoffs(m, sigma);
  double v = 0.0;
  for (int i = 0; i < 4; ++i) v += sigma[i] * u[i];
  return std::all_of(u.begin(), u.end(), [&](double ui) { return ui <= v + tol; });
}

}  // namespace oracles
