#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace cyclescope::stats {

// Two-sided test outcome. `n2` is 0 for one-sample tests.
struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

// Significance marks, strict thresholds p < {0.2, 0.1, 0.05, 0.01}.
enum class Mark { none, dot, star, star2, star3 };

Mark stars(double p);
std::string_view mark_text(Mark m);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Standard normal CDF.
double normal_cdf(double z);

// Student-t CDF with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

// One-sample t-test of mean == mu0. Throws std::invalid_argument for n < 2
// and std::domain_error for zero sample variance.
TestResult one_sample_t(std::span<const double> samples, double mu0);

// Pooled-variance two-sample t-test of equal means, n1 + n2 - 2 dof.
// Degenerate pools (zero pooled variance) give p = 1 for equal means and
// p = 1e-300 otherwise.
TestResult two_sample_t(std::span<const double> a, std::span<const double> b);

enum class RankSumMethod { automatic, exact, normal_approx };

// Wilcoxon rank-sum with midranks for ties. `statistic` is the standardized
// rank sum of `a` (tie-corrected variance). Exact p by full enumeration of
// rank assignments when n1 + n2 <= 12, otherwise normal approximation with
// continuity correction.
TestResult rank_sum(std::span<const double> a, std::span<const double> b,
                    RankSumMethod method = RankSumMethod::automatic);

struct OlsResult {
  double slope = 0.0;
  double intercept = 0.0;
  double t = 0.0;       // slope / se(slope), capped at +/-1e300 for exact fits
  double p_value = 1.0; // two-sided for slope == 0, floored at 1e-300
  std::size_t n = 0;
};

// Simple least-squares regression of y on x with a t-test on the slope
// (n - 2 dof). Throws std::invalid_argument for n < 3 and std::domain_error
// for constant x.
OlsResult ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace cyclescope::stats
