#include "cyclescope/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cyclescope::stats {
namespace {

constexpr double kPFloor = 1e-300;
constexpr double kTCap = 1e300;

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sum_sq_dev(std::span<const double> v, double m) {
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss;
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_cont_frac(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// Two-sided p for a t statistic: I_{v/(v+t^2)}(v/2, 1/2). More stable in the
// tails than 2*(1 - cdf).
double t_two_sided_p(double t, double dof) {
  const double x = dof / (dof + t * t);
  return std::clamp(incomplete_beta(0.5 * dof, 0.5, x), 0.0, 1.0);
}

// Midranks of the pooled sample; also accumulates the tie term sum(t^3 - t).
std::vector<double> midranks(std::span<const double> pooled, double& tie_term) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  std::vector<double> ranks(n);
  tie_term = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double mid = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
    const double g = static_cast<double>(j - i + 1);
    tie_term += g * g * g - g;
    i = j + 1;
  }
  return ranks;
}

// Exact two-sided p: enumerate all C(n, n1) rank assignments and compare
// their rank sums with the observed one. Midranks are multiples of 1/2, so
// the sums and comparisons below are exact in double precision.
double rank_sum_exact_p(const std::vector<double>& ranks, std::size_t n1, double w_obs) {
  const std::size_t n = ranks.size();
  std::vector<std::size_t> idx(n1);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::uint64_t total = 0, c_le = 0, c_ge = 0;
  for (;;) {
    double w = 0.0;
    for (std::size_t k : idx) w += ranks[k];
    ++total;
    if (w <= w_obs) ++c_le;
    if (w >= w_obs) ++c_ge;
    // next combination
    std::size_t i = n1;
    while (i > 0 && idx[i - 1] == i - 1 + n - n1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < n1; ++j) idx[j] = idx[j - 1] + 1;
  }
  const double p = 2.0 * static_cast<double>(std::min(c_le, c_ge)) /
                   static_cast<double>(total);
  return std::min(1.0, p);
}

}  // namespace

Mark stars(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("stars: p outside [0, 1]");
  if (p < 0.01) return Mark::star3;
  if (p < 0.05) return Mark::star2;
  if (p < 0.1) return Mark::star;
  if (p < 0.2) return Mark::dot;
  return Mark::none;
}

std::string_view mark_text(Mark m) {
  switch (m) {
    case Mark::dot: return ".";
    case Mark::star: return "*";
    case Mark::star2: return "**";
    case Mark::star3: return "***";
    case Mark::none: break;
  }
  return "";
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cont_frac(a, b, x) / a;
  }
  return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double student_t_cdf(double t, double dof) {
  const double tail = 0.5 * incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
  return t >= 0.0 ? 1.0 - tail : tail;
}

TestResult one_sample_t(std::span<const double> samples, double mu0) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("one_sample_t: need at least 2 samples");
  const double m = mean_of(samples);
  const double ss = sum_sq_dev(samples, m);
  if (ss <= 0.0) throw std::domain_error("one_sample_t: zero sample variance");
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double t = (m - mu0) / (sd / std::sqrt(static_cast<double>(n)));
  return TestResult{t, t_two_sided_p(t, static_cast<double>(n - 1)), n, 0};
}

TestResult two_sample_t(std::span<const double> a, std::span<const double> b) {
  const std::size_t n1 = a.size(), n2 = b.size();
  if (n1 < 1 || n2 < 1 || n1 + n2 < 3) {
    throw std::invalid_argument("two_sample_t: need n1, n2 >= 1 and n1 + n2 >= 3");
  }
  const double m1 = mean_of(a), m2 = mean_of(b);
  const double dof = static_cast<double>(n1 + n2 - 2);
  const double sp2 = (sum_sq_dev(a, m1) + sum_sq_dev(b, m2)) / dof;
  const double se = std::sqrt(sp2 * (1.0 / n1 + 1.0 / n2));
  if (se == 0.0) {
    if (m1 == m2) return TestResult{0.0, 1.0, n1, n2};
    return TestResult{std::copysign(kTCap, m1 - m2), kPFloor, n1, n2};
  }
  const double t = (m1 - m2) / se;
  return TestResult{t, t_two_sided_p(t, dof), n1, n2};
}

TestResult rank_sum(std::span<const double> a, std::span<const double> b,
                    RankSumMethod method) {
  const std::size_t n1 = a.size(), n2 = b.size();
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("rank_sum: empty group");
  const std::size_t n = n1 + n2;
  std::vector<double> pooled;
  pooled.reserve(n);
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  double tie_term = 0.0;
  const std::vector<double> ranks = midranks(pooled, tie_term);
  double w = 0.0;
  for (std::size_t i = 0; i < n1; ++i) w += ranks[i];
  const double mu = static_cast<double>(n1) * (n + 1) / 2.0;
  const double var =
      (static_cast<double>(n1) * static_cast<double>(n2) / 12.0) *
      (static_cast<double>(n + 1) -
       (n > 1 ? tie_term / (static_cast<double>(n) * (n - 1)) : 0.0));
  const double sd = var > 0.0 ? std::sqrt(var) : 0.0;
  const double z = sd > 0.0 ? (w - mu) / sd : 0.0;

  const bool exact = method == RankSumMethod::exact ||
                     (method == RankSumMethod::automatic && n <= 12);
  double p;
  if (exact) {
    p = rank_sum_exact_p(ranks, n1, w);
  } else if (sd == 0.0) {
    p = 1.0;
  } else {
    const double z_cc = std::max(0.0, std::fabs(w - mu) - 0.5) / sd;
    p = std::min(1.0, 2.0 * normal_cdf(-z_cc));
  }
  return TestResult{z, p, n1, n2};
}

OlsResult ols_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw std::invalid_argument("ols_slope: size mismatch");
  if (n < 3) throw std::invalid_argument("ols_slope: need at least 3 points");
  const auto [x_min, x_max] = std::minmax_element(x.begin(), x.end());
  if (*x_min == *x_max) throw std::domain_error("ols_slope: constant x");
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  OlsResult r;
  r.n = n;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - r.intercept - r.slope * x[i];
    rss += e * e;
  }
  const double dof = static_cast<double>(n - 2);
  const double se = std::sqrt(rss / dof / sxx);
  if (se == 0.0) {
    r.t = r.slope == 0.0 ? 0.0 : std::copysign(kTCap, r.slope);
    r.p_value = r.slope == 0.0 ? 1.0 : kPFloor;
    return r;
  }
  r.t = r.slope / se;
  r.p_value = std::max(t_two_sided_p(r.t, dof), kPFloor);
  return r;
}

}  // namespace cyclescope::stats
