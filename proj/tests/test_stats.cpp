#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "cyclescope/rng.hpp"
#include "cyclescope/stats.hpp"
#include "oracles.hpp"

using namespace cyclescope;
namespace st = cyclescope::stats;

TEST_CASE("student t cdf matches the quadrature oracle") {
  const double ts[] = {0.5, 1.0, 2.0, 4.242640687119285, 5.0};
  const double dofs[] = {1.0, 2.0, 4.0, 10.0, 236.0};
  for (double dof : dofs) {
    for (double t : ts) {
      CHECK(std::fabs(st::student_t_cdf(t, dof) - oracles::t_cdf_quadrature(t, dof)) <= 1e-8);
      CHECK(std::fabs(st::student_t_cdf(-t, dof) - oracles::t_cdf_quadrature(-t, dof)) <= 1e-8);
    }
  }
}

TEST_CASE("normal cdf basics") {
  CHECK(st::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(st::normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(st::normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-9));
}

TEST_CASE("one-sample t on 1..5") {
  const std::vector<double> samples{1, 2, 3, 4, 5};
  const auto r = st::one_sample_t(samples, 0.0);
  CHECK(r.statistic == doctest::Approx(4.242640687119285).epsilon(1e-12));
  CHECK(std::fabs(r.p_value - 0.0132) <= 1e-3);
  const double p_oracle = oracles::t_two_sided_p_quadrature(r.statistic, 4.0);
  CHECK(std::fabs(r.p_value - p_oracle) <= 1e-3);
  CHECK(std::fabs(r.p_value - p_oracle) <= 1e-8);  // much tighter in practice
}

TEST_CASE("one-sample t edge cases") {
  const std::vector<double> symmetric{-1, 1, -1, 1};
  const auto r = st::one_sample_t(symmetric, 0.0);
  CHECK(r.statistic == doctest::Approx(0.0));
  CHECK(r.p_value == doctest::Approx(1.0));

  CHECK_THROWS_AS(st::one_sample_t(std::vector<double>{3, 3, 3}, 0.0), std::domain_error);
  CHECK_THROWS_AS(st::one_sample_t(std::vector<double>{3}, 0.0), std::invalid_argument);
}

TEST_CASE("one-sample t shift invariance") {
  RngStream rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> samples(8);
    for (auto& v : samples) v = rng.uniform01() * 4.0 - 2.0;
    const double mu0 = rng.uniform01();
    const double shift = rng.uniform01() * 10.0 - 5.0;
    const auto base = st::one_sample_t(samples, mu0);
    std::vector<double> shifted = samples;
    for (auto& v : shifted) v += shift;
    const auto moved = st::one_sample_t(shifted, mu0 + shift);
    CHECK(std::fabs(base.statistic - moved.statistic) <= 1e-9);
    CHECK(std::fabs(base.p_value - moved.p_value) <= 1e-12);
  }
}

TEST_CASE("rank sum exact enumeration example") {
  const std::vector<double> a{1, 2}, b{3, 4};
  const auto r = st::rank_sum(a, b);
  CHECK(r.p_value == 1.0 / 3.0);
}

TEST_CASE("rank sum identical groups and swap antisymmetry") {
  const std::vector<double> a{1, 2, 2, 5, 7, 9, 4, 3, 8, 8, 1, 0, 2, 6};
  const auto same = st::rank_sum(a, a);
  CHECK(same.statistic == doctest::Approx(0.0));
  CHECK(same.p_value >= 0.99);

  const std::vector<double> b{2, 4, 4, 6, 1, 0, 5, 5, 9, 2, 3, 3, 7, 8};
  const auto ab = st::rank_sum(a, b);
  const auto ba = st::rank_sum(b, a);
  CHECK(ab.p_value == ba.p_value);
  CHECK(ab.statistic == doctest::Approx(-ba.statistic).epsilon(1e-12));
}

TEST_CASE("rank sum invariance under strictly monotone transforms") {
  RngStream rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> a(4), b(5);
    for (auto& v : a) v = static_cast<double>(rng.below(12));
    for (auto& v : b) v = static_cast<double>(rng.below(12));
    const auto base = st::rank_sum(a, b, st::RankSumMethod::exact);
    auto ta = a, tb = b;
    for (auto& v : ta) v = std::exp(0.5 * v) - 3.0;
    for (auto& v : tb) v = std::exp(0.5 * v) - 3.0;
    const auto mapped = st::rank_sum(ta, tb, st::RankSumMethod::exact);
    CHECK(base.p_value == mapped.p_value);

    const auto base_n = st::rank_sum(a, b, st::RankSumMethod::normal_approx);
    const auto mapped_n = st::rank_sum(ta, tb, st::RankSumMethod::normal_approx);
    CHECK(std::fabs(base_n.p_value - mapped_n.p_value) <= 1e-12);
  }
}

TEST_CASE("rank sum exact path matches the permutation oracle") {
  RngStream rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n1 = 1 + rng.below(5);
    const std::size_t n2 = 1 + rng.below(5);
    std::vector<double> a(n1), b(n2);
    for (auto& v : a) v = static_cast<double>(rng.below(6));
    for (auto& v : b) v = static_cast<double>(rng.below(6));
    const auto r = st::rank_sum(a, b, st::RankSumMethod::exact);
    CHECK(r.p_value == oracles::rank_sum_exact_p_oracle(a, b));
  }
}

TEST_CASE("rank sum exact and normal paths agree on 6+6 samples") {
  RngStream rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(6), b(6);
    for (auto& v : a) v = rng.uniform01();
    for (auto& v : b) v = rng.uniform01() + 0.2;
    const auto exact = st::rank_sum(a, b, st::RankSumMethod::exact);
    const auto approx = st::rank_sum(a, b, st::RankSumMethod::normal_approx);
    CHECK(std::fabs(exact.p_value - approx.p_value) <= 0.02);
  }
}

TEST_CASE("rank sum rejects empty groups") {
  CHECK_THROWS_AS(st::rank_sum(std::vector<double>{}, std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("ols slope") {
  SUBCASE("exact line") {
    const std::vector<double> x{1, 2, 3}, y{2, 4, 6};
    const auto fit = st::ols_slope(x, y);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.p_value == 1e-300);
  }
  SUBCASE("constant y") {
    const std::vector<double> x{1, 2, 3, 4}, y{5, 5, 5, 5};
    const auto fit = st::ols_slope(x, y);
    CHECK(fit.slope == doctest::Approx(0.0));
    CHECK(fit.p_value == doctest::Approx(1.0));
  }
  SUBCASE("constant x") {
    const std::vector<double> x{2, 2, 2}, y{1, 2, 3};
    CHECK_THROWS_AS(st::ols_slope(x, y), std::domain_error);
  }
  SUBCASE("slope t against the quadrature oracle") {
    const std::vector<double> x{0, 1, 2, 3, 4, 5}, y{0.2, 1.1, 1.8, 3.3, 3.9, 5.2};
    const auto fit = st::ols_slope(x, y);
    CHECK(std::fabs(fit.p_value - oracles::t_two_sided_p_quadrature(fit.t, 4.0)) <= 1e-8);
  }
}

TEST_CASE("two-sample t") {
  const std::vector<double> a{1, 2, 3}, b{2, 3, 4};
  const auto r = st::two_sample_t(a, b);
  CHECK(r.statistic == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-12));
  CHECK(std::fabs(r.p_value - oracles::t_two_sided_p_quadrature(r.statistic, 4.0)) <= 1e-8);

  const auto same = st::two_sample_t(a, a);
  CHECK(same.statistic == doctest::Approx(0.0));
  CHECK(same.p_value == doctest::Approx(1.0));

  const std::vector<double> c0{2, 2}, c1{3, 3};
  const auto degenerate = st::two_sample_t(c0, c1);
  CHECK(degenerate.p_value == 1e-300);
  CHECK(st::two_sample_t(c0, c0).p_value == doctest::Approx(1.0));
}

TEST_CASE("significance marks") {
  CHECK(st::stars(0.005) == st::Mark::star3);
  CHECK(st::stars(0.03) == st::Mark::star2);
  CHECK(st::stars(0.07) == st::Mark::star);
  CHECK(st::stars(0.19) == st::Mark::dot);
  CHECK(st::stars(0.2) == st::Mark::none);  // strict inequality at the boundary
  CHECK(st::stars(1.0) == st::Mark::none);
  CHECK(st::mark_text(st::Mark::star2) == "**");
  CHECK(st::mark_text(st::Mark::dot) == ".");
  CHECK_THROWS_AS(st::stars(1.5), std::domain_error);
  CHECK_THROWS_AS(st::stars(-0.1), std::domain_error);
  CHECK_THROWS_AS(st::stars(std::nan("")), std::domain_error);
}
