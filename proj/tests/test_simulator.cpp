#include <cmath>
#include <map>
#include <set>

#include "doctest.h"

#include "cyclescope/cycle_metrics.hpp"
#include "cyclescope/errors.hpp"
#include "cyclescope/simulator.hpp"
#include "cyclescope/stats.hpp"

using namespace cyclescope;

namespace {

constexpr MixedProfile kNashDumb{1.0 / 6, 1.0 / 6, 1.0 / 6, 0.5};

double nash_distance(const Trajectory& traj, std::size_t window) {
  std::array<double, 4> acc{};
  for (std::size_t i = traj.states.size() - window; i < traj.states.size(); ++i) {
    const auto f = traj.states[i].fractions();
    for (int c = 0; c < 4; ++c) acc[c] += f[c];
  }
  double d2 = 0.0;
  for (int c = 0; c < 4; ++c) {
    const double dev = acc[c] / static_cast<double>(window) - kNashDumb[c];
    d2 += dev * dev;
  }
  return std::sqrt(d2);
}

}  // namespace

TEST_CASE("random pairing") {
  RngStream rng(1);
  const auto single = random_pairing(2, rng);
  REQUIRE(single.size() == 1);
  CHECK(((single[0].first == 0 && single[0].second == 1) ||
         (single[0].first == 1 && single[0].second == 0)));

  CHECK_THROWS_AS(random_pairing(5, rng), std::domain_error);
  CHECK_THROWS_AS(random_pairing(0, rng), std::domain_error);

  // every agent appears exactly once
  for (int trial = 0; trial < 50; ++trial) {
    const auto pairs = random_pairing(12, rng);
    std::set<int> seen;
    for (const auto& [a, b] : pairs) {
      CHECK(seen.insert(a).second);
      CHECK(seen.insert(b).second);
    }
    CHECK(seen.size() == 12);
  }
}

TEST_CASE("random pairing is uniform over the three matchings of four agents") {
  RngStream rng(2);
  std::map<int, int> counts;  // keyed by agent 0's partner
  const int draws = 30000;
  for (int trial = 0; trial < draws; ++trial) {
    const auto pairs = random_pairing(4, rng);
    for (const auto& [a, b] : pairs) {
      if (a == 0) counts[b]++;
      if (b == 0) counts[a]++;
    }
  }
  REQUIRE(counts.size() == 3);
  double chi2 = 0.0;
  for (const auto& [partner, count] : counts) {
    CHECK(std::fabs(count / static_cast<double>(draws) - 1.0 / 3) <= 0.02);
    const double expected = draws / 3.0;
    chi2 += (count - expected) * (count - expected) / expected;
  }
  CHECK(chi2 < 9.21);  // chi-square(2) critical value at alpha = 0.01
}

TEST_CASE("logit choice limits") {
  RngStream rng(3);
  SUBCASE("lambda 0 is uniform") {
    int counts[4] = {0, 0, 0, 0};
    const int draws = 40000;
    for (int i = 0; i < draws; ++i) {
      ++counts[index_of(logit_choice({5, -2, 100, 0}, 0.0, rng))];
    }
    for (int c = 0; c < 4; ++c) {
      CHECK(std::fabs(counts[c] / static_cast<double>(draws) - 0.25) <= 0.01);
    }
  }
  SUBCASE("equal payoffs are uniform at any lambda") {
    int counts[4] = {0, 0, 0, 0};
    const int draws = 40000;
    for (int i = 0; i < draws; ++i) {
      ++counts[index_of(logit_choice({45, 45, 45, 45}, 3.7, rng))];
    }
    for (int c = 0; c < 4; ++c) {
      CHECK(std::fabs(counts[c] / static_cast<double>(draws) - 0.25) <= 0.01);
    }
  }
  SUBCASE("large lambda picks the maximizer") {
    int r_count = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      r_count += logit_choice({1, 0, 0, 0}, 1000.0, rng) == Strategy::R;
    }
    CHECK(r_count / static_cast<double>(draws) > 0.999);
  }
}

TEST_CASE("belief updates") {
  const MixedProfile prior{1, 0, 0, 0};
  const MixedProfile cournot = belief_update(prior, Strategy::P, 1.0);
  CHECK(cournot == MixedProfile{0, 1, 0, 0});

  const MixedProfile half = belief_update(prior, Strategy::P, 0.5);
  CHECK(half == MixedProfile{0.5, 0.5, 0, 0});

  // rho = 1/t reproduces the running average of observations
  RngStream rng(4);
  MixedProfile beliefs{0.25, 0.25, 0.25, 0.25};
  std::array<double, 4> totals{1, 1, 1, 1};  // uniform prior counts
  double total = 4.0;
  for (int t = 1; t <= 50; ++t) {
    const Strategy obs = kStrategies[rng.below(4)];
    beliefs = belief_update(beliefs, obs, 1.0 / (total + 1.0));
    ++totals[index_of(obs)];
    total += 1.0;
    for (int c = 0; c < 4; ++c) {
      CHECK(std::fabs(beliefs[c] - totals[c] / total) <= 1e-9);
    }
  }
}

TEST_CASE("session shape and determinism") {
  SimConfig cfg;
  cfg.seed = 99;
  const GameSpec game = GameSpec::from_id(0);
  const Trajectory t1 = run_session(cfg, game, 0);
  CHECK(t1.states.size() == 80);
  CHECK(t1.session_id == "g0s1");
  CHECK(t1.game_id == 0);
  for (const auto& s : t1.states) CHECK(s.population() == 12);

  const Trajectory t2 = run_session(cfg, game, 0);
  CHECK(t1.states == t2.states);

  const Trajectory other_session = run_session(cfg, game, 1);
  CHECK(t1.states != other_session.states);

  SimConfig reseeded = cfg;
  reseeded.seed = 100;
  CHECK(run_session(reseeded, game, 0).states != t1.states);
}

TEST_CASE("run_sessions equals sequential per-session generation") {
  SimConfig cfg;
  cfg.sessions = 6;
  cfg.seed = 31;
  const GameSpec game = GameSpec::from_id(1);
  const auto batch = run_sessions(cfg, game);
  REQUIRE(batch.size() == 6);
  for (int i = 0; i < 6; ++i) {
    const Trajectory single = run_session(cfg, game, i);
    CHECK(batch[i].session_id == single.session_id);
    CHECK(batch[i].states == single.states);
  }
}

TEST_CASE("fixed initial state is honored") {
  SimConfig cfg;
  cfg.seed = 5;
  cfg.initial_state = make_state(4, 4, 4, 0);
  const Trajectory t = run_session(cfg, GameSpec::from_id(0), 0);
  CHECK(t.states.front() == make_state(4, 4, 4, 0));

  SimConfig bad = cfg;
  bad.initial_state = make_state(4, 4, 4, 2);
  CHECK_THROWS_AS(run_session(bad, GameSpec::from_id(0), 0), ConfigError);
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.n_players = 11;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.rho = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.lambda = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SimConfig{};
  cfg.payoff_scale = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK(rule_from_name("population_logit") == LearningRule::population_logit);
  CHECK(!rule_from_name("nonsense"));
}

TEST_CASE("population step at lambda 0 is a uniform multinomial") {
  RngStream rng(6);
  const PayoffMatrix m = build_rpsd_matrix(GameSpec::from_id(0));
  std::array<double, 4> totals{};
  const int steps = 40000;
  const SocialState start = make_state(12, 0, 0, 0);
  for (int i = 0; i < steps; ++i) {
    const SocialState next = population_step(start, m, 0.0, rng);
    CHECK(next.population() == 12);
    for (int c = 0; c < 4; ++c) totals[c] += next.counts[c];
  }
  for (int c = 0; c < 4; ++c) {
    CHECK(std::fabs(totals[c] / steps - 3.0) <= 0.03);  // 1% of N/4
  }
}

TEST_CASE("population dynamics leave the Nash state in the unstable game") {
  // At lambda = 0 the chain hovers around the uniform state; with payoff
  // feedback switched on it spirals out to boundary cycling, far beyond the
  // lambda = 0 baseline distance.
  const SocialState nash_counts = make_state(2, 2, 2, 6);
  const PayoffMatrix m = build_rpsd_matrix(GameSpec::from_id(0));
  const int chains = 200, steps = 50;
  double mean_dist[2] = {0.0, 0.0};
  for (int which = 0; which < 2; ++which) {
    const double lambda = which == 0 ? 0.08 : 0.0;
    RngStream rng(7);
    for (int chain = 0; chain < chains; ++chain) {
      SocialState state = nash_counts;
      for (int s = 0; s < steps; ++s) state = population_step(state, m, lambda, rng);
      const auto f = state.fractions();
      double d2 = 0.0;
      for (int c = 0; c < 4; ++c) {
        const double dev = f[c] - kNashDumb[c];
        d2 += dev * dev;
      }
      mean_dist[which] += std::sqrt(d2);
    }
    mean_dist[which] /= chains;
  }
  CHECK(mean_dist[0] > 0.4);              // clear divergence from the Nash state
  CHECK(mean_dist[0] > mean_dist[1] * 1.5);  // far beyond the noise baseline
}

TEST_CASE("sampled replicator conserves and reproduces") {
  SimConfig cfg;
  cfg.rule = LearningRule::sampled_replicator;
  cfg.seed = 8;
  const Trajectory t1 = run_session(cfg, GameSpec::from_id(0), 0);
  CHECK(t1.states.size() == 80);
  for (const auto& s : t1.states) CHECK(s.population() == 12);
  CHECK(run_session(cfg, GameSpec::from_id(0), 0).states == t1.states);
}

TEST_CASE("population_logit sessions are deterministic") {
  SimConfig cfg;
  cfg.rule = LearningRule::population_logit;
  cfg.seed = 12;
  const Trajectory t1 = run_session(cfg, GameSpec::from_id(2), 0);
  CHECK(t1.states.size() == 80);
  CHECK(run_session(cfg, GameSpec::from_id(2), 0).states == t1.states);
}

TEST_CASE("calibrated defaults: unstable sessions end farther from Nash than stable") {
  std::vector<double> unstable, stable;
  for (int g : {0, 2}) {
    SimConfig cfg;
    cfg.sessions = 100;
    cfg.seed = 2024;
    const auto trajs = run_sessions(cfg, GameSpec::from_id(g));
    for (const auto& t : trajs) {
      (g == 0 ? unstable : stable).push_back(nash_distance(t, 20));
    }
  }
  const auto r = stats::rank_sum(unstable, stable);
  CHECK(r.statistic > 0.0);  // unstable ranks higher
  CHECK(r.p_value < 0.05);
}

TEST_CASE("calibrated defaults: pooled unstable sessions rotate R->P->S") {
  SimConfig cfg;
  cfg.sessions = 100;
  cfg.seed = 4242;
  const auto trajs = run_sessions(cfg, GameSpec::from_id(0));
  std::vector<double> lx, ly, lz;
  for (const auto& t : trajs) {
    for (const auto& s : trajectory_samples(t, kCentroid, setting(1)).samples) {
      lx.push_back(s.lx);
      ly.push_back(s.ly);
      lz.push_back(s.lz);
    }
  }
  CHECK(lx.size() == 7900);
  for (const auto* col : {&lx, &ly, &lz}) {
    double mean = 0.0;
    for (double v : *col) mean += v;
    mean /= static_cast<double>(col->size());
    CHECK(mean > 0.0);
    CHECK(stats::one_sample_t(*col, 0.0).p_value < 0.01);
  }
}
