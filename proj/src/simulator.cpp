#include "cyclescope/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "cyclescope/errors.hpp"

namespace cyclescope {
namespace {

constexpr MixedProfile kUniformBeliefs{0.25, 0.25, 0.25, 0.25};

std::uint64_t session_seed(std::uint64_t seed, int game_id, int session_index) {
  std::uint64_t s = seed;
  splitmix64_next(s);
  s ^= static_cast<std::uint64_t>(game_id + 1) * 0x9e3779b97f4a7c15ULL;
  splitmix64_next(s);
  s ^= static_cast<std::uint64_t>(session_index + 1) * 0xd1b54a32d192ed03ULL;
  return splitmix64_next(s);
}

// Expands a state into one strategy per agent, counts in (R,P,S,D) order.
std::vector<Strategy> agents_of(const SocialState& state) {
  std::vector<Strategy> agents;
  agents.reserve(state.population());
  for (Strategy s : kStrategies) {
    agents.insert(agents.end(), state.count(s), s);
  }
  return agents;
}

SocialState count_actions(const std::vector<Strategy>& actions) {
  SocialState state;
  for (Strategy s : actions) ++state.counts[index_of(s)];
  return state;
}

std::vector<Strategy> initial_actions(const SimConfig& cfg, RngStream& rng) {
  if (cfg.initial_state) return agents_of(*cfg.initial_state);
  std::vector<Strategy> actions(cfg.n_players);
  for (auto& a : actions) a = kStrategies[rng.below(4)];
  return actions;
}

SocialState replicator_step(const SocialState& state, const PayoffMatrix& matrix,
                            RngStream& rng) {
  const int n = state.population();
  const std::vector<Strategy> agents = agents_of(state);
  const auto u = expected_payoffs(matrix, state.fractions());
  double lo = matrix(0, 0), hi = matrix(0, 0);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      lo = std::min(lo, matrix(i, j));
      hi = std::max(hi, matrix(i, j));
    }
  }
  const double range = hi - lo;
  std::vector<Strategy> next = agents;
  if (range > 0.0) {
    for (int i = 0; i < n; ++i) {
      // imitate a random role model with probability proportional to the
      // payoff advantage (pairwise proportional imitation)
      int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (j >= i) ++j;
      const double gain = u[index_of(agents[j])] - u[index_of(agents[i])];
      if (gain > 0.0 && rng.uniform01() < gain / range) next[i] = agents[j];
    }
  }
  return count_actions(next);
}

}  // namespace

std::string_view rule_name(LearningRule rule) {
  switch (rule) {
    case LearningRule::logit_fictitious_play: return "logit_fictitious_play";
    case LearningRule::population_logit: return "population_logit";
    case LearningRule::sampled_replicator: return "sampled_replicator";
  }
  return "";
}

std::optional<LearningRule> rule_from_name(std::string_view name) {
  for (LearningRule rule : {LearningRule::logit_fictitious_play,
                            LearningRule::population_logit,
                            LearningRule::sampled_replicator}) {
    if (rule_name(rule) == name) return rule;
  }
  return std::nullopt;
}

void SimConfig::validate() const {
  if (n_players < 2 || n_players % 2 != 0) {
    throw ConfigError("simulator: n_players must be even and >= 2");
  }
  if (periods < 1) throw ConfigError("simulator: periods must be >= 1");
  if (sessions < 1) throw ConfigError("simulator: sessions must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("simulator: lambda must be finite and >= 0");
  }
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw ConfigError("simulator: rho must be in (0, 1]");
  }
  if (!(payoff_scale > 0.0) || !std::isfinite(payoff_scale)) {
    throw ConfigError("simulator: payoff_scale must be finite and > 0");
  }
  if (initial_state && initial_state->population() != n_players) {
    throw ConfigError("simulator: initial_state population differs from n_players");
  }
}

std::vector<std::pair<int, int>> random_pairing(int n, RngStream& rng) {
  if (n < 2 || n % 2 != 0) {
    throw std::domain_error("random_pairing: n must be even and >= 2");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n / 2);
  for (int i = 0; i < n; i += 2) pairs.emplace_back(order[i], order[i + 1]);
  return pairs;
}

Strategy logit_choice(const std::array<double, 4>& payoffs, double lambda,
                      RngStream& rng) {
  const double top = *std::max_element(payoffs.begin(), payoffs.end());
  std::array<double, 4> weights{};
  for (int i = 0; i < 4; ++i) weights[i] = std::exp(lambda * (payoffs[i] - top));
  return kStrategies[rng.categorical(weights)];
}

MixedProfile belief_update(const MixedProfile& beliefs, Strategy observed, double rho) {
  MixedProfile next;
  for (int i = 0; i < 4; ++i) next[i] = (1.0 - rho) * beliefs[i];
  next[index_of(observed)] += rho;
  return next;
}

MixedProfile belief_update(const MixedProfile& beliefs,
                           const MixedProfile& observed_mix, double rho) {
  MixedProfile next;
  for (int i = 0; i < 4; ++i) {
    next[i] = (1.0 - rho) * beliefs[i] + rho * observed_mix[i];
  }
  return next;
}

SocialState population_step(const SocialState& state, const PayoffMatrix& matrix,
                            double lambda, RngStream& rng) {
  const auto u = expected_payoffs(matrix, state.fractions());
  const double top = *std::max_element(u.begin(), u.end());
  std::array<double, 4> weights{};
  for (int i = 0; i < 4; ++i) weights[i] = std::exp(lambda * (u[i] - top));
  SocialState next;
  for (int i = 0; i < state.population(); ++i) {
    ++next.counts[rng.categorical(weights)];
  }
  return next;
}

Trajectory run_session(const SimConfig& cfg, const GameSpec& game,
                       int session_index) {
  cfg.validate();
  RngStream rng(session_seed(cfg.seed, game.game_id, session_index));
  const PayoffMatrix matrix = build_rpsd_matrix(game);
  const double lambda_eff = cfg.effective_lambda();

  Trajectory traj;
  traj.session_id = "g" + std::to_string(game.game_id) + "s" +
                    std::to_string(session_index + 1);
  traj.game_id = game.game_id;
  traj.states.reserve(cfg.periods);

  if (cfg.rule != LearningRule::logit_fictitious_play) {
    SocialState state = cfg.initial_state ? *cfg.initial_state
                                          : count_actions(initial_actions(cfg, rng));
    traj.states.push_back(state);
    for (int t = 1; t < cfg.periods; ++t) {
      state = cfg.rule == LearningRule::population_logit
                  ? population_step(state, matrix, lambda_eff, rng)
                  : replicator_step(state, matrix, rng);
      traj.states.push_back(state);
    }
    return traj;
  }

  std::vector<MixedProfile> beliefs(cfg.n_players, kUniformBeliefs);
  std::vector<Strategy> actions;
  for (int t = 1; t <= cfg.periods; ++t) {
    const auto pairs = random_pairing(cfg.n_players, rng);
    if (t == 1) {
      actions = initial_actions(cfg, rng);
    } else {
      for (int i = 0; i < cfg.n_players; ++i) {
        actions[i] = logit_choice(expected_payoffs(matrix, beliefs[i]), lambda_eff, rng);
      }
    }
    const SocialState state = count_actions(actions);
    traj.states.push_back(state);
    if (cfg.full_information) {
      const auto mix = state.fractions();
      for (auto& belief : beliefs) belief = belief_update(belief, mix, cfg.rho);
    } else {
      for (const auto& [a, b] : pairs) {
        beliefs[a] = belief_update(beliefs[a], actions[b], cfg.rho);
        beliefs[b] = belief_update(beliefs[b], actions[a], cfg.rho);
      }
    }
  }
  return traj;
}

std::vector<Trajectory> run_sessions(const SimConfig& cfg, const GameSpec& game) {
  cfg.validate();
  std::vector<Trajectory> out(cfg.sessions);
  std::vector<std::future<void>> tasks;
  const int workers = std::max(1, std::min<int>(cfg.sessions,
      static_cast<int>(std::thread::hardware_concurrency())));
  const int chunk = (cfg.sessions + workers - 1) / workers;
  for (int begin = 0; begin < cfg.sessions; begin += chunk) {
    const int end = std::min(cfg.sessions, begin + chunk);
    tasks.push_back(std::async(std::launch::async, [&, begin, end] {
      for (int i = begin; i < end; ++i) out[i] = run_session(cfg, game, i);
    }));
  }
  for (auto& t : tasks) t.get();
  return out;
}

}  // namespace cyclescope
