#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "cyclescope/cycle_metrics.hpp"
#include "cyclescope/game_model.hpp"
#include "cyclescope/rng.hpp"
#include "cyclescope/state_space.hpp"

namespace cyclescope {

enum class LearningRule { logit_fictitious_play, population_logit, sampled_replicator };

std::string_view rule_name(LearningRule rule);
std::optional<LearningRule> rule_from_name(std::string_view name);

// Session generator configuration. The experimental protocol defaults: 12
// subjects, ~80 periods, 3 sessions per treatment, random pairwise matching.
struct SimConfig {
  int n_players = 12;       // even, for pairwise matching
  int periods = 80;
  int sessions = 3;
  LearningRule rule = LearningRule::logit_fictitious_play;
  double lambda = 0.3;      // logit precision
  double rho = 0.05;        // belief recency weight in (0, 1]
  double payoff_scale = 1.0;  // monetary-conversion knob; effective precision
                              // is lambda * payoff_scale
  std::uint64_t seed = 0;
  bool full_information = false;  // beliefs track the whole realized mixture
                                  // instead of the matched opponent only
  std::optional<SocialState> initial_state;  // nullopt: uniform random draws

  double effective_lambda() const { return lambda * payoff_scale; }
  void validate() const;  // throws ConfigError
};

// Uniformly random perfect matching of 0..n-1 (n even).
std::vector<std::pair<int, int>> random_pairing(int n, RngStream& rng);

// Draws strategy i with probability proportional to exp(lambda * payoff_i),
// max-subtracted for overflow safety. lambda == 0 is the uniform draw.
Strategy logit_choice(const std::array<double, 4>& payoffs, double lambda,
                      RngStream& rng);

// Weighted fictitious play: beliefs' = (1-rho) * beliefs + rho * observation.
MixedProfile belief_update(const MixedProfile& beliefs, Strategy observed, double rho);
MixedProfile belief_update(const MixedProfile& beliefs,
                           const MixedProfile& observed_mix, double rho);

// Discrete logit population dynamics: every agent independently redraws its
// strategy against the current population mixture (self-inclusive; the
// self-exclusion correction is O(1/N) and omitted).
SocialState population_step(const SocialState& state, const PayoffMatrix& matrix,
                            double lambda, RngStream& rng);

// One session of cfg.periods states. Deterministic in (cfg.seed, game,
// session_index); substreams make sessions independent of generation order.
Trajectory run_session(const SimConfig& cfg, const GameSpec& game,
                       int session_index);

// cfg.sessions sessions, generated concurrently, session ids
// "g<game>s<index>" (1-based index).
std::vector<Trajectory> run_sessions(const SimConfig& cfg, const GameSpec& game);

}  // namespace cyclescope
