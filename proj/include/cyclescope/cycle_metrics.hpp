#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cyclescope/state_space.hpp"

namespace cyclescope {

// Default reference point: the uniformly mixed state (1,1,1,1)/4.
inline constexpr std::array<double, 4> kCentroid{0.25, 0.25, 0.25, 0.25};

// One session's ordered social states, one per period.
struct Trajectory {
  std::string session_id;
  int game_id = -1;
  std::vector<SocialState> states;

  std::size_t periods() const { return states.size(); }
  std::size_t ppt_count() const { return states.empty() ? 0 : states.size() - 1; }
  int population() const { return states.empty() ? 0 : states.front().population(); }
};

// Throws std::domain_error unless the trajectory has >= 2 states that all
// share one population size.
void validate_trajectory(const Trajectory& traj);

// Per-transition angular momentum sample; t is the 1-based index of the
// transition from period t to t+1.
struct LSample {
  int t = 0;
  double lx = 0.0, ly = 0.0, lz = 0.0;
};

struct AngularSamples {
  int k = 1;
  std::array<double, 4> reference = kCentroid;
  std::string session_id;
  int game_id = -1;
  std::vector<LSample> samples;
};

struct MeanL {
  double lx = 0.0, ly = 0.0, lz = 0.0;
  std::size_t n = 0;
};

// L(t) for one transition: cross product of the two displacement vectors
// from the reference point to the states, projected under setting k. Its
// magnitude is the area of the parallelogram the two displacements span.
Vec3 angular_momentum_step(const SocialState& x_t, const SocialState& x_t1,
                           const std::array<double, 4>& o, const Setting& k);

// One sample per transition, in period order.
AngularSamples trajectory_samples(const Trajectory& traj,
                                  const std::array<double, 4>& o,
                                  const Setting& k);

MeanL mean_L(const AngularSamples& samples);

// |mean L|.
double strength(const MeanL& m);

// Pools the three component columns into one scalar sample set
// (3 x transition count). Only defined for setting k=1.
std::vector<double> combined_scale_samples(const AngularSamples& samples);

// Secondary statistic: per-transition projection (lx+ly+lz)/sqrt(3).
std::vector<double> combined_projection_samples(const AngularSamples& samples);

struct PersistenceReport {
  double first_mean = 0.0;
  double second_mean = 0.0;
  double delta = 0.0;   // second - first
  double p_value = 1.0; // two-sample t on the pooled combined-scale samples
  std::size_t n1 = 0, n2 = 0;
};

// Splits each session's transitions at `boundary_period`: the first half
// takes t in [1, boundary-1], the second t in [boundary+1, periods-1], and
// the transition that crosses the boundary (t == boundary) is dropped.
// Combined-scale samples are pooled across the group's sessions (setting
// k=1, the given reference point).
PersistenceReport persistence_split(std::span<const Trajectory> group,
                                    const std::array<double, 4>& o,
                                    int boundary_period);

struct ReferenceSweep {
  bool closed_loop = false;  // first state == last state
  std::vector<MeanL> means;  // one per reference, in input order
};

// Recomputes mean L under each reference point. For a closed trajectory the
// per-reference L sums are algebraically identical.
ReferenceSweep reference_sweep(const Trajectory& traj, const Setting& k,
                               std::span<const SocialState> references);

// Mean fraction of one strategy over all periods of all sessions.
double average_play(std::span<const Trajectory> group, Strategy s);

// CSV with header session_id,game_id,k,t,Lx,Ly,Lz.
void write_samples_csv(std::ostream& out, std::span<const AngularSamples> groups);

}  // namespace cyclescope
