#include "cyclescope/cycle_metrics.hpp"

#include <cmath>
#include <future>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "cyclescope/stats.hpp"
#include "cyclescope/textio.hpp"

namespace cyclescope {

void validate_trajectory(const Trajectory& traj) {
  if (traj.states.size() < 2) {
    throw std::domain_error("trajectory '" + traj.session_id +
                            "': need at least 2 periods");
  }
  const int n = traj.states.front().population();
  for (const auto& s : traj.states) {
    if (s.population() != n) {
      throw std::domain_error("trajectory '" + traj.session_id +
                              "': population size varies across periods");
    }
  }
}

Vec3 angular_momentum_step(const SocialState& x_t, const SocialState& x_t1,
                           const std::array<double, 4>& o, const Setting& k) {
  if (x_t.population() != x_t1.population()) {
    throw std::domain_error("angular_momentum_step: mismatched population sizes");
  }
  const Vec3 po = project(o, k);
  const Vec3 a = project(x_t.fractions(), k) - po;
  const Vec3 b = project(x_t1.fractions(), k) - po;
  return cross(a, b);
}

AngularSamples trajectory_samples(const Trajectory& traj,
                                  const std::array<double, 4>& o,
                                  const Setting& k) {
  validate_trajectory(traj);
  AngularSamples out;
  out.k = k.id;
  out.reference = o;
  out.session_id = traj.session_id;
  out.game_id = traj.game_id;
  out.samples.reserve(traj.ppt_count());
  for (std::size_t t = 0; t + 1 < traj.states.size(); ++t) {
    const Vec3 l = angular_momentum_step(traj.states[t], traj.states[t + 1], o, k);
    out.samples.push_back({static_cast<int>(t + 1), l.x, l.y, l.z});
  }
  return out;
}

MeanL mean_L(const AngularSamples& samples) {
  const std::size_t n = samples.samples.size();
  if (n == 0) throw std::domain_error("mean_L: no samples");
  MeanL m;
  m.n = n;
  for (const auto& s : samples.samples) {
    m.lx += s.lx;
    m.ly += s.ly;
    m.lz += s.lz;
  }
  m.lx /= static_cast<double>(n);
  m.ly /= static_cast<double>(n);
  m.lz /= static_cast<double>(n);
  return m;
}

double strength(const MeanL& m) {
  return std::sqrt(m.lx * m.lx + m.ly * m.ly + m.lz * m.lz);
}

std::vector<double> combined_scale_samples(const AngularSamples& samples) {
  if (samples.k != 1) {
    throw std::domain_error("combined_scale_samples: defined for setting k=1 only");
  }
  std::vector<double> pool;
  pool.reserve(3 * samples.samples.size());
  for (const auto& s : samples.samples) pool.push_back(s.lx);
  for (const auto& s : samples.samples) pool.push_back(s.ly);
  for (const auto& s : samples.samples) pool.push_back(s.lz);
  return pool;
}

std::vector<double> combined_projection_samples(const AngularSamples& samples) {
  if (samples.k != 1) {
    throw std::domain_error("combined_projection_samples: defined for setting k=1 only");
  }
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  std::vector<double> out;
  out.reserve(samples.samples.size());
  for (const auto& s : samples.samples) {
    out.push_back((s.lx + s.ly + s.lz) * inv_sqrt3);
  }
  return out;
}

PersistenceReport persistence_split(std::span<const Trajectory> group,
                                    const std::array<double, 4>& o,
                                    int boundary_period) {
  std::vector<double> first, second;
  for (const auto& traj : group) {
    const int last_t = static_cast<int>(traj.ppt_count());
    if (boundary_period < 1 || boundary_period > last_t) {
      throw std::domain_error("persistence_split: boundary outside the period range of '" +
                              traj.session_id + "'");
    }
    const AngularSamples samples = trajectory_samples(traj, o, setting(1));
    for (const auto& s : samples.samples) {
      if (s.t < boundary_period) {
        first.insert(first.end(), {s.lx, s.ly, s.lz});
      } else if (s.t > boundary_period) {
        second.insert(second.end(), {s.lx, s.ly, s.lz});
      }
      // the boundary-crossing transition belongs to neither half
    }
  }
  if (first.empty() || second.empty()) {
    throw std::domain_error("persistence_split: a half has no samples");
  }
  PersistenceReport rep;
  rep.n1 = first.size();
  rep.n2 = second.size();
  double s1 = 0.0, s2 = 0.0;
  for (double v : first) s1 += v;
  for (double v : second) s2 += v;
  rep.first_mean = s1 / static_cast<double>(rep.n1);
  rep.second_mean = s2 / static_cast<double>(rep.n2);
  rep.delta = rep.second_mean - rep.first_mean;
  rep.p_value = stats::two_sample_t(first, second).p_value;
  return rep;
}

ReferenceSweep reference_sweep(const Trajectory& traj, const Setting& k,
                               std::span<const SocialState> references) {
  if (references.empty()) {
    throw std::domain_error("reference_sweep: no reference points");
  }
  validate_trajectory(traj);
  ReferenceSweep sweep;
  sweep.closed_loop = traj.states.front() == traj.states.back();
  sweep.means.resize(references.size());

  const auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      sweep.means[i] = mean_L(trajectory_samples(traj, references[i].fractions(), k));
    }
  };
  const std::size_t n = references.size();
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
  if (workers <= 1 || n < 8) {
    worker(0, n);
    return sweep;
  }
  std::vector<std::future<void>> tasks;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    tasks.push_back(std::async(std::launch::async, worker, begin,
                               std::min(n, begin + chunk)));
  }
  for (auto& t : tasks) t.get();
  return sweep;
}

double average_play(std::span<const Trajectory> group, Strategy s) {
  if (group.empty()) throw std::domain_error("average_play: empty group");
  double sum = 0.0;
  std::size_t periods = 0;
  for (const auto& traj : group) {
    for (const auto& state : traj.states) {
      sum += state.fractions()[index_of(s)];
      ++periods;
    }
  }
  if (periods == 0) throw std::domain_error("average_play: no periods");
  return sum / static_cast<double>(periods);
}

void write_samples_csv(std::ostream& out, std::span<const AngularSamples> groups) {
  out << "session_id,game_id,k,t,Lx,Ly,Lz\n";
  for (const auto& g : groups) {
    for (const auto& s : g.samples) {
      out << g.session_id << ',' << g.game_id << ',' << g.k << ',' << s.t << ','
          << format_double(s.lx) << ',' << format_double(s.ly) << ','
          << format_double(s.lz) << '\n';
    }
  }
}

}  // namespace cyclescope
