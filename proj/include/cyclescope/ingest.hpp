#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "cyclescope/cycle_metrics.hpp"
#include "cyclescope/errors.hpp"

namespace cyclescope {

// Action-level CSV, header session_id,period,subject_id,action. Within a
// session, periods must be contiguous from 1 and every subject must act
// exactly once per period; states are built by counting actions. The
// caller-supplied game_id is stamped on every trajectory.
std::vector<Trajectory> parse_actions(std::istream& in, int game_id = -1);

// State-level CSV, header session_id,period,n_R,n_P,n_S,n_D. Periods must be
// contiguous from 1 and the row sum (population size) constant per session.
std::vector<Trajectory> parse_states(std::istream& in, int game_id = -1);

// Inverse of parse_states for canonical input: one row per period, sessions
// in input order.
void write_states_csv(std::ostream& out, std::span<const Trajectory> trajectories);

}  // namespace cyclescope
