#pragma once

#include <array>
#include <vector>

#include "cyclescope/strategy.hpp"

namespace cyclescope {

enum class PayScale { low, high };
enum class Stability { unstable, stable };

// One RPSD treatment. Payoffs are in Experimental Francs; the pay scale is
// metadata here (the simulator turns it into an effective precision
// multiplier).
struct GameSpec {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  PayScale pay_scale = PayScale::low;
  int game_id = -1;
  Stability stability = Stability::unstable;

  // The 2x2 treatment grid: 0=(unstable,low) 1=(unstable,high)
  // 2=(stable,low) 3=(stable,high). Unstable payoffs (90,120,20,90),
  // stable (60,150,20,90).
  static GameSpec from_id(int game_id);

  static GameSpec custom(double a, double b, double c, double d,
                         PayScale pay_scale = PayScale::low, int game_id = -1);
};

// Row player's payoff grid, strategy order (R, P, S, D) on both axes.
struct PayoffMatrix {
  std::array<std::array<double, 4>, 4> cells{};

  double operator()(Strategy row, Strategy col) const {
    return cells[index_of(row)][index_of(col)];
  }
  double operator()(int row, int col) const { return cells[row][col]; }
};

// Probability vector over (R, P, S, D).
using MixedProfile = std::array<double, 4>;

bool is_valid_profile(const MixedProfile& p, double tol = 1e-12);

//   R | a 0 b c
//   P | b a 0 c
//   S | 0 b a c
//   D | d d d 0
PayoffMatrix build_rpsd_matrix(const GameSpec& spec);

// Component i: payoff of pure strategy i against the opponent mixture.
std::array<double, 4> expected_payoffs(const PayoffMatrix& m,
                                       const MixedProfile& opponent);

// Payoff of mixture p against mixture q.
double profile_payoff(const PayoffMatrix& m, const MixedProfile& p,
                      const MixedProfile& q);

// All symmetric Nash equilibria found by support enumeration: for each of
// the 15 nonempty supports, solve the indifference + normalization system,
// keep feasible solutions that survive a best-response check (tolerance
// 1e-9), and deduplicate profiles from nested supports. Singular systems are
// skipped; an empty result is a valid return.
std::vector<MixedProfile> find_symmetric_nash(const PayoffMatrix& m);

}  // namespace cyclescope
