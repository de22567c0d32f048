#pragma once

#include <array>

#include "cyclescope/state_space.hpp"

namespace cyclescope {

// Published game-level results from the four RPSD experiment treatments.
// The raw experimental data is not available, so these grids serve as
// internal-consistency fixtures: the 16 rows below are fully determined by
// six independent bivector components per game, and the strength column by
// the k=1 rows.

// Mean angular momentum per setting and game, in 1e-3 units.
struct ReferenceMeanRow {
  int k;
  int game;
  double lx, ly, lz;
};

inline constexpr std::array<ReferenceMeanRow, 16> kReferenceMeanGrid{{
    {1, 0, 4.5, 4.0, 5.2},   {1, 1, 6.7, 8.0, 6.4},
    {1, 2, 3.9, 4.2, 3.3},   {1, 3, 5.2, 5.5, 4.2},
    {2, 0, 0.5, -0.7, 4.5},  {2, 1, -1.3, 0.3, 6.7},
    {2, 2, -0.3, 0.7, 3.9},  {2, 3, -0.3, 1.0, 5.2},
    {3, 0, 1.2, -4.0, 0.5},  {3, 1, -1.5, -8.0, -1.3},
    {3, 2, -1.0, -4.2, -0.3}, {3, 3, -1.3, -5.5, -0.3},
    {4, 0, 5.2, 0.7, 1.2},   {4, 1, 6.4, -0.3, -1.5},
    {4, 2, 3.3, -0.7, -1.0}, {4, 3, 4.2, -1.0, -1.3},
}};

// |L| per game from the k=1 rows, in 1e-3 units.
inline constexpr std::array<double, 4> kReferenceStrength{7.9, 12.2, 6.6, 8.7};

// Pooled per-transition sample count per game.
inline constexpr std::array<int, 4> kReferencePptCounts{237, 217, 237, 237};

// (first-half, second-half) combined-scale sample counts per game.
inline constexpr std::array<std::array<int, 2>, 4> kReferenceHalfCounts{{
    {{351, 351}}, {{351, 321}}, {{351, 351}}, {{351, 351}}}};

// The six independent components behind a game's reference grid, read from
// its k=1..3 rows (absolute units, not 1e-3).
Bivector6 reference_bivector(int game);

// Reference grid row lookup (k in 1..4, game in 0..3).
const ReferenceMeanRow& reference_mean_row(int k, int game);

}  // namespace cyclescope
