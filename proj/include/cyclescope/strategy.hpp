#pragma once

#include <array>
#include <optional>

namespace cyclescope {

// The four pure strategies of the Rock-Paper-Scissors-Dumb game.
// Index order (R, P, S, D) is fixed; every 4-vector in the library uses it.
enum class Strategy : int { R = 0, P = 1, S = 2, D = 3 };

inline constexpr std::array<Strategy, 4> kStrategies{Strategy::R, Strategy::P,
                                                     Strategy::S, Strategy::D};

constexpr int index_of(Strategy s) { return static_cast<int>(s); }

constexpr char to_char(Strategy s) {
  constexpr char names[] = {'R', 'P', 'S', 'D'};
  return names[index_of(s)];
}

constexpr std::optional<Strategy> strategy_from_char(char c) {
  switch (c) {
    case 'R': return Strategy::R;
    case 'P': return Strategy::P;
    case 'S': return Strategy::S;
    case 'D': return Strategy::D;
    default: return std::nullopt;
  }
}

}  // namespace cyclescope
