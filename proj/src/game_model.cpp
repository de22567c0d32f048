#include "cyclescope/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cyclescope/errors.hpp"

namespace cyclescope {
namespace {

constexpr double kNashTol = 1e-9;

// Solves a dense linear system in place by Gaussian elimination with partial
// pivoting. Returns false if a pivot is negligible relative to the matrix
// scale (singular system).
bool solve_linear(std::vector<std::vector<double>>& a, std::vector<double>& rhs) {
  const std::size_t n = rhs.size();
  double scale = 1.0;
  for (const auto& row : a)
    for (double v : row) scale = std::max(scale, std::fabs(v));
  const double pivot_tol = 1e-12 * scale;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (std::fabs(a[pivot][col]) < pivot_tol) return false;
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= a[i][i];
  return true;
}

}  // namespace

GameSpec GameSpec::from_id(int game_id) {
  if (game_id < 0 || game_id > 3) {
    throw ConfigError("game_id must be in 0..3, got " + std::to_string(game_id));
  }
  GameSpec spec;
  spec.game_id = game_id;
  spec.stability = game_id < 2 ? Stability::unstable : Stability::stable;
  spec.pay_scale = (game_id % 2 == 1) ? PayScale::high : PayScale::low;
  if (spec.stability == Stability::unstable) {
    spec.a = 90.0;
    spec.b = 120.0;
  } else {
    spec.a = 60.0;
    spec.b = 150.0;
  }
  spec.c = 20.0;
  spec.d = 90.0;
  return spec;
}

GameSpec GameSpec::custom(double a, double b, double c, double d,
                          PayScale pay_scale, int game_id) {
  GameSpec spec;
  spec.a = a;
  spec.b = b;
  spec.c = c;
  spec.d = d;
  spec.pay_scale = pay_scale;
  spec.game_id = game_id;
  return spec;
}

bool is_valid_profile(const MixedProfile& p, double tol) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= -tol && v <= 1.0 + tol)) return false;
    sum += v;
  }
  return std::fabs(sum - 1.0) <= tol;
}

PayoffMatrix build_rpsd_matrix(const GameSpec& s) {
  PayoffMatrix m;
  m.cells = {{{s.a, 0.0, s.b, s.c},
              {s.b, s.a, 0.0, s.c},
              {0.0, s.b, s.a, s.c},
              {s.d, s.d, s.d, 0.0}}};
  return m;
}

std::array<double, 4> expected_payoffs(const PayoffMatrix& m,
                                       const MixedProfile& opponent) {
  std::array<double, 4> u{};
  for (int i = 0; i < 4; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) acc += m(i, j) * opponent[j];
    u[i] = acc;
  }
  return u;
}

double profile_payoff(const PayoffMatrix& m, const MixedProfile& p,
                      const MixedProfile& q) {
  const auto u = expected_payoffs(m, q);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) acc += p[i] * u[i];
  return acc;
}

std::vector<MixedProfile> find_symmetric_nash(const PayoffMatrix& m) {
  std::vector<MixedProfile> found;
  for (int mask = 1; mask < 16; ++mask) {
    std::vector<int> support;
    for (int i = 0; i < 4; ++i) {
      if (mask & (1 << i)) support.push_back(i);
    }
    const std::size_t k = support.size();
    // Unknowns: sigma over the support, then the common payoff v.
    // Rows: indifference of each support strategy, then normalization.
    std::vector<std::vector<double>> a(k + 1, std::vector<double>(k + 1, 0.0));
    std::vector<double> rhs(k + 1, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) a[r][c] = m(support[r], support[c]);
      a[r][k] = -1.0;
    }
    for (std::size_t c = 0; c < k; ++c) a[k][c] = 1.0;
    rhs[k] = 1.0;
    if (!solve_linear(a, rhs)) continue;

    MixedProfile sigma{0.0, 0.0, 0.0, 0.0};
    bool feasible = true;
    for (std::size_t c = 0; c < k; ++c) {
      if (rhs[c] < -kNashTol) {
        feasible = false;
        break;
      }
      sigma[support[c]] = std::max(0.0, rhs[c]);
    }
    if (!feasible) continue;
    const double v = rhs[k];
    const auto u = expected_payoffs(m, sigma);
    const bool best_response =
        std::all_of(u.begin(), u.end(), [&](double ui) { return ui <= v + kNashTol; });
    if (!best_response) continue;
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const MixedProfile& q) {
      for (int i = 0; i < 4; ++i) {
        if (std::fabs(q[i] - sigma[i]) > kNashTol) return false;
      }
      return true;
    });
    if (!duplicate) found.push_back(sigma);
  }
  return found;
}

}  // namespace cyclescope
