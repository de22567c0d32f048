#include "cyclescope/state_space.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cyclescope {
namespace {

void check_simplex(const std::array<double, 4>& p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) {
      throw std::domain_error(std::string(what) + ": component outside [0, 1]");
    }
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw std::domain_error(std::string(what) + ": components do not sum to 1");
  }
}

}  // namespace

std::array<double, 4> SocialState::fractions() const {
  const double n = static_cast<double>(population());
  return {counts[0] / n, counts[1] / n, counts[2] / n, counts[3] / n};
}

SocialState make_state(int n_r, int n_p, int n_s, int n_d) {
  if (n_r < 0 || n_p < 0 || n_s < 0 || n_d < 0) {
    throw std::domain_error("SocialState: negative count");
  }
  return SocialState{{n_r, n_p, n_s, n_d}};
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

const std::array<Setting, 4>& settings() {
  static const std::array<Setting, 4> table{{
      {1, {Strategy::R, Strategy::P, Strategy::S}, Strategy::D},
      {2, {Strategy::P, Strategy::S, Strategy::D}, Strategy::R},
      {3, {Strategy::S, Strategy::D, Strategy::R}, Strategy::P},
      {4, {Strategy::D, Strategy::R, Strategy::P}, Strategy::S},
  }};
  return table;
}

const Setting& setting(int k) {
  if (k < 1 || k > 4) throw std::domain_error("setting: k must be in 1..4");
  return settings()[k - 1];
}

Sign expected_sign(int k, int component) {
  if (component < 0 || component > 2) {
    throw std::domain_error("expected_sign: component must be in 0..2");
  }
  static constexpr Sign table[4][3] = {
      {Sign::plus, Sign::plus, Sign::plus},
      {Sign::zero, Sign::zero, Sign::plus},
      {Sign::zero, Sign::minus, Sign::zero},
      {Sign::plus, Sign::zero, Sign::zero},
  };
  if (k < 1 || k > 4) throw std::domain_error("expected_sign: k must be in 1..4");
  return table[k - 1][component];
}

double Bivector6::component(Strategy si, Strategy sj) const {
  const int i = index_of(si), j = index_of(sj);
  if (i == j) return 0.0;
  if (i > j) return -component(sj, si);
  // upper triangle, strategy order (R, P, S, D)
  static constexpr int slot[4][4] = {{-1, 0, 1, 2},
                                     {-1, -1, 3, 4},
                                     {-1, -1, -1, 5},
                                     {-1, -1, -1, -1}};
  const double* parts[6] = {&rp, &rs, &rd, &ps, &pd, &sd};
  return *parts[slot[i][j]];
}

std::uint64_t lattice_size(int n) {
  if (n < 1) throw std::domain_error("lattice_size: n must be >= 1");
  const std::uint64_t m = static_cast<std::uint64_t>(n);
  return (m + 1) * (m + 2) * (m + 3) / 6;
}

std::vector<SocialState> enumerate_lattice(int n) {
  if (n < 1) throw std::domain_error("enumerate_lattice: n must be >= 1");
  std::vector<SocialState> states;
  states.reserve(lattice_size(n));
  for (int r = 0; r <= n; ++r) {
    for (int p = 0; p <= n - r; ++p) {
      for (int s = 0; s <= n - r - p; ++s) {
        states.push_back(SocialState{{r, p, s, n - r - p - s}});
      }
    }
  }
  return states;
}

Point3 project(const std::array<double, 4>& point4, const Setting& k) {
  check_simplex(point4, "project");
  return {point4[index_of(k.axes[0])], point4[index_of(k.axes[1])],
          point4[index_of(k.axes[2])]};
}

Bivector6 bivector(const std::array<double, 4>& from4,
                   const std::array<double, 4>& to4,
                   const std::array<double, 4>& o4) {
  check_simplex(from4, "bivector(from)");
  check_simplex(to4, "bivector(to)");
  check_simplex(o4, "bivector(o)");
  std::array<double, 4> u{}, v{};
  for (int i = 0; i < 4; ++i) {
    u[i] = from4[i] - o4[i];
    v[i] = to4[i] - o4[i];
  }
  const auto part = [&](int i, int j) { return u[i] * v[j] - u[j] * v[i]; };
  return {part(0, 1), part(0, 2), part(0, 3), part(1, 2), part(1, 3), part(2, 3)};
}

Vec3 l_from_bivector(const Bivector6& b, const Setting& k) {
  return {b.component(k.axes[1], k.axes[2]), b.component(k.axes[2], k.axes[0]),
          b.component(k.axes[0], k.axes[1])};
}

void write_lattice_csv(std::ostream& out, std::span<const SocialState> states) {
  out << "n_R,n_P,n_S,n_D\n";
  for (const auto& s : states) {
    out << s.counts[0] << ',' << s.counts[1] << ',' << s.counts[2] << ','
        << s.counts[3] << '\n';
  }
}

}  // namespace cyclescope
