#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cyclescope/strategy.hpp"

namespace cyclescope {

// One node of the social-state lattice: strategy counts over the population.
// The population size is the coordinate sum, so the sum-N invariant holds by
// construction.
struct SocialState {
  std::array<int, 4> counts{};

  int population() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  int count(Strategy s) const { return counts[index_of(s)]; }

  // Fractions (x, y, z, u) of the four strategies.
  std::array<double, 4> fractions() const;

  friend bool operator==(const SocialState&, const SocialState&) = default;
};

SocialState make_state(int n_r, int n_p, int n_s, int n_d);

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  double norm() const;
};

Vec3 cross(Vec3 a, Vec3 b);

using Point3 = Vec3;

// One of the four coordinate assignments: three strategies on the x/y/z axes
// of a trirectangular tetrahedron, the fourth at the origin.
//   k1 = (R,P,S; D)   k2 = (P,S,D; R)   k3 = (S,D,R; P)   k4 = (D,R,P; S)
struct Setting {
  int id = 0;
  std::array<Strategy, 3> axes{};
  Strategy origin = Strategy::D;
};

const std::array<Setting, 4>& settings();
const Setting& setting(int k);  // k in 1..4

enum class Sign { plus, minus, zero };

// Hypothesized sign of the mean L component under setting k if net rotation
// runs R->P->S->R in the RPS plane:
//   k1: (+,+,+)   k2: (0,0,+)   k3: (0,-,0)   k4: (+,0,0)
Sign expected_sign(int k, int component);

// The six antisymmetric components of a 4D transition pair, upper triangle
// in the order (RP, RS, RD, PS, PD, SD). Every setting's 3D L vector is a
// signed selection of these, so storing them once keeps the four settings
// consistent by construction.
struct Bivector6 {
  double rp = 0.0, rs = 0.0, rd = 0.0, ps = 0.0, pd = 0.0, sd = 0.0;

  // Signed lookup for an arbitrary ordered pair: component(j, i) == -component(i, j).
  double component(Strategy i, Strategy j) const;

  friend Bivector6 operator+(const Bivector6& a, const Bivector6& b) {
    return {a.rp + b.rp, a.rs + b.rs, a.rd + b.rd,
            a.ps + b.ps, a.pd + b.pd, a.sd + b.sd};
  }
  friend Bivector6 operator*(double s, const Bivector6& b) {
    return {s * b.rp, s * b.rs, s * b.rd, s * b.ps, s * b.pd, s * b.sd};
  }
};

// Number of lattice states for population n: (n+1)(n+2)(n+3)/6.
std::uint64_t lattice_size(int n);

// All states with coordinate sum n, ordered lexicographically by
// (n_R, n_P, n_S). Throws std::domain_error for n < 1.
std::vector<SocialState> enumerate_lattice(int n);

// Drops the origin strategy's coordinate: (p[x_axis], p[y_axis], p[z_axis]).
// Throws std::domain_error unless point4 is a simplex point (components in
// [0,1], sum 1 within 1e-12).
Point3 project(const std::array<double, 4>& point4, const Setting& k);

// B_ij = (from-o)_i (to-o)_j - (from-o)_j (to-o)_i over the six ordered
// strategy pairs. All three arguments must be simplex points.
Bivector6 bivector(const std::array<double, 4>& from4,
                   const std::array<double, 4>& to4,
                   const std::array<double, 4>& o4);

// Reads the 3D angular momentum of setting k out of the bivector: with axis
// strategies (p,q,r), L = (B_qr, B_rp, B_pq). Identical arithmetic to the
// cross product of the projected displacement vectors.
Vec3 l_from_bivector(const Bivector6& b, const Setting& k);

// CSV with header n_R,n_P,n_S,n_D.
void write_lattice_csv(std::ostream& out, std::span<const SocialState> states);

}  // namespace cyclescope
