#include "cyclescope/reference_tables.hpp"

#include <stdexcept>

namespace cyclescope {

const ReferenceMeanRow& reference_mean_row(int k, int game) {
  for (const auto& row : kReferenceMeanGrid) {
    if (row.k == k && row.game == game) return row;
  }
  throw std::domain_error("reference_mean_row: k must be 1..4 and game 0..3");
}

Bivector6 reference_bivector(int game) {
  const auto& k1 = reference_mean_row(1, game);
  const auto& k2 = reference_mean_row(2, game);
  const auto& k3 = reference_mean_row(3, game);
  // k1 axes (R,P,S): L = (B_PS, B_SR, B_RP); k2 axes (P,S,D): L_x = B_SD,
  // L_y = B_DP; k3 axes (S,D,R): L_x = B_DR.
  Bivector6 b;
  b.ps = k1.lx * 1e-3;
  b.rs = -k1.ly * 1e-3;
  b.rp = k1.lz * 1e-3;
  b.sd = k2.lx * 1e-3;
  b.pd = -k2.ly * 1e-3;
  b.rd = -k3.lx * 1e-3;
  return b;
}

}  // namespace cyclescope
