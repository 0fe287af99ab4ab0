#pragma once

#include <array>

#include "metapop/equilibria.hpp"
#include "metapop/model.hpp"
#include "metapop/region_map.hpp"

namespace metapop {

// One of the 3x3 affine pieces of the sawtooth phase plane. Piece indices:
// 0 = below 1/4, 1 = between the breakpoints, 2 = above 3/4. Rectangles are
// open at the breakpoint lines and tile the positive quadrant up to them.
struct PieceCell {
  int px = 0;
  int py = 0;
  double x_lo = 0.0, x_hi = 0.0;
  double y_lo = 0.0, y_hi = 0.0;
};

std::array<PieceCell, 9> sawtooth_piece_cells();

// Every nonnegative stationary solution of the sawtooth system, found by
// solving the 2x2 linear stationarity system of each piece cell and keeping
// solutions that land inside their cell. Solutions on a breakpoint line are
// kept with the kink flag (the system is continuous there); singular but
// consistent cells are reported as degenerate-family warnings.
EquilibriumSet sawtooth_equilibria_exact(const NormalizedParams& n);

// Closed-form iff-condition for the origin being the only stationary
// solution of the sawtooth system. Requires gamma in (0,1/2).
bool thm_sawtooth_predicate(const NormalizedParams& n);

// Exact equilibrium counts over an (alpha, beta) grid at fixed gamma.
RegionMap sawtooth_region_counts(double gamma, const AxisSpec& alpha_axis,
                                 const AxisSpec& beta_axis);

}  // namespace metapop
