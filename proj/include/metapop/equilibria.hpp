#pragma once

#include <complex>
#include <string>
#include <vector>

#include "metapop/model.hpp"

namespace metapop {

struct SolverOptions {
  int bracket_grid = 20000;      // scan subintervals over the x window
  double root_tol = 1e-12;       // bisection tolerance on x
  double dedup_tol = 1e-8;       // minimum separation between distinct roots
  double x_window_lo = -1e-9;    // widen if equilibria outside [0,1] are
  double x_window_hi = 1.0 + 1e-9;  // ever expected
};

enum class Stability {
  StableNode,
  StableFocus,
  Saddle,
  UnstableNode,
  UnstableFocus,
  Nonhyperbolic,
};

// Subsets of the phase plane that can hold nontrivial equilibria when
// gamma < 1/2. Omega_i are the tighter boxes valid for alpha,beta in (0,4);
// OmegaHat_i the a priori ones.
enum class RegionLabel {
  Origin,
  Omega1,
  Omega2,
  OmegaHat1,
  OmegaHat2,
  OmegaHat3,
  Other,
};

const char* to_string(Stability s);
const char* to_string(RegionLabel r);

struct Equilibrium {
  State point;
  std::complex<double> eig1;
  std::complex<double> eig2;
  Stability stability = Stability::Nonhyperbolic;
  RegionLabel region = RegionLabel::Other;
  bool at_kink = false;  // coordinate sits on a sawtooth breakpoint
};

struct EquilibriumSet {
  std::vector<Equilibrium> points;  // sorted by x, then y
  std::vector<std::string> warnings;
};

// First nullcline solved for y: nu_x(x) = (x - alpha*f(x)) / gamma.
inline double nullcline_x(const NormalizedParams& n, const ReactionKind& r,
                          double x) {
  return (x - n.alpha * reaction_eval(r, x)) / n.gamma;
}

// Signed distance from the second nullcline: gamma*y - x - gamma*beta*f(y).
// Zero exactly on the y' = 0 curve.
inline double nullcline_y_residual(const NormalizedParams& n,
                                   const ReactionKind& r, State s) {
  return n.gamma * s.y - s.x - n.gamma * n.beta * reaction_eval(r, s.y);
}

// All nonnegative stationary solutions. Substitutes y = nu_x(x) into the
// second nullcline residual, brackets sign changes of the resulting scalar
// function over the x window, bisects, merges roots closer than dedup_tol
// (reported as a degenerate-root warning), and polishes each candidate with
// damped Newton on the full 2-D system. The origin is always included.
// The (rx, ry) form handles asymmetric viability thresholds.
EquilibriumSet find_equilibria(const NormalizedParams& n,
                               const ReactionKind& rx, const ReactionKind& ry,
                               const SolverOptions& opts = {});
EquilibriumSet find_equilibria(const NormalizedParams& n, const ReactionKind& r,
                               const SolverOptions& opts = {});

struct Classification {
  std::complex<double> eig1;
  std::complex<double> eig2;
  Stability stability = Stability::Nonhyperbolic;
  bool at_kink = false;
};

// Eigenvalues of the linearization and their sign pattern. A real part
// smaller than 1e-9 in magnitude counts as nonhyperbolic; a sawtooth kink at
// the point yields Nonhyperbolic with the kink flag instead of throwing.
Classification classify_stability(const NormalizedParams& n,
                                  const ReactionKind& rx,
                                  const ReactionKind& ry, State e);
Classification classify_stability(const NormalizedParams& n,
                                  const ReactionKind& r, State e);

// Labels a point by the region it falls in; region semantics require
// gamma in (0,1/2), otherwise everything but the origin is Other. Subset
// regions are reported preferentially (Omega_i before OmegaHat_i).
RegionLabel locate_region(State e, double gamma);

}  // namespace metapop
