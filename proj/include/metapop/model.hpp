#pragma once

#include <stdexcept>
#include <string>

namespace metapop {

// Densities of the two patches. Normalized or physical depending on context.
struct State {
  double x = 0.0;
  double y = 0.0;
};

inline State operator+(State a, State b) { return {a.x + b.x, a.y + b.y}; }
inline State operator-(State a, State b) { return {a.x - b.x, a.y - b.y}; }
inline State operator*(double c, State s) { return {c * s.x, c * s.y}; }

// Bistable growth nonlinearity. The cubic has roots at 0, a, 1; the sawtooth
// caricature is its continuous piecewise-linear stand-in with breakpoints at
// 1/4 and 3/4; the logistic variant is monostable and used for the
// perfect-mixing experiment.
struct ReactionKind {
  enum Kind { CubicAllee, Sawtooth, Logistic };

  Kind kind = CubicAllee;
  double a = 0.5;  // viability threshold, cubic only

  static ReactionKind cubic_allee(double a = 0.5) {
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("cubic viability a must lie in (0,1)");
    return {CubicAllee, a};
  }
  static ReactionKind sawtooth() { return {Sawtooth, 0.5}; }
  static ReactionKind logistic() { return {Logistic, 0.5}; }
};

constexpr double kSawtoothKinkLo = 0.25;
constexpr double kSawtoothKinkHi = 0.75;

// Growth value f(s). Sawtooth values at the breakpoints are the common
// one-sided limits, so f stays continuous there.
inline double reaction_eval(const ReactionKind& r, double s) {
  switch (r.kind) {
    case ReactionKind::CubicAllee:
      return s * (1.0 - s) * (s - r.a);
    case ReactionKind::Sawtooth:
      if (s < kSawtoothKinkLo) return -s;
      if (s > kSawtoothKinkHi) return 1.0 - s;
      return s - 0.5;
    case ReactionKind::Logistic:
      return s * (1.0 - s);
  }
  return 0.0;
}

// f'(s). The sawtooth derivative does not exist at the breakpoints.
inline double reaction_deriv(const ReactionKind& r, double s) {
  switch (r.kind) {
    case ReactionKind::CubicAllee:
      return -3.0 * s * s + 2.0 * (1.0 + r.a) * s - r.a;
    case ReactionKind::Sawtooth:
      if (s == kSawtoothKinkLo || s == kSawtoothKinkHi)
        throw std::domain_error("sawtooth derivative undefined at kink s = " +
                                std::to_string(s));
      return (s < kSawtoothKinkLo || s > kSawtoothKinkHi) ? -1.0 : 1.0;
    case ReactionKind::Logistic:
      return 1.0 - 2.0 * s;
  }
  return 0.0;
}

// Physical parameters of the two-patch system. The constructor reorders the
// patches so that k2 <= k1 (the orientation all closed-form certificates are
// stated for) and records whether it had to swap.
struct PatchParams {
  double D = 1.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double k1 = 1.0;
  double k2 = 1.0;
  double a1 = 0.5;
  double a2 = 0.5;
  bool swapped = false;

  PatchParams() = default;
  PatchParams(double D_, double l1, double l2, double k1_, double k2_,
              double a1_ = 0.5, double a2_ = 0.5);
};

// Reduced parameters: alpha = lambda1/D, beta = lambda2/D, gamma = k2/k1.
struct NormalizedParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;

  NormalizedParams() = default;
  NormalizedParams(double alpha_, double beta_, double gamma_);
};

// Densities rescale as x = x1/k1, y = x2/k2 and time as tau = D*t, so
// equilibria map one-to-one while trajectories are time-rescaled.
NormalizedParams normalize(const PatchParams& p);
PatchParams denormalize(const NormalizedParams& n, double D, double k1);

struct ReactionMax {
  double argmax = 0.0;
  double value = 0.0;
};

// Closed-form maximum of f on (0,1); supported for the bistable reactions.
ReactionMax reaction_max_unit_interval(const ReactionKind& r);

// Right-hand side of the normalized system:
//   x' = gamma*y - x + alpha*f(x),  y' = x/gamma - y + beta*f(y).
// The two-reaction form covers asymmetric viability thresholds, which only
// exist numerically (no closed-form certificates).
inline State vector_field(const NormalizedParams& n, const ReactionKind& rx,
                          const ReactionKind& ry, State s) {
  return {n.gamma * s.y - s.x + n.alpha * reaction_eval(rx, s.x),
          s.x / n.gamma - s.y + n.beta * reaction_eval(ry, s.y)};
}

inline State vector_field(const NormalizedParams& n, const ReactionKind& r,
                          State s) {
  return vector_field(n, r, r, s);
}

enum class Coupling { Standard, Balanced };

// Right-hand side in physical coordinates. Standard coupling exchanges raw
// densities, balanced coupling exchanges densities relative to capacity.
// Cubic viability thresholds are taken per patch from p.
State vector_field_physical(const PatchParams& p, const ReactionKind& r,
                            State s, Coupling coupling = Coupling::Standard);

struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
};

// Linearization of the normalized system at a state. Throws at sawtooth kinks.
Mat2 jacobian(const NormalizedParams& n, const ReactionKind& rx,
              const ReactionKind& ry, State s);
Mat2 jacobian(const NormalizedParams& n, const ReactionKind& r, State s);

}  // namespace metapop
