#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "metapop/equilibria.hpp"
#include "metapop/model.hpp"

namespace metapop {

enum class IntegrationMethod { Rk4Fixed, Rk45Adaptive };

struct IntegratorOptions {
  IntegrationMethod method = IntegrationMethod::Rk45Adaptive;
  double step = 1e-2;     // fixed-step size (rk4)
  double rel_tol = 1e-8;  // adaptive local-error control
  double abs_tol = 1e-10;
  double t_max = 1e4;
  double max_step = 5.0;
  // A trajectory counts as converged once it moves less than
  // convergence_radius over a full stall window and the vector field at the
  // current state is below residual_tol.
  double convergence_radius = 1e-8;
  double stall_window = 10.0;
  double residual_tol = 1e-6;
};

enum class TerminalKind { Converged, TMaxReached, Diverged };

struct Trajectory {
  std::vector<double> times;  // strictly increasing
  std::vector<State> states;
  TerminalKind terminal = TerminalKind::TMaxReached;
  State terminal_point;  // the limit, when terminal == Converged
  double t_end = 0.0;    // time at which integration stopped
  std::string diagnostics;
};

using Rhs = std::function<State(double, State)>;

// Core integrator over an arbitrary right-hand side; the observer (if set)
// sees every accepted step including the initial state.
Trajectory integrate_rhs(const Rhs& rhs, State s0, const IntegratorOptions& opt,
                         bool store = true,
                         const std::function<void(double, State)>& observer = {});

Trajectory integrate(const NormalizedParams& n, const ReactionKind& r, State s0,
                     const IntegratorOptions& opt = {});

Trajectory integrate_physical(const PatchParams& p, const ReactionKind& r,
                              Coupling coupling, State s0,
                              const IntegratorOptions& opt = {});

struct InvarianceReport {
  int n_samples = 0;
  double max_excursion = 0.0;  // largest distance outside [0,k]^2 observed
  double tolerance = 0.0;
  bool ok = false;
  std::vector<int> violations;  // samples exceeding 10x tolerance
  std::uint64_t seed = 0;
};

// Integrates initial conditions on the boundary of [0,k]^2 (physical
// coordinates, k >= k1) and checks that no trajectory leaves the box by more
// than the integrator tolerance.
InvarianceReport verify_invariance(const PatchParams& p, const ReactionKind& r,
                                   double k, int n_samples,
                                   const IntegratorOptions& opt = {},
                                   std::uint64_t seed = 1);

struct ExtinctionReport {
  int n_samples = 0;
  int n_converged_to_origin = 0;
  std::optional<double> fraction;  // absent when n_samples == 0
  double worst_residual = 0.0;     // max terminal vector-field residual
  double max_time_used = 0.0;
  std::vector<int> unconverged;  // sample indices not at the origin
  std::uint64_t seed = 0;
  bool certificate_holds = false;  // thm-main verdict, informational
};

// Samples initial conditions uniformly in [0,k1]^2 and reports the fraction
// whose terminal state lies within 1e-6 of the origin.
ExtinctionReport verify_global_extinction(const PatchParams& p, int n_samples,
                                          const IntegratorOptions& opt = {},
                                          std::uint64_t seed = 1);

struct Rect {
  double x_lo = 0.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 1.0;
};

struct BasinReport {
  std::vector<State> equilibria;
  std::vector<double> fractions;  // aligned with equilibria
  double unresolved = 0.0;        // fractions + unresolved sum to 1
  int n_samples = 0;
  std::uint64_t seed = 0;
};

// Attributes each sampled initial condition to the equilibrium its
// trajectory lands on (within opt.convergence_radius), or to "unresolved".
BasinReport basin_sample(const NormalizedParams& n, const ReactionKind& r,
                         const std::vector<State>& equilibria, int n_samples,
                         Rect domain, const IntegratorOptions& opt = {},
                         std::uint64_t seed = 1);

struct MixingEntry {
  double D = 0.0;
  double total = 0.0;     // simulated asymptotic x1 + x2
  double formula = 0.0;   // large-diffusion limiting capacity
  double rel_gap = 0.0;
  bool converged = false;
};

// Integrates the two-logistic-patch system from (k1, k2) for each diffusion
// value and compares the asymptotic total population with the closed-form
// limiting capacity.
std::vector<MixingEntry> perfect_mixing_experiment(
    double k1, double k2, double lambda1, double lambda2,
    const std::vector<double>& D_list, const IntegratorOptions& opt = {});

}  // namespace metapop
