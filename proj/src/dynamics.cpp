#include "metapop/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "metapop/certificates.hpp"
#include "metapop/util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace metapop {

namespace {

constexpr double kMinStep = 1e-14;
constexpr double kDivergeNorm = 1e9;

double inf_norm(State s) { return std::max(std::fabs(s.x), std::fabs(s.y)); }

State rk4_step(const Rhs& rhs, double t, State y, double h) {
  State k1 = rhs(t, y);
  State k2 = rhs(t + h / 2.0, y + (h / 2.0) * k1);
  State k3 = rhs(t + h / 2.0, y + (h / 2.0) * k2);
  State k4 = rhs(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dormand-Prince 5(4) pair; returns the 5th-order step and its embedded
// error estimate.
void dopri_step(const Rhs& rhs, double t, State y, double h, State& y5,
                State& err) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  State k1 = rhs(t, y);
  State k2 = rhs(t + c2 * h, y + h * (1.0 / 5) * k1);
  State k3 = rhs(t + c3 * h, y + (h * 3.0 / 40) * k1 + (h * 9.0 / 40) * k2);
  State k4 = rhs(t + c4 * h, y + (h * 44.0 / 45) * k1 + (h * -56.0 / 15) * k2 +
                                 (h * 32.0 / 9) * k3);
  State k5 = rhs(t + c5 * h, y + (h * 19372.0 / 6561) * k1 +
                                 (h * -25360.0 / 2187) * k2 +
                                 (h * 64448.0 / 6561) * k3 +
                                 (h * -212.0 / 729) * k4);
  State k6 = rhs(t + h, y + (h * 9017.0 / 3168) * k1 + (h * -355.0 / 33) * k2 +
                            (h * 46732.0 / 5247) * k3 + (h * 49.0 / 176) * k4 +
                            (h * -5103.0 / 18656) * k5);
  y5 = y + (h * 35.0 / 384) * k1 + (h * 500.0 / 1113) * k3 +
       (h * 125.0 / 192) * k4 + (h * -2187.0 / 6784) * k5 +
       (h * 11.0 / 84) * k6;
  State k7 = rhs(t + h, y5);
  // Difference of the 5th- and 4th-order weights.
  err = (h * 71.0 / 57600) * k1 + (h * -71.0 / 16695) * k3 +
        (h * 71.0 / 1920) * k4 + (h * -17253.0 / 339200) * k5 +
        (h * 22.0 / 525) * k6 + (h * -1.0 / 40) * k7;
}

struct StallDetector {
  State anchor;
  double anchor_t = 0.0;
  double radius;
  double window;

  StallDetector(State s0, double r, double w)
      : anchor(s0), radius(r), window(w) {}

  // True when the state has stopped moving for a full window.
  bool update(double t, State s) {
    if (inf_norm(s - anchor) > radius) {
      anchor = s;
      anchor_t = t;
      return false;
    }
    return t - anchor_t >= window;
  }
};

}  // namespace

Trajectory integrate_rhs(const Rhs& rhs, State s0, const IntegratorOptions& opt,
                         bool store,
                         const std::function<void(double, State)>& observer) {
  Trajectory tr;
  double t = 0.0;
  State y = s0;
  if (store) {
    tr.times.push_back(t);
    tr.states.push_back(y);
  }
  if (observer) observer(t, y);

  StallDetector stall(y, opt.convergence_radius, opt.stall_window);
  double h = opt.method == IntegrationMethod::Rk4Fixed
                 ? opt.step
                 : std::min({opt.max_step, 1e-2, opt.t_max});

  while (t < opt.t_max) {
    double hs = std::min(h, opt.t_max - t);
    State y_next;
    if (opt.method == IntegrationMethod::Rk4Fixed) {
      y_next = rk4_step(rhs, t, y, hs);
    } else {
      State err;
      dopri_step(rhs, t, y, hs, y_next, err);
      double sx = opt.abs_tol +
                  opt.rel_tol * std::max(std::fabs(y.x), std::fabs(y_next.x));
      double sy = opt.abs_tol +
                  opt.rel_tol * std::max(std::fabs(y.y), std::fabs(y_next.y));
      double ratio = std::sqrt(((err.x / sx) * (err.x / sx) +
                                (err.y / sy) * (err.y / sy)) /
                               2.0);
      if (!std::isfinite(ratio) || ratio > 1.0) {
        double shrink = std::isfinite(ratio)
                            ? std::max(0.9 * std::pow(ratio, -0.2), 0.2)
                            : 0.2;
        h = hs * shrink;
        if (h < kMinStep) {
          tr.terminal = TerminalKind::Diverged;
          tr.t_end = t;
          tr.diagnostics = "step underflow at t = " + g17(t);
          return tr;
        }
        continue;
      }
      double grow = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
      h = std::min(hs * std::clamp(grow, 0.2, 5.0), opt.max_step);
    }

    t += hs;
    y = y_next;
    if (!std::isfinite(y.x) || !std::isfinite(y.y) ||
        inf_norm(y) > kDivergeNorm) {
      tr.terminal = TerminalKind::Diverged;
      tr.t_end = t;
      tr.diagnostics = "state blew up at t = " + g17(t);
      return tr;
    }
    if (store) {
      tr.times.push_back(t);
      tr.states.push_back(y);
    }
    if (observer) observer(t, y);

    if (stall.update(t, y)) {
      if (inf_norm(rhs(t, y)) < opt.residual_tol) {
        tr.terminal = TerminalKind::Converged;
        tr.terminal_point = y;
        tr.t_end = t;
        return tr;
      }
      stall.anchor = y;  // moving slowly but not stationary; keep going
      stall.anchor_t = t;
    }
  }
  tr.terminal = TerminalKind::TMaxReached;
  tr.terminal_point = y;
  tr.t_end = t;
  return tr;
}

Trajectory integrate(const NormalizedParams& n, const ReactionKind& r, State s0,
                     const IntegratorOptions& opt) {
  if (s0.x < 0.0 || s0.y < 0.0)
    throw std::domain_error("integrate: initial state must be nonnegative");
  return integrate_rhs([&](double, State s) { return vector_field(n, r, s); },
                       s0, opt);
}

Trajectory integrate_physical(const PatchParams& p, const ReactionKind& r,
                              Coupling coupling, State s0,
                              const IntegratorOptions& opt) {
  if (s0.x < 0.0 || s0.y < 0.0)
    throw std::domain_error("integrate: initial state must be nonnegative");
  return integrate_rhs(
      [&](double, State s) { return vector_field_physical(p, r, s, coupling); },
      s0, opt);
}

InvarianceReport verify_invariance(const PatchParams& p, const ReactionKind& r,
                                   double k, int n_samples,
                                   const IntegratorOptions& opt,
                                   std::uint64_t seed) {
  if (!(k >= p.k1))
    throw std::domain_error("verify_invariance: requires k >= k1");
  InvarianceReport rep;
  rep.n_samples = n_samples;
  rep.seed = seed;
  rep.tolerance = std::max(opt.abs_tol, opt.rel_tol * k) * 100.0;

  std::vector<State> starts(n_samples);
  Rng rng(seed);
  for (int i = 0; i < n_samples; ++i) {
    double u = rng.uniform(0.0, k);
    switch (i % 4) {
      case 0: starts[i] = {u, 0.0}; break;
      case 1: starts[i] = {u, k}; break;
      case 2: starts[i] = {0.0, u}; break;
      default: starts[i] = {k, u}; break;
    }
  }

  std::vector<double> excursions(n_samples, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < n_samples; ++i) {
    double worst = 0.0;
    auto watch = [&](double, State s) {
      double d = std::max({0.0 - s.x, s.x - k, 0.0 - s.y, s.y - k});
      worst = std::max(worst, d);
    };
    integrate_rhs(
        [&](double, State s) {
          return vector_field_physical(p, r, s, Coupling::Standard);
        },
        starts[i], opt, false, watch);
    excursions[i] = worst;
  }

  for (int i = 0; i < n_samples; ++i) {
    rep.max_excursion = std::max(rep.max_excursion, excursions[i]);
    if (excursions[i] > 10.0 * rep.tolerance) rep.violations.push_back(i);
  }
  rep.ok = rep.max_excursion <= rep.tolerance;
  return rep;
}

ExtinctionReport verify_global_extinction(const PatchParams& p, int n_samples,
                                          const IntegratorOptions& opt,
                                          std::uint64_t seed) {
  ExtinctionReport rep;
  rep.n_samples = n_samples;
  rep.seed = seed;
  if (p.a1 == 0.5 && p.a2 == 0.5)
    rep.certificate_holds = check_thm_main(p).holds;
  if (n_samples == 0) return rep;

  std::vector<State> starts(n_samples);
  Rng rng(seed);
  for (int i = 0; i < n_samples; ++i)
    starts[i] = {rng.uniform(0.0, p.k1), rng.uniform(0.0, p.k1)};

  std::vector<char> at_origin(n_samples, 0);
  std::vector<double> residuals(n_samples, 0.0);
  std::vector<double> times(n_samples, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < n_samples; ++i) {
    Trajectory tr = integrate_rhs(
        [&](double, State s) {
          return vector_field_physical(p, ReactionKind::cubic_allee(p.a1), s,
                                       Coupling::Standard);
        },
        starts[i], opt, false);
    State end = tr.terminal_point;
    at_origin[i] = std::hypot(end.x, end.y) < 1e-6 ? 1 : 0;
    residuals[i] = inf_norm(vector_field_physical(
        p, ReactionKind::cubic_allee(p.a1), end, Coupling::Standard));
    times[i] = tr.t_end;
  }

  for (int i = 0; i < n_samples; ++i) {
    if (at_origin[i])
      ++rep.n_converged_to_origin;
    else
      rep.unconverged.push_back(i);
    rep.worst_residual = std::max(rep.worst_residual, residuals[i]);
    rep.max_time_used = std::max(rep.max_time_used, times[i]);
  }
  rep.fraction = static_cast<double>(rep.n_converged_to_origin) / n_samples;
  return rep;
}

BasinReport basin_sample(const NormalizedParams& n, const ReactionKind& r,
                         const std::vector<State>& equilibria, int n_samples,
                         Rect domain, const IntegratorOptions& opt,
                         std::uint64_t seed) {
  BasinReport rep;
  rep.equilibria = equilibria;
  rep.fractions.assign(equilibria.size(), 0.0);
  rep.n_samples = n_samples;
  rep.seed = seed;
  if (n_samples == 0) return rep;

  // Detect stalls a decade tighter than the attribution radius so a settled
  // trajectory is actually inside it.
  IntegratorOptions tight = opt;
  tight.convergence_radius = opt.convergence_radius / 10.0;

  std::vector<State> starts(n_samples);
  Rng rng(seed);
  for (int i = 0; i < n_samples; ++i)
    starts[i] = {rng.uniform(domain.x_lo, domain.x_hi),
                 rng.uniform(domain.y_lo, domain.y_hi)};

  std::vector<int> label(n_samples, -1);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < n_samples; ++i) {
    Trajectory tr = integrate_rhs(
        [&](double, State s) { return vector_field(n, r, s); }, starts[i],
        tight, false);
    if (tr.terminal != TerminalKind::Converged) continue;
    double best = opt.convergence_radius;
    for (size_t e = 0; e < equilibria.size(); ++e) {
      double d = std::hypot(tr.terminal_point.x - equilibria[e].x,
                            tr.terminal_point.y - equilibria[e].y);
      if (d <= best) {
        best = d;
        label[i] = static_cast<int>(e);
      }
    }
  }

  int unresolved = 0;
  for (int i = 0; i < n_samples; ++i) {
    if (label[i] < 0)
      ++unresolved;
    else
      rep.fractions[label[i]] += 1.0 / n_samples;
  }
  rep.unresolved = static_cast<double>(unresolved) / n_samples;
  return rep;
}

std::vector<MixingEntry> perfect_mixing_experiment(
    double k1, double k2, double lambda1, double lambda2,
    const std::vector<double>& D_list, const IntegratorOptions& opt) {
  for (size_t i = 1; i < D_list.size(); ++i)
    if (!(D_list[i] > D_list[i - 1]))
      throw std::domain_error("perfect_mixing_experiment: D_list must increase");
  double formula = perfect_mixing_capacity(k1, k2, lambda1, lambda2);
  std::vector<MixingEntry> out(D_list.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (size_t i = 0; i < D_list.size(); ++i) {
    PatchParams p(D_list[i], lambda1, lambda2, k1, k2);
    // Strong diffusion makes the equilibrium stiff: per-step local error is
    // amplified by D in the residual, so tighten tolerances accordingly or
    // the stall detector never sees a quiet state.
    IntegratorOptions o = opt;
    double stiff = std::max(1.0, D_list[i]);
    o.rel_tol = std::min(opt.rel_tol, 1e-9 / stiff);
    o.abs_tol = std::min(opt.abs_tol, 1e-11 / stiff);
    Trajectory tr = integrate_physical(p, ReactionKind::logistic(),
                                       Coupling::Standard, {p.k1, p.k2}, o);
    double total = tr.terminal_point.x + tr.terminal_point.y;
    out[i] = {D_list[i], total, formula,
              std::fabs(total - formula) / std::fabs(formula),
              tr.terminal == TerminalKind::Converged};
  }
  return out;
}

}  // namespace metapop
