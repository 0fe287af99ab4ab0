#include "metapop/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metapop/util.hpp"

namespace metapop {

namespace {

// Slope that never throws: at a sawtooth kink take the right-hand piece.
double safe_slope(const ReactionKind& r, double s) {
  if (r.kind == ReactionKind::Sawtooth) {
    if (s < kSawtoothKinkLo) return -1.0;
    if (s < kSawtoothKinkHi) return 1.0;
    return -1.0;
  }
  return reaction_deriv(r, s);
}

double residual_norm(const NormalizedParams& n, const ReactionKind& rx,
                     const ReactionKind& ry, State s) {
  State f = vector_field(n, rx, ry, s);
  return std::max(std::fabs(f.x), std::fabs(f.y));
}

// Damped Newton on the full 2-D stationarity system. Returns the best point
// reached; never moves uphill.
State newton_polish(const NormalizedParams& n, const ReactionKind& rx,
                    const ReactionKind& ry, State s, int max_iters = 60) {
  double best = residual_norm(n, rx, ry, s);
  for (int it = 0; it < max_iters && best > 1e-15; ++it) {
    Mat2 j{-1.0 + n.alpha * safe_slope(rx, s.x), n.gamma, 1.0 / n.gamma,
           -1.0 + n.beta * safe_slope(ry, s.y)};
    double det = j.det();
    if (std::fabs(det) < 1e-15) break;
    State f = vector_field(n, rx, ry, s);
    State step{(j.a22 * f.x - j.a12 * f.y) / det,
               (-j.a21 * f.x + j.a11 * f.y) / det};
    double t = 1.0;
    bool accepted = false;
    while (t >= 1.0 / 4096.0) {
      State cand{s.x - t * step.x, s.y - t * step.y};
      double res = residual_norm(n, rx, ry, cand);
      if (res < best) {
        s = cand;
        best = res;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return s;
}

}  // namespace

const char* to_string(Stability s) {
  switch (s) {
    case Stability::StableNode: return "stable-node";
    case Stability::StableFocus: return "stable-focus";
    case Stability::Saddle: return "saddle";
    case Stability::UnstableNode: return "unstable-node";
    case Stability::UnstableFocus: return "unstable-focus";
    case Stability::Nonhyperbolic: return "nonhyperbolic";
  }
  return "?";
}

const char* to_string(RegionLabel r) {
  switch (r) {
    case RegionLabel::Origin: return "origin";
    case RegionLabel::Omega1: return "Omega1";
    case RegionLabel::Omega2: return "Omega2";
    case RegionLabel::OmegaHat1: return "OmegaHat1";
    case RegionLabel::OmegaHat2: return "OmegaHat2";
    case RegionLabel::OmegaHat3: return "OmegaHat3";
    case RegionLabel::Other: return "other";
  }
  return "?";
}

Classification classify_stability(const NormalizedParams& n,
                                  const ReactionKind& rx,
                                  const ReactionKind& ry, State e) {
  constexpr double kink_tol = 1e-12;
  auto near_kink = [&](const ReactionKind& r, double s) {
    return r.kind == ReactionKind::Sawtooth &&
           (std::fabs(s - kSawtoothKinkLo) < kink_tol ||
            std::fabs(s - kSawtoothKinkHi) < kink_tol);
  };
  double nan = std::numeric_limits<double>::quiet_NaN();
  if (near_kink(rx, e.x) || near_kink(ry, e.y))
    return {{nan, 0.0}, {nan, 0.0}, Stability::Nonhyperbolic, true};

  Mat2 j = jacobian(n, rx, ry, e);
  double tr = j.trace();
  double det = j.det();
  double disc = tr * tr - 4.0 * det;
  std::complex<double> e1, e2;
  if (disc >= 0.0) {
    double root = std::sqrt(disc);
    e1 = {(tr - root) / 2.0, 0.0};
    e2 = {(tr + root) / 2.0, 0.0};
  } else {
    double root = std::sqrt(-disc);
    e1 = {tr / 2.0, -root / 2.0};
    e2 = {tr / 2.0, root / 2.0};
  }

  constexpr double hyp_tol = 1e-9;
  double re1 = e1.real(), re2 = e2.real();
  Stability st;
  if (std::fabs(re1) < hyp_tol || std::fabs(re2) < hyp_tol)
    st = Stability::Nonhyperbolic;
  else if (re1 < 0.0 && re2 < 0.0)
    st = disc >= 0.0 ? Stability::StableNode : Stability::StableFocus;
  else if (re1 > 0.0 && re2 > 0.0)
    st = disc >= 0.0 ? Stability::UnstableNode : Stability::UnstableFocus;
  else
    st = Stability::Saddle;
  return {e1, e2, st, false};
}

Classification classify_stability(const NormalizedParams& n,
                                  const ReactionKind& r, State e) {
  return classify_stability(n, r, r, e);
}

RegionLabel locate_region(State e, double gamma) {
  if (std::fabs(e.x) < 1e-10 && std::fabs(e.y) < 1e-10)
    return RegionLabel::Origin;
  if (!(gamma > 0.0 && gamma < 0.5)) return RegionLabel::Other;
  double x = e.x, y = e.y;
  if (x > gamma / 2.0 && x < gamma && y > x / gamma && y < 1.0)
    return RegionLabel::Omega1;
  if (x > 0.5 && x < 1.0 && y > 1.0 / (2.0 * gamma) && y < x / gamma)
    return RegionLabel::Omega2;
  if (x > 0.0 && x < gamma && y > 0.5 && y < 1.0 && y > x / gamma)
    return RegionLabel::OmegaHat1;
  if (x > 0.5 && x < 1.0 && y > 1.0 && y < x / gamma)
    return RegionLabel::OmegaHat2;
  if (x > 0.5 && x < 1.0 && y > 0.0 && y < 0.5) return RegionLabel::OmegaHat3;
  return RegionLabel::Other;
}

EquilibriumSet find_equilibria(const NormalizedParams& n,
                               const ReactionKind& rx, const ReactionKind& ry,
                               const SolverOptions& opts) {
  if (opts.bracket_grid < 1000)
    throw std::invalid_argument("bracket_grid must be at least 1000");
  if (!(opts.root_tol > 0.0 && opts.root_tol < opts.dedup_tol))
    throw std::invalid_argument("need 0 < root_tol < dedup_tol");

  auto g = [&](double x) {
    return nullcline_y_residual(n, ry, {x, nullcline_x(n, rx, x)});
  };

  EquilibriumSet out;

  // Scan the reduced scalar system over the x window.
  std::vector<double> roots;
  double lo = opts.x_window_lo, hi = opts.x_window_hi;
  const int nn = opts.bracket_grid;
  double h = (hi - lo) / nn;
  std::vector<double> gv(nn + 1);
  for (int i = 0; i <= nn; ++i) gv[i] = g(i == nn ? hi : lo + i * h);

  // Runs of nodes where g sits at rounding level are stationary segments
  // (the piecewise-linear reaction admits those on singular parameter
  // sets); report them and keep the endpoints as representatives. Isolated
  // negligible nodes are ordinary roots.
  double gscale = std::max({1.0, n.alpha, n.beta});
  auto negligible = [&](int i) { return std::fabs(gv[i]) < 1e-13 * gscale; };
  std::vector<char> consumed(nn + 1, 0);
  for (int i = 0; i <= nn;) {
    if (!negligible(i)) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 <= nn && negligible(j + 1)) ++j;
    if (j - i >= 2) {
      for (int k = i; k <= j; ++k) consumed[k] = 1;
      roots.push_back(lo + i * h);
      roots.push_back(j == nn ? hi : lo + j * h);
      out.warnings.push_back(
          "degenerate family: stationarity holds on x in [" +
          g17(lo + i * h) + ", " + g17(j == nn ? hi : lo + j * h) +
          "]; reporting the segment endpoints");
    } else {
      for (int k = i; k <= j; ++k) roots.push_back(lo + k * h);
    }
    i = j + 1;
  }

  // Bracket and bisect sign changes outside consumed stretches.
  for (int i = 0; i < nn; ++i) {
    if (consumed[i] || consumed[i + 1]) continue;
    double ga = gv[i], gb = gv[i + 1];
    if (!((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0))) continue;
    double u = lo + i * h;
    double v = i + 1 == nn ? hi : lo + (i + 1) * h;
    double gu = ga;
    while (v - u > opts.root_tol) {
      double m = 0.5 * (u + v);
      double gm = g(m);
      if (gm == 0.0) {
        u = v = m;
        break;
      }
      if ((gu < 0.0) == (gm < 0.0)) {
        u = m;
        gu = gm;
      } else {
        v = m;
      }
    }
    roots.push_back(0.5 * (u + v));
  }

  std::sort(roots.begin(), roots.end());

  // Merge scan roots that cannot be told apart at dedup_tol.
  std::vector<double> merged;
  for (double x : roots) {
    if (!merged.empty() && x - merged.back() < opts.dedup_tol) {
      if (x - merged.back() > 10.0 * opts.root_tol)
        out.warnings.push_back("degenerate root pair near x = " +
                               g17(merged.back()) + " merged at dedup_tol");
      continue;
    }
    merged.push_back(x);
  }

  std::vector<State> points;
  points.push_back({0.0, 0.0});  // the origin is stationary for every f(0)=0
  for (double x : merged) {
    State s = newton_polish(n, rx, ry, {x, nullcline_x(n, rx, x)});
    if (residual_norm(n, rx, ry, s) > 1e-10) continue;
    if (s.x < -1e-12 || s.y < -1e-12) continue;
    bool dup = false;
    for (const State& q : points) {
      double d = std::max(std::fabs(q.x - s.x), std::fabs(q.y - s.y));
      if (d < opts.dedup_tol) {
        dup = true;
        break;
      }
    }
    if (!dup) points.push_back(s);
  }

  std::sort(points.begin(), points.end(), [](State a, State b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });

  out.points.reserve(points.size());
  for (State s : points) {
    Classification c = classify_stability(n, rx, ry, s);
    out.points.push_back({s, c.eig1, c.eig2, c.stability,
                          locate_region(s, n.gamma), c.at_kink});
  }
  return out;
}

EquilibriumSet find_equilibria(const NormalizedParams& n, const ReactionKind& r,
                               const SolverOptions& opts) {
  return find_equilibria(n, r, r, opts);
}

}  // namespace metapop
