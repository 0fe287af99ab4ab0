#include "metapop/sawtooth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace metapop {

namespace {

// Affine pieces of the sawtooth: f(s) = slope*s + intercept on each range.
struct Piece {
  double slope;
  double intercept;
  double lo;
  double hi;
};

const Piece kPieces[3] = {
    {-1.0, 0.0, 0.0, kSawtoothKinkLo},
    {1.0, -0.5, kSawtoothKinkLo, kSawtoothKinkHi},
    {-1.0, 1.0, kSawtoothKinkHi, std::numeric_limits<double>::infinity()},
};

constexpr double kBreakTol = 1e-12;

// -1: strictly outside, 0: on a breakpoint line, 1: strictly inside.
int piece_membership(int piece, double s) {
  const Piece& p = kPieces[piece];
  if (std::fabs(s - p.lo) <= kBreakTol && piece != 0) return 0;
  if (std::fabs(s - p.hi) <= kBreakTol && piece != 2) return 0;
  if (s > p.lo && s < p.hi) return 1;
  // The low piece starts at 0; admit solver noise just below it.
  if (piece == 0 && s >= -kBreakTol && s < p.hi) return 1;
  return -1;
}

}  // namespace

std::array<PieceCell, 9> sawtooth_piece_cells() {
  std::array<PieceCell, 9> cells;
  int i = 0;
  for (int px = 0; px < 3; ++px)
    for (int py = 0; py < 3; ++py)
      cells[i++] = {px,
                    py,
                    px == 0 ? 0.0 : kPieces[px].lo,
                    kPieces[px].hi,
                    py == 0 ? 0.0 : kPieces[py].lo,
                    kPieces[py].hi};
  return cells;
}

EquilibriumSet sawtooth_equilibria_exact(const NormalizedParams& n) {
  EquilibriumSet out;
  ReactionKind r = ReactionKind::sawtooth();
  const char* names[3] = {"low", "mid", "high"};

  struct Candidate {
    State s;
    bool on_break;
  };
  std::vector<Candidate> found;

  for (int px = 0; px < 3; ++px) {
    for (int py = 0; py < 3; ++py) {
      // Stationarity with affine pieces is linear:
      //   (alpha*mx - 1) x + gamma y          = -alpha*cx
      //   (1/gamma) x     + (beta*my - 1) y   = -beta*cy
      double a11 = n.alpha * kPieces[px].slope - 1.0;
      double a12 = n.gamma;
      double a21 = 1.0 / n.gamma;
      double a22 = n.beta * kPieces[py].slope - 1.0;
      double b1 = -n.alpha * kPieces[px].intercept;
      double b2 = -n.beta * kPieces[py].intercept;
      double det = a11 * a22 - a12 * a21;
      double scale = std::max({std::fabs(a11 * a22), std::fabs(a12 * a21), 1.0});
      if (std::fabs(det) < 1e-13 * scale) {
        // Rows are proportional; a consistent pair means a whole segment of
        // stationary points.
        bool consistent = std::fabs(a11 * b2 - a21 * b1) <= 1e-12 * scale &&
                          std::fabs(a12 * b2 - a22 * b1) <= 1e-12 * scale;
        if (consistent)
          out.warnings.push_back(
              std::string("degenerate family of stationary points in cell (") +
              names[px] + "," + names[py] + ")");
        continue;
      }
      double x = (b1 * a22 - a12 * b2) / det;
      double y = (a11 * b2 - b1 * a21) / det;
      if (x < -kBreakTol || y < -kBreakTol) continue;
      int mx = piece_membership(px, x);
      int my = piece_membership(py, y);
      if (mx < 0 || my < 0) continue;
      found.push_back({{std::max(x, 0.0), std::max(y, 0.0)},
                       mx == 0 || my == 0});
    }
  }

  // Breakpoint solutions are produced by both adjacent cells; keep one.
  std::sort(found.begin(), found.end(), [](const Candidate& a,
                                           const Candidate& b) {
    return a.s.x != b.s.x ? a.s.x < b.s.x : a.s.y < b.s.y;
  });
  std::vector<Candidate> unique;
  for (const Candidate& c : found) {
    if (!unique.empty() &&
        std::fabs(c.s.x - unique.back().s.x) < 1e-10 &&
        std::fabs(c.s.y - unique.back().s.y) < 1e-10) {
      unique.back().on_break = unique.back().on_break || c.on_break;
      continue;
    }
    unique.push_back(c);
  }

  for (const Candidate& c : unique) {
    Classification cl = classify_stability(n, r, c.s);
    out.points.push_back({c.s, cl.eig1, cl.eig2, cl.stability,
                          locate_region(c.s, n.gamma),
                          cl.at_kink || c.on_break});
  }
  return out;
}

bool thm_sawtooth_predicate(const NormalizedParams& n) {
  if (!(n.gamma > 0.0 && n.gamma < 0.5))
    throw std::domain_error("sawtooth predicate requires gamma in (0,1/2)");
  double a = n.alpha, b = n.beta, g = n.gamma;
  bool first = a * (b + 1.0) + b * (4.0 * g - 3.0) < 0.0;
  bool second = a >= 3.0 * g - 1.0
                    ? a * b - 3.0 * a + b < 0.0
                    : a * (2.0 - 3.0 * g) + b * g * (a - 1.0) > 0.0;
  return first && second;
}

RegionMap sawtooth_region_counts(double gamma, const AxisSpec& alpha_axis,
                                 const AxisSpec& beta_axis) {
  RegionMap map;
  map.spec.plane = SweepPlane::NormalizedAlphaBeta;
  map.spec.x_axis = alpha_axis;
  map.spec.y_axis = beta_axis;
  map.spec.gamma = gamma;
  map.spec.reaction = ReactionKind::sawtooth();
  map.spec.classifier = CellClassifier::SawtoothExact;
  map.spec.validate();

  const int nx = alpha_axis.steps, ny = beta_axis.steps;
  map.cells.resize(static_cast<size_t>(nx) * ny);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      NormalizedParams n{map.spec.cell_x(ix), map.spec.cell_y(iy), gamma};
      EquilibriumSet eq = sawtooth_equilibria_exact(n);
      bool degenerate = !eq.warnings.empty();
      for (const Equilibrium& e : eq.points)
        degenerate = degenerate || e.at_kink;
      map.cells[static_cast<size_t>(iy) * nx + ix] = {
          n.alpha, n.beta, static_cast<int>(eq.points.size()), degenerate, {}};
    }
  }
  return map;
}

}  // namespace metapop
