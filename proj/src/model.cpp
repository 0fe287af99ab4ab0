#include "metapop/model.hpp"

#include <cmath>
#include <utility>

namespace metapop {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

PatchParams::PatchParams(double D_, double l1, double l2, double k1_,
                         double k2_, double a1_, double a2_)
    : D(D_), lambda1(l1), lambda2(l2), k1(k1_), k2(k2_), a1(a1_), a2(a2_) {
  require(std::isfinite(D) && D > 0.0, "D must be positive");
  require(std::isfinite(lambda1) && lambda1 > 0.0, "lambda1 must be positive");
  require(std::isfinite(lambda2) && lambda2 > 0.0, "lambda2 must be positive");
  require(std::isfinite(k1) && k1 > 0.0, "k1 must be positive");
  require(std::isfinite(k2) && k2 > 0.0, "k2 must be positive");
  require(a1 > 0.0 && a1 < 1.0, "a1 must lie in (0,1)");
  require(a2 > 0.0 && a2 < 1.0, "a2 must lie in (0,1)");
  if (k2 > k1) {
    std::swap(lambda1, lambda2);
    std::swap(k1, k2);
    std::swap(a1, a2);
    swapped = true;
  }
}

NormalizedParams::NormalizedParams(double alpha_, double beta_, double gamma_)
    : alpha(alpha_), beta(beta_), gamma(gamma_) {
  require(std::isfinite(alpha) && alpha > 0.0, "alpha must be positive");
  require(std::isfinite(beta) && beta > 0.0, "beta must be positive");
  require(std::isfinite(gamma) && gamma > 0.0 && gamma <= 1.0,
          "gamma must lie in (0,1]");
}

NormalizedParams normalize(const PatchParams& p) {
  return {p.lambda1 / p.D, p.lambda2 / p.D, p.k2 / p.k1};
}

PatchParams denormalize(const NormalizedParams& n, double D, double k1) {
  if (!(D > 0.0)) throw std::domain_error("denormalize: D must be positive");
  if (!(k1 > 0.0)) throw std::domain_error("denormalize: k1 must be positive");
  return {D, n.alpha * D, n.beta * D, k1, n.gamma * k1};
}

ReactionMax reaction_max_unit_interval(const ReactionKind& r) {
  switch (r.kind) {
    case ReactionKind::CubicAllee: {
      // Larger critical point of the cubic; f is maximal there on (0,1).
      double s = ((1.0 + r.a) + std::sqrt(r.a * r.a - r.a + 1.0)) / 3.0;
      return {s, reaction_eval(r, s)};
    }
    case ReactionKind::Sawtooth:
      return {kSawtoothKinkHi, 0.25};
    case ReactionKind::Logistic:
      throw std::domain_error(
          "reaction_max_unit_interval: unsupported for the logistic reaction");
  }
  return {};
}

State vector_field_physical(const PatchParams& p, const ReactionKind& r,
                            State s, Coupling coupling) {
  ReactionKind r1 = r;
  ReactionKind r2 = r;
  if (r.kind == ReactionKind::CubicAllee) {
    r1.a = p.a1;
    r2.a = p.a2;
  }
  double g1 = p.lambda1 * p.k1 * reaction_eval(r1, s.x / p.k1);
  double g2 = p.lambda2 * p.k2 * reaction_eval(r2, s.y / p.k2);
  double flux = coupling == Coupling::Standard
                    ? p.D * (s.y - s.x)
                    : p.D * (s.y / p.k2 - s.x / p.k1);
  return {flux + g1, -flux + g2};
}

Mat2 jacobian(const NormalizedParams& n, const ReactionKind& rx,
              const ReactionKind& ry, State s) {
  return {-1.0 + n.alpha * reaction_deriv(rx, s.x), n.gamma, 1.0 / n.gamma,
          -1.0 + n.beta * reaction_deriv(ry, s.y)};
}

Mat2 jacobian(const NormalizedParams& n, const ReactionKind& r, State s) {
  return jacobian(n, r, r, s);
}

}  // namespace metapop
