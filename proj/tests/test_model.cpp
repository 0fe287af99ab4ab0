#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "metapop/equilibria.hpp"
#include "metapop/model.hpp"
#include "metapop/util.hpp"
#include "support/oracle.hpp"

using namespace metapop;

namespace {
const double kSqrt3 = std::sqrt(3.0);
}

TEST_CASE("normalization of physical parameters") {
  NormalizedParams n = normalize(PatchParams(1, 6, 8, 1, 0.4));
  CHECK(n.alpha == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(n.beta == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(n.gamma == doctest::Approx(0.4).epsilon(1e-15));

  NormalizedParams id = normalize(PatchParams(1, 1, 1, 1, 1));
  CHECK(id.alpha == 1.0);
  CHECK(id.beta == 1.0);
  CHECK(id.gamma == 1.0);

  NormalizedParams m = normalize(PatchParams(4, 6, 8, 3, 1));
  CHECK(m.alpha == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(m.beta == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m.gamma == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("denormalization inverts normalization") {
  PatchParams p = denormalize(NormalizedParams(6, 8, 0.4), 1.0, 1.0);
  CHECK(p.D == 1.0);
  CHECK(p.lambda1 == 6.0);
  CHECK(p.lambda2 == 8.0);
  CHECK(p.k1 == 1.0);
  CHECK(p.k2 == doctest::Approx(0.4).epsilon(1e-15));

  PatchParams q = denormalize(NormalizedParams(1, 1, 1), 2.0, 5.0);
  CHECK(q.lambda1 == 2.0);
  CHECK(q.lambda2 == 2.0);
  CHECK(q.k2 == 5.0);

  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    NormalizedParams n(rng.uniform(0.01, 10), rng.uniform(0.01, 10),
                       rng.uniform(0.01, 1.0));
    double D = rng.uniform(0.1, 5), k1 = rng.uniform(0.1, 5);
    NormalizedParams back = normalize(denormalize(n, D, k1));
    CHECK(back.alpha == doctest::Approx(n.alpha).epsilon(1e-14));
    CHECK(back.beta == doctest::Approx(n.beta).epsilon(1e-14));
    CHECK(back.gamma == doctest::Approx(n.gamma).epsilon(1e-14));
  }

  CHECK_THROWS_AS(denormalize(NormalizedParams(1, 1, 1), 0.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(denormalize(NormalizedParams(1, 1, 1), 1.0, -2.0),
                  std::domain_error);
}

TEST_CASE("patch parameters canonicalize k2 <= k1") {
  PatchParams p(1, 2, 3, 0.5, 2.0, 0.3, 0.7);
  CHECK(p.swapped);
  CHECK(p.k1 == 2.0);
  CHECK(p.k2 == 0.5);
  CHECK(p.lambda1 == 3.0);
  CHECK(p.lambda2 == 2.0);
  CHECK(p.a1 == 0.7);
  CHECK(p.a2 == 0.3);

  CHECK_FALSE(PatchParams(1, 1, 1, 1, 0.4).swapped);
  CHECK_THROWS_AS(PatchParams(0, 1, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(PatchParams(1, -1, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(PatchParams(1, 1, 1, 1, 1, 1.5), std::invalid_argument);
}

TEST_CASE("reaction values at the anchor points") {
  ReactionKind cubic = ReactionKind::cubic_allee();
  CHECK(reaction_eval(cubic, 0.0) == 0.0);
  CHECK(reaction_eval(cubic, 0.5) == 0.0);
  CHECK(reaction_eval(cubic, 1.0) == 0.0);
  double s_star = (3.0 + kSqrt3) / 6.0;
  CHECK(reaction_eval(cubic, s_star) ==
        doctest::Approx(kSqrt3 / 36.0).epsilon(1e-14));

  ReactionKind saw = ReactionKind::sawtooth();
  CHECK(reaction_eval(saw, 0.0) == 0.0);
  CHECK(reaction_eval(saw, 0.5) == 0.0);
  CHECK(reaction_eval(saw, 1.0) == 0.0);
  CHECK(reaction_eval(saw, 0.75) == 0.25);
  CHECK(reaction_eval(saw, 0.25) == -0.25);
  CHECK(reaction_eval(saw, 0.1) == -0.1);
  CHECK(reaction_eval(saw, 0.9) == doctest::Approx(0.1).epsilon(1e-15));

  ReactionKind log = ReactionKind::logistic();
  CHECK(reaction_eval(log, 0.25) == doctest::Approx(0.1875).epsilon(1e-15));

  // Zeros of the cubic at a general viability threshold.
  for (double a : {0.1, 0.3, 0.8}) {
    ReactionKind r = ReactionKind::cubic_allee(a);
    CHECK(reaction_eval(r, 0.0) == 0.0);
    CHECK(reaction_eval(r, a) == 0.0);
    CHECK(reaction_eval(r, 1.0) == 0.0);
  }
  CHECK_THROWS_AS(ReactionKind::cubic_allee(0.0), std::invalid_argument);
}

TEST_CASE("reaction derivatives") {
  ReactionKind cubic = ReactionKind::cubic_allee();
  CHECK(reaction_deriv(cubic, 0.0) == -0.5);
  CHECK(reaction_deriv(cubic, (3.0 + kSqrt3) / 6.0) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(reaction_deriv(cubic, (3.0 - kSqrt3) / 6.0) ==
        doctest::Approx(0.0).epsilon(1e-15));

  ReactionKind saw = ReactionKind::sawtooth();
  CHECK(reaction_deriv(saw, 0.5) == 1.0);
  CHECK(reaction_deriv(saw, 0.1) == -1.0);
  CHECK(reaction_deriv(saw, 0.9) == -1.0);
  CHECK_THROWS_AS(reaction_deriv(saw, 0.25), std::domain_error);
  CHECK_THROWS_AS(reaction_deriv(saw, 0.75), std::domain_error);

  CHECK(reaction_deriv(ReactionKind::logistic(), 0.3) ==
        doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("closed-form reaction maximum matches grid search") {
  ReactionMax half = reaction_max_unit_interval(ReactionKind::cubic_allee());
  CHECK(half.argmax == doctest::Approx((3.0 + kSqrt3) / 6.0).epsilon(1e-15));
  CHECK(half.value == doctest::Approx(kSqrt3 / 36.0).epsilon(1e-14));

  oracle::GridMax g = oracle::grid_max_reaction(ReactionKind::cubic_allee());
  CHECK(std::fabs(half.value - g.value) < 1e-12);

  ReactionKind a3 = ReactionKind::cubic_allee(0.3);
  ReactionMax m3 = reaction_max_unit_interval(a3);
  oracle::GridMax g3 = oracle::grid_max_reaction(a3);
  CHECK(std::fabs(m3.value - g3.value) < 1e-10);
  CHECK(std::fabs(m3.argmax - g3.argmax) < 1e-5);

  ReactionMax saw = reaction_max_unit_interval(ReactionKind::sawtooth());
  CHECK(saw.argmax == 0.75);
  CHECK(saw.value == 0.25);

  CHECK_THROWS_AS(reaction_max_unit_interval(ReactionKind::logistic()),
                  std::domain_error);
}

TEST_CASE("origin is stationary for every parameter set") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    NormalizedParams n(rng.uniform(0.01, 20), rng.uniform(0.01, 20),
                       rng.uniform(0.01, 1.0));
    for (ReactionKind r : {ReactionKind::cubic_allee(rng.uniform(0.05, 0.95)),
                           ReactionKind::sawtooth(),
                           ReactionKind::logistic()}) {
      State f = vector_field(n, r, {0.0, 0.0});
      CHECK(f.x == 0.0);
      CHECK(f.y == 0.0);
    }
  }
}

TEST_CASE("known stationary points of the normalized field") {
  ReactionKind cubic = ReactionKind::cubic_allee();
  State f = vector_field(NormalizedParams(3.7, 3.7, 1.0), cubic, {1.0, 1.0});
  CHECK(f.x == 0.0);
  CHECK(f.y == 0.0);

  // Half-capacity patch against a full one, any reaction strengths.
  State g = vector_field(NormalizedParams(2.3, 7.7, 0.5), cubic, {0.5, 1.0});
  CHECK(g.x == 0.0);
  CHECK(g.y == 0.0);
}

TEST_CASE("physical vector field") {
  ReactionKind cubic = ReactionKind::cubic_allee();
  PatchParams p(2, 3, 4, 2, 0.5);
  State o = vector_field_physical(p, cubic, {0, 0});
  CHECK(o.x == 0.0);
  CHECK(o.y == 0.0);

  PatchParams hom(1.5, 2, 2, 3, 3);
  State h = vector_field_physical(hom, cubic, {3, 3});
  CHECK(h.x == 0.0);
  CHECK(h.y == 0.0);

  State b = vector_field_physical(p, ReactionKind::logistic(), {p.k1, p.k2},
                                  Coupling::Balanced);
  CHECK(b.x == 0.0);
  CHECK(b.y == 0.0);

  // Standard coupling moves mass toward the emptier patch.
  State s = vector_field_physical(p, ReactionKind::logistic(), {p.k1, p.k2},
                                  Coupling::Standard);
  CHECK(s.x < 0.0);
  CHECK(s.y > 0.0);
}

TEST_CASE("per-patch viability thresholds enter the physical field") {
  PatchParams p(1, 1, 1, 1, 1, 0.3, 0.7);
  ReactionKind cubic = ReactionKind::cubic_allee();  // a ignored, p wins
  State f = vector_field_physical(p, cubic, {0.3, 0.7});
  // Patch 1 sits at its own threshold (reaction zero, coupling positive).
  CHECK(f.x == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(f.y == doctest::Approx(-0.4).epsilon(1e-14));
}

TEST_CASE("jacobian at the origin") {
  ReactionKind cubic = ReactionKind::cubic_allee();
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    NormalizedParams n(rng.uniform(0.01, 10), rng.uniform(0.01, 10),
                       rng.uniform(0.05, 1.0));
    Mat2 j = jacobian(n, cubic, {0, 0});
    CHECK(j.a11 == doctest::Approx(-1.0 - n.alpha / 2).epsilon(1e-15));
    CHECK(j.a12 == n.gamma);
    CHECK(j.a21 == doctest::Approx(1.0 / n.gamma).epsilon(1e-15));
    CHECK(j.a22 == doctest::Approx(-1.0 - n.beta / 2).epsilon(1e-15));
    // Trace negative, determinant positive: locally stable extinction.
    CHECK(j.trace() < 0.0);
    CHECK(j.det() ==
          doctest::Approx((1 + n.alpha / 2) * (1 + n.beta / 2) - 1.0)
              .epsilon(1e-12));
    CHECK(j.det() > 0.0);
  }
}

TEST_CASE("jacobian matches central finite differences") {
  Rng rng(19);
  for (int i = 0; i < 100; ++i) {
    NormalizedParams n(rng.uniform(0.1, 10), rng.uniform(0.1, 10),
                       rng.uniform(0.05, 1.0));
    ReactionKind r = i % 2 == 0
                         ? ReactionKind::cubic_allee(rng.uniform(0.1, 0.9))
                         : ReactionKind::logistic();
    State s{rng.uniform(0.0, 1.2), rng.uniform(0.0, 1.2)};
    Mat2 a = jacobian(n, r, s);
    Mat2 fd = oracle::fd_jacobian(n, r, s);
    double scale = std::max({std::fabs(a.a11), std::fabs(a.a12),
                             std::fabs(a.a21), std::fabs(a.a22), 1.0});
    CHECK(std::fabs(a.a11 - fd.a11) / scale < 1e-6);
    CHECK(std::fabs(a.a12 - fd.a12) / scale < 1e-6);
    CHECK(std::fabs(a.a21 - fd.a21) / scale < 1e-6);
    CHECK(std::fabs(a.a22 - fd.a22) / scale < 1e-6);
  }
}

TEST_CASE("equilibria map between normalized and physical coordinates") {
  Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    double D = rng.uniform(0.2, 3), k1 = rng.uniform(0.5, 4);
    double k2 = k1 * rng.uniform(0.05, 1.0);
    PatchParams p(D, rng.uniform(0.1, 8) * D, rng.uniform(0.1, 8) * D, k1, k2);
    ReactionKind cubic = ReactionKind::cubic_allee();
    EquilibriumSet eq = find_equilibria(normalize(p), cubic);
    for (const Equilibrium& e : eq.points) {
      State phys =
          vector_field_physical(p, cubic, {k1 * e.point.x, k2 * e.point.y});
      CHECK(std::fabs(phys.x) < 1e-10);
      CHECK(std::fabs(phys.y) < 1e-10);
    }
  }
}
