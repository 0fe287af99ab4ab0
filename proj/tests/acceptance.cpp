// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Heavier sampling lives here rather than in the unit
// suites; every run uses fixed seeds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "metapop/cartography.hpp"
#include "metapop/certificates.hpp"
#include "metapop/dynamics.hpp"
#include "metapop/equilibria.hpp"
#include "metapop/sawtooth.hpp"
#include "metapop/util.hpp"
#include "support/oracle.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace metapop;

namespace {

const ReactionKind kCubic = ReactionKind::cubic_allee();

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

std::vector<CriterionResult> g_results;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void record(int id, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
  g_results.push_back({id, name, pass, detail, seconds});
  std::printf("[%s] %d. %s: %s (%.1f s)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
}

NormalizedParams certified_sample(Rng& rng) {
  for (;;) {
    NormalizedParams n(rng.uniform(0.01, 3.99), rng.uniform(0.01, 3.99),
                       rng.uniform(0.01, 0.49));
    if (check_corollary(n).holds) return n;
  }
}

// 1. Every certified parameter point has the origin as its only equilibrium.
void criterion_certificate_soundness() {
  Timer timer;
  const int n_samples = 10000;
  Rng rng(1001);
  std::vector<NormalizedParams> samples;
  samples.reserve(n_samples);
  while (static_cast<int>(samples.size()) < n_samples)
    samples.push_back(certified_sample(rng));

  int violations = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : violations)
#endif
  for (int i = 0; i < n_samples; ++i) {
    EquilibriumSet eq = find_equilibria(samples[i], kCubic);
    if (eq.points.size() != 1) ++violations;
  }
  record(1, "certificate soundness", violations == 0,
         std::to_string(n_samples) + " certified samples, " +
             std::to_string(violations) + " violations",
         timer.seconds());
}

// 2. Lambda-plane maps: counts in {1,3,5}, nested topology, certified
// region contained in the numeric count-1 region.
void criterion_region_maps() {
  Timer timer;
  bool pass = true;
  std::string detail;
  for (double k2 : {0.4, 1.0 / 3.0}) {
    SweepSpec spec;
    spec.plane = SweepPlane::PhysicalLambda;
    spec.x_axis = spec.y_axis = {0.0, 4.0, 200};
    spec.D = 1.0;
    spec.k1 = 1.0;
    spec.k2 = k2;
    spec.reaction = kCubic;
    spec.overlays = {CertificateId::ThmMain};
    RegionMap map = run_sweep(spec);

    int bad_counts = 0;
    for (const RegionCell& c : map.cells)
      if (!c.degenerate && c.count != 1 && c.count != 3 && c.count != 5)
        ++bad_counts;

    // Every three-equilibria cell must see a unique-equilibrium cell on its
    // way to the origin of the plane along its row or column.
    int nesting_violations = 0;
    const int nx = spec.x_axis.steps, ny = spec.y_axis.steps;
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        if (map.at(ix, iy).count != 3 || map.at(ix, iy).degenerate) continue;
        bool found = false;
        for (int i = 0; i < ix && !found; ++i)
          found = map.at(i, iy).count == 1;
        for (int j = 0; j < iy && !found; ++j)
          found = map.at(ix, j).count == 1;
        if (!found) ++nesting_violations;
      }
    }

    ContainmentReport rep = containment_report(map, CertificateId::ThmMain);
    bool ok = bad_counts == 0 && nesting_violations == 0 &&
              rep.violations.empty() && rep.fraction_unique == 1.0 &&
              rep.certified_cells > 0;
    pass = pass && ok;
    detail += "k2=" + g17(k2) + ": stray-counts " +
              std::to_string(bad_counts) + ", nesting-violations " +
              std::to_string(nesting_violations) + ", containment " +
              g17(rep.fraction_unique) + "; ";
  }
  record(2, "lambda-plane region maps (200x200)", pass, detail,
         timer.seconds());
}

// 3. Sawtooth iff-condition against exact enumeration.
void criterion_sawtooth_iff() {
  Timer timer;
  const int n_samples = 10000;
  Rng rng(3003);
  int tested = 0, mismatches = 0, skipped = 0;
  for (int i = 0; i < n_samples; ++i) {
    NormalizedParams n(rng.uniform(1e-3, 10), rng.uniform(1e-3, 10),
                       rng.uniform(1e-3, 0.499));
    double a = n.alpha, b = n.beta, g = n.gamma;
    bool near_boundary =
        std::fabs(a * (b + 1) + b * (4 * g - 3)) < 1e-9 ||
        std::fabs(a - (3 * g - 1)) < 1e-9 ||
        (a >= 3 * g - 1 ? std::fabs(a * b - 3 * a + b) < 1e-9
                        : std::fabs(a * (2 - 3 * g) + b * g * (a - 1)) < 1e-9);
    EquilibriumSet eq = sawtooth_equilibria_exact(n);
    bool structural = !eq.warnings.empty();
    for (const Equilibrium& e : eq.points) structural = structural || e.at_kink;
    if (near_boundary || structural) {
      ++skipped;
      continue;
    }
    ++tested;
    if (thm_sawtooth_predicate(n) != (eq.points.size() == 1)) ++mismatches;
  }

  RegionMap fig4 = sawtooth_region_counts(11.0 / 25.0, {0.0, 4.0, 100},
                                          {0.0, 4.0, 100});
  std::set<int> counts;
  for (const RegionCell& c : fig4.cells)
    if (!c.degenerate) counts.insert(c.count);
  bool fig4_ok = counts == std::set<int>{1, 3, 5};

  record(3, "sawtooth iff-condition", mismatches == 0 && fig4_ok,
         std::to_string(tested) + " tested (" + std::to_string(skipped) +
             " boundary-band skips), " + std::to_string(mismatches) +
             " mismatches; region counts {1,3,5}: " +
             (fig4_ok ? "yes" : "no"),
         timer.seconds());
}

// 4. Homogeneous and near-homogeneous equilibrium counts.
void criterion_homogeneous_counts() {
  Timer timer;
  bool three = find_equilibria(NormalizedParams(0.5, 0.5, 1), kCubic)
                   .points.size() == 3;
  bool nine = find_equilibria(NormalizedParams(100, 100, 1), kCubic)
                  .points.size() == 9;

  Rng rng(4004);
  int below_three = 0;
  const int n_draws = 1000;
  std::vector<NormalizedParams> draws;
  for (int i = 0; i < n_draws; ++i)
    draws.emplace_back(rng.uniform(1e-3, 10), rng.uniform(1e-3, 10),
                       rng.uniform(0.51, 0.99));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : below_three)
#endif
  for (int i = 0; i < n_draws; ++i)
    if (find_equilibria(draws[i], kCubic).points.size() < 3) ++below_three;

  int missing_half_point = 0;
  for (int i = 0; i < 200; ++i) {
    NormalizedParams n(rng.uniform(1e-3, 10), rng.uniform(1e-3, 10), 0.5);
    EquilibriumSet eq = find_equilibria(n, kCubic);
    bool present = false;
    for (const Equilibrium& e : eq.points)
      present = present || (std::fabs(e.point.x - 0.5) < 1e-8 &&
                            std::fabs(e.point.y - 1.0) < 1e-8);
    if (!present) ++missing_half_point;
  }

  record(4, "homogeneous benchmarks",
         three && nine && below_three == 0 && missing_half_point == 0,
         std::string("3-count: ") + (three ? "ok" : "bad") + ", 9-count: " +
             (nine ? "ok" : "bad") + ", <3 in (0.51,0.99): " +
             std::to_string(below_three) + "/1000, missing (1/2,1): " +
             std::to_string(missing_half_point) + "/200",
         timer.seconds());
}

// 5. Empirical global extinction under the certificate.
void criterion_global_extinction() {
  Timer timer;
  Rng rng(5005);
  int bad_sets = 0;
  double worst_fraction = 1.0;
  for (int set = 0; set < 20; ++set) {
    NormalizedParams n = certified_sample(rng);
    PatchParams p = denormalize(n, 1.0, 1.0);
    ExtinctionReport rep =
        verify_global_extinction(p, 200, {}, 50000 + set);
    double fraction = rep.fraction.value_or(0.0);
    worst_fraction = std::min(worst_fraction, fraction);
    if (fraction != 1.0) ++bad_sets;
  }
  record(5, "global extinction (20 sets x 200 starts)", bad_sets == 0,
         "worst converged fraction " + g17(worst_fraction), timer.seconds());
}

// 6. General-viability bounds: reduction at a = 1/2, the flagged printed
// upper bound, and oracle-confirmed uniqueness at a in {0.3, 0.5, 0.7}.
void criterion_general_viability() {
  Timer timer;
  Rng rng(6006);

  int reduction_failures = 0;
  for (int i = 0; i < 100; ++i) {
    double k1 = rng.uniform(0.2, 5);
    double k2 = k1 * rng.uniform(0.02, 0.49);
    double lower = general_a_bounds(0.5, k1, k2).lower;
    double ref =
        std::max(2 * std::sqrt(3.0) * k1 * k1 /
                     (9 * (k1 - k2) * (2 * k1 - k2)),
                 std::sqrt(3.0) * k1 * k1 / (18 * (k1 - 2 * k2) * (k1 - k2)));
    if (std::fabs(lower - ref) > 1e-12 * ref) ++reduction_failures;
  }

  bool flag_raised = !u_half_consistency(1.0, 1.0 / 3.0).consistent;

  std::string detail = "L(1/2) reduction failures " +
                       std::to_string(reduction_failures) + "/100, U flag " +
                       (flag_raised ? "raised" : "MISSING");
  bool pass = reduction_failures == 0 && flag_raised;

  for (double a : {0.3, 0.5, 0.7}) {
    // The printed U is unusable (flagged), so candidate sets satisfy the
    // checkable hypotheses (diffusion cap, capacity gap, ratio above L) and
    // the oracle stands in for the upper bound.
    int found = 0, oracle_rejects = 0, solver_mismatches = 0, batches = 0;
    Rng arng(7000 + static_cast<int>(100 * a));
    while (found < 100 && batches < 40) {
      ++batches;
      const int batch = 32;
      std::vector<PatchParams> cand;
      for (int i = 0; i < batch; ++i) {
        double k2 = a * arng.uniform(0.1, 0.9);
        double cap = 3.0 / (a * a - a + 1.0);
        double ratio =
            general_a_bounds(a, 1.0, k2).lower * (1.0 + arng.uniform(0.02, 1.0));
        double l2 = arng.uniform(0.05, 0.95) * cap / std::max(1.0, ratio);
        cand.emplace_back(1.0, ratio * l2, l2, 1.0, k2, a, a);
      }
      std::vector<int> oracle_count(batch), solver_count(batch);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
      for (int i = 0; i < batch; ++i) {
        NormalizedParams n = normalize(cand[i]);
        ReactionKind r = ReactionKind::cubic_allee(a);
        oracle_count[i] = static_cast<int>(
            oracle::brute_force_equilibria(n, r).size());
        solver_count[i] =
            static_cast<int>(find_equilibria(n, r).points.size());
      }
      for (int i = 0; i < batch && found < 100; ++i) {
        CertificateVerdict v = check_thm_general_a(cand[i]);
        bool hypotheses = v.conditions[0].satisfied &&
                          v.conditions[1].satisfied &&
                          v.conditions[2].satisfied && !v.notes.empty();
        if (!hypotheses) continue;  // construction guarantees these
        if (oracle_count[i] != 1) {
          ++oracle_rejects;
          continue;
        }
        ++found;
        if (solver_count[i] != 1) ++solver_mismatches;
      }
    }
    pass = pass && found == 100 && solver_mismatches == 0;
    detail += "; a=" + g17(a) + ": " + std::to_string(found) +
              " oracle-certified sets, " + std::to_string(solver_mismatches) +
              " solver mismatches (" + std::to_string(oracle_rejects) +
              " oracle rejects)";
  }

  record(6, "general-viability consistency", pass, detail, timer.seconds());
}

// 7. Perfect-mixing totals against the closed form.
void criterion_perfect_mixing() {
  Timer timer;
  std::vector<MixingEntry> hetero =
      perfect_mixing_experiment(2, 1, 2, 1, {1000.0});
  bool hetero_ok = hetero[0].converged && hetero[0].rel_gap < 0.01 &&
                   std::fabs(hetero[0].formula - 3.0) < 1e-12;

  std::vector<MixingEntry> control =
      perfect_mixing_experiment(1.5, 1.5, 2, 1, {1000.0});
  bool control_ok =
      control[0].converged && std::fabs(control[0].total - 3.0) / 3.0 < 0.001;

  record(7, "perfect mixing", hetero_ok && control_ok,
         "heterogeneous total " + g17(hetero[0].total) + " (gap " +
             g17(hetero[0].rel_gap) + "), control total " +
             g17(control[0].total),
         timer.seconds());
}

// 8. Numerics hygiene: analytic vs finite-difference Jacobian, integrator
// order, solver-vs-oracle agreement.
void criterion_numerics_hygiene() {
  Timer timer;
  Rng rng(8008);

  int jacobian_failures = 0;
  for (int i = 0; i < 100; ++i) {
    NormalizedParams n(rng.uniform(0.1, 10), rng.uniform(0.1, 10),
                       rng.uniform(0.05, 1.0));
    State s{rng.uniform(0.0, 1.2), rng.uniform(0.0, 1.2)};
    Mat2 an = jacobian(n, kCubic, s);
    Mat2 fd = oracle::fd_jacobian(n, kCubic, s);
    double scale = std::max({std::fabs(an.a11), std::fabs(an.a12),
                             std::fabs(an.a21), std::fabs(an.a22), 1.0});
    double err = std::max({std::fabs(an.a11 - fd.a11), std::fabs(an.a12 - fd.a12),
                           std::fabs(an.a21 - fd.a21),
                           std::fabs(an.a22 - fd.a22)});
    if (err / scale > 1e-6) ++jacobian_failures;
  }

  // Fourth-order convergence on the exactly solvable linearized system.
  NormalizedParams lin(2, 3, 0.7);
  Mat2 a = jacobian(lin, kCubic, {0, 0});
  auto rhs = [&](double, State s) {
    return State{a.a11 * s.x + a.a12 * s.y, a.a21 * s.x + a.a22 * s.y};
  };
  auto max_err = [&](double h) {
    IntegratorOptions opt;
    opt.method = IntegrationMethod::Rk4Fixed;
    opt.step = h;
    opt.t_max = 2.0;
    opt.convergence_radius = 1e-300;
    Trajectory tr = integrate_rhs(rhs, {0.4, 0.7}, opt);
    double worst = 0.0;
    for (size_t i = 0; i < tr.times.size(); ++i) {
      State ex = oracle::exact_linear_solution(a, {0.4, 0.7}, tr.times[i]);
      worst = std::max({worst, std::fabs(tr.states[i].x - ex.x),
                        std::fabs(tr.states[i].y - ex.y)});
    }
    return worst;
  };
  double factor = max_err(0.05) / max_err(0.025);
  bool order_ok = factor > 16.0 * 0.8 && factor < 16.0 * 1.2;

  const int n_draws = 1000;
  std::vector<NormalizedParams> draws;
  Rng drng(8885);
  for (int i = 0; i < n_draws; ++i)
    draws.emplace_back(drng.uniform(1e-3, 10), drng.uniform(1e-3, 10),
                       drng.uniform(1e-3, 1.0));
  int mismatches = 0, degenerate_skips = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) \
    reduction(+ : mismatches, degenerate_skips)
#endif
  for (int i = 0; i < n_draws; ++i) {
    EquilibriumSet eq = find_equilibria(draws[i], kCubic);
    if (!eq.warnings.empty()) {
      // Sub-tolerance root pairs have no well-posed count.
      ++degenerate_skips;
      continue;
    }
    std::vector<State> ref = oracle::brute_force_equilibria(draws[i], kCubic);
    bool ok = eq.points.size() == ref.size();
    if (ok)
      for (size_t k = 0; k < ref.size(); ++k)
        ok = ok && std::fabs(eq.points[k].point.x - ref[k].x) < 1e-6 &&
             std::fabs(eq.points[k].point.y - ref[k].y) < 1e-6;
    if (!ok) ++mismatches;
  }

  record(8, "numerics hygiene",
         jacobian_failures == 0 && order_ok && mismatches == 0,
         "jacobian failures " + std::to_string(jacobian_failures) +
             "/100, rk4 halving factor " + g17(factor) +
             ", solver-vs-oracle mismatches " + std::to_string(mismatches) +
             "/" + std::to_string(n_draws - degenerate_skips) + " (" +
             std::to_string(degenerate_skips) + " degenerate skips)",
         timer.seconds());
}

// 9. Bit-reproducible sweep outputs across repeats and thread counts.
void criterion_determinism() {
  Timer timer;
  SweepSpec spec;
  spec.plane = SweepPlane::PhysicalLambda;
  spec.x_axis = spec.y_axis = {0.0, 4.0, 60};
  spec.D = 1.0;
  spec.k1 = 1.0;
  spec.k2 = 0.4;
  spec.reaction = kCubic;
  spec.overlays = {CertificateId::ThmMain};

  auto render = [&]() {
    RegionMap map = run_sweep(spec);
    return region_map_csv(map) + "\x1e" + region_map_svg(map);
  };

#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  std::string single = render();
  std::string single_again = render();
#ifdef _OPENMP
  omp_set_num_threads(8);
#endif
  std::string eight = render();
#ifdef _OPENMP
  omp_set_num_threads(omp_get_num_procs());
#endif

  bool pass = single == single_again && single == eight;
  record(9, "determinism across repeats and thread counts", pass,
         pass ? "byte-identical CSV+SVG" : "outputs differ", timer.seconds());
}

}  // namespace

int main() {
  Timer total;
  criterion_certificate_soundness();
  criterion_region_maps();
  criterion_sawtooth_iff();
  criterion_homogeneous_counts();
  criterion_global_extinction();
  criterion_general_viability();
  criterion_perfect_mixing();
  criterion_numerics_hygiene();
  criterion_determinism();

  int failed = 0;
  for (const CriterionResult& r : g_results)
    if (!r.pass) ++failed;
  std::printf("%d/%zu criteria passed (total %.1f s)\n",
              static_cast<int>(g_results.size()) - failed, g_results.size(),
              total.seconds());
  return failed == 0 ? 0 : 1;
}
