#include "metapop/certificates.hpp"

#include <cmath>

#include "metapop/util.hpp"

namespace metapop {

namespace {

const double kSqrt3 = std::sqrt(3.0);

void add(CertificateVerdict& v, std::string name, bool ok, double lhs,
         double rhs) {
  v.conditions.push_back({std::move(name), ok, lhs, rhs});
}

void finalize(CertificateVerdict& v) {
  v.holds = true;
  for (const auto& c : v.conditions) v.holds = v.holds && c.satisfied;
}

}  // namespace

Omega1Bound lemma_omega1_lower_bound(double gamma) {
  if (!(gamma > 0.0 && gamma < 0.5))
    throw std::domain_error("omega1 bound requires gamma in (0,1/2)");
  double b1 = 2.0 * kSqrt3 / (9.0 * (1.0 - gamma) * (2.0 - gamma));
  double b2 = kSqrt3 / (18.0 * (1.0 - 2.0 * gamma) * (1.0 - gamma));
  double diff = std::fabs(b1 - b2);
  if (diff <= 1e-12 * std::max(b1, b2))
    return {std::max(b1, b2), Omega1Branch::Tie};
  return b1 > b2 ? Omega1Bound{b1, Omega1Branch::First}
                 : Omega1Bound{b2, Omega1Branch::Second};
}

double lemma_omega2_upper_bound(double gamma) {
  if (!(gamma > 0.0 && gamma < 0.5))
    throw std::domain_error("omega2 bound requires gamma in (0,1/2)");
  return 9.0 * (1.0 - 2.0 * gamma) * (1.0 - gamma) /
         (2.0 * kSqrt3 * gamma * gamma);
}

CertificateVerdict check_thm_main(const PatchParams& p) {
  if (p.a1 != 0.5 || p.a2 != 0.5)
    throw std::domain_error(
        "thm-main certificate requires a1 = a2 = 1/2; use thm-general-a");
  CertificateVerdict v;
  v.certificate_id = "thm-main";

  double max_l = std::max(p.lambda1, p.lambda2);
  add(v, "max{lambda1,lambda2} < 4D", max_l < 4.0 * p.D, max_l, 4.0 * p.D);
  bool gap_ok = 2.0 * p.k2 < p.k1;
  add(v, "2*k2 < k1", gap_ok, 2.0 * p.k2, p.k1);

  // The ratio window is only meaningful under the capacity-gap hypothesis.
  double ratio = p.lambda1 / p.lambda2;
  double lower = std::nan(""), upper = std::nan("");
  if (gap_ok) {
    double lower1 = 2.0 * kSqrt3 * p.k1 * p.k1 /
                    (9.0 * (p.k1 - p.k2) * (2.0 * p.k1 - p.k2));
    double lower2 = kSqrt3 * p.k1 * p.k1 /
                    (18.0 * (p.k1 - 2.0 * p.k2) * (p.k1 - p.k2));
    lower = std::max(lower1, lower2);
    upper = 9.0 * (p.k1 - 2.0 * p.k2) * (p.k1 - p.k2) /
            (2.0 * kSqrt3 * p.k2 * p.k2);
  }
  add(v, "lambda1/lambda2 > lower", gap_ok && ratio > lower, ratio, lower);
  add(v, "lambda1/lambda2 < upper", gap_ok && ratio < upper, ratio, upper);
  v.bounds = {{"lower", lower}, {"upper", upper}, {"ratio", ratio}};
  finalize(v);
  return v;
}

CertificateVerdict check_corollary(const NormalizedParams& n) {
  CertificateVerdict v;
  v.certificate_id = "corollary";
  double nan = std::nan("");

  add(v, "alpha in (0,4)", n.alpha > 0.0 && n.alpha < 4.0, n.alpha, 4.0);
  add(v, "beta in (0,4)", n.beta > 0.0 && n.beta < 4.0, n.beta, 4.0);
  bool gamma_ok = n.gamma > 0.0 && n.gamma < 0.5;
  add(v, "gamma in (0,1/2)", gamma_ok, n.gamma, 0.5);

  double ratio = n.alpha / n.beta;
  double lower = nan, upper = nan;
  if (gamma_ok) {
    lower = lemma_omega1_lower_bound(n.gamma).value;
    upper = lemma_omega2_upper_bound(n.gamma);
  }
  add(v, "alpha/beta > lower", gamma_ok && ratio > lower, ratio, lower);
  add(v, "alpha/beta < upper", gamma_ok && ratio < upper, ratio, upper);
  v.bounds = {{"lower", lower}, {"upper", upper}, {"ratio", ratio}};
  finalize(v);
  return v;
}

ViabilityBounds general_a_bounds(double a, double k1, double k2) {
  if (!(a > 0.0 && a < 1.0))
    throw std::domain_error("general_a_bounds: a must lie in (0,1)");
  if (!(k2 < a * k1))
    throw std::domain_error("general_a_bounds: requires k2 < a*k1");
  // Both radicands are the same polynomial a^2 - a + 1.
  double q = a * a - a + 1.0;
  double p = (a + 1.0) * (a - 0.5) * (a - 2.0);
  double lower = 2.0 * k1 * k1 * (p + std::pow(q, 1.5)) /
                 (27.0 * (k1 - k2)) *
                 std::max(1.0 / (a * a * (k1 - a * k2)), 1.0 / (a * k1 - k2));
  double upper = 2.0 * (a * k1 - k2) * (k1 - k2) * (p - std::pow(q, 1.5)) /
                 ((1.0 - a) * k2 * k2);
  return {lower, upper};
}

UConsistency u_half_consistency(double k1, double k2) {
  double u = general_a_bounds(0.5, k1, k2).upper;
  double ref = 9.0 * (k1 - 2.0 * k2) * (k1 - k2) / (2.0 * kSqrt3 * k2 * k2);
  bool ok = std::fabs(u - ref) <= 1e-12 * std::fabs(ref);
  return {u, ref, ok};
}

CertificateVerdict check_thm_general_a(const PatchParams& p) {
  if (p.a1 != p.a2)
    throw std::domain_error(
        "thm-general-a: unsupported for a1 != a2 (no closed-form bounds)");
  double a = p.a1;
  CertificateVerdict v;
  v.certificate_id = "thm-general-a";
  double nan = std::nan("");

  double max_l = std::max(p.lambda1, p.lambda2);
  double diff_cap = 3.0 * p.D / (a * a - a + 1.0);
  add(v, "max{lambda1,lambda2} < 3D/(a^2-a+1)", max_l < diff_cap, max_l,
      diff_cap);
  bool cap_ok = p.k2 < a * p.k1;
  add(v, "k2 < a*k1", cap_ok, p.k2, a * p.k1);

  double ratio = p.lambda1 / p.lambda2;
  double lower = nan, upper = nan;
  if (cap_ok) {
    ViabilityBounds b = general_a_bounds(a, p.k1, p.k2);
    lower = b.lower;
    upper = b.upper;
  }
  add(v, "lambda1/lambda2 > L", cap_ok && ratio > lower, ratio, lower);
  add(v, "lambda1/lambda2 < U", cap_ok && ratio < upper, ratio, upper);
  v.bounds = {{"L", lower}, {"U", upper}, {"ratio", ratio}};

  if (cap_ok) {
    // The comparison needs k2 < k1/2; the mismatch factor is the same for
    // every capacity pair, so fall back to a comparable one if needed.
    double ck1 = p.k1, ck2 = p.k2 < 0.5 * p.k1 ? p.k2 : p.k1 / 3.0;
    UConsistency u = u_half_consistency(ck1, ck2);
    if (!u.consistent)
      v.notes.push_back(
          "U-consistency flag: U(1/2," + g17(ck1) + "," + g17(ck2) +
          ") = " + g17(u.u_at_half) + " does not match the half-viability "
          "upper bound " + g17(u.reference_upper) +
          "; verify uniqueness numerically instead of via U");
  }
  finalize(v);
  return v;
}

double perfect_mixing_capacity(double k1, double k2, double lambda1,
                               double lambda2) {
  if (!(k1 > 0.0 && k2 > 0.0 && lambda1 > 0.0 && lambda2 > 0.0))
    throw std::domain_error("perfect_mixing_capacity: inputs must be positive");
  return k1 + k2 + (k1 - k2) * (lambda1 * k2 - lambda2 * k1) /
                       (lambda1 * k2 + lambda2 * k1);
}

}  // namespace metapop
