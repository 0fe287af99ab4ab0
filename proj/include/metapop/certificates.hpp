#pragma once

#include <string>
#include <utility>
#include <vector>

#include "metapop/model.hpp"

namespace metapop {

struct CertificateCondition {
  std::string name;
  bool satisfied = false;
  double lhs = 0.0;  // computed left value of the printed inequality
  double rhs = 0.0;  // computed right value
};

// Mechanically evaluated closed-form sufficient (or iff) condition. holds is
// always the conjunction of the individual conditions; bounds carries the
// numeric values the conditions were compared against; notes records
// anomalies such as the general-a upper-bound consistency flag.
struct CertificateVerdict {
  std::string certificate_id;
  bool holds = false;
  std::vector<CertificateCondition> conditions;
  std::vector<std::pair<std::string, double>> bounds;
  std::vector<std::string> notes;
};

// Extinction certificate for the half-viability cubic in physical
// parameters: strong enough diffusion, k1 more than twice k2, and the
// reaction-strength ratio inside an explicit window. All inequalities are
// strict, as stated.
CertificateVerdict check_thm_main(const PatchParams& p);

enum class Omega1Branch { First, Second, Tie };

struct Omega1Bound {
  double value = 0.0;
  Omega1Branch branch = Omega1Branch::First;
};

// Lower bound on alpha/beta excluding equilibria from Omega1. The two
// branches swap exactly at gamma = 2/7. Requires gamma in (0,1/2).
Omega1Bound lemma_omega1_lower_bound(double gamma);

// Upper bound on alpha/beta excluding equilibria from Omega2:
// 9(1-2g)(1-g) / (2*sqrt(3)*g^2). Requires gamma in (0,1/2).
double lemma_omega2_upper_bound(double gamma);

// Normalized-coordinates uniqueness certificate: alpha,beta in (0,4),
// gamma in (0,1/2), and alpha/beta inside the Omega1/Omega2 exclusion window.
CertificateVerdict check_corollary(const NormalizedParams& n);

struct ViabilityBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Ratio bounds L, U for a general viability constant a, implemented exactly
// as printed. Requires a in (0,1) and k2 < a*k1. The printed U is negative
// throughout (0,1) and cannot reduce to the half-viability upper bound; see
// u_half_consistency.
ViabilityBounds general_a_bounds(double a, double k1, double k2);

struct UConsistency {
  double u_at_half = 0.0;       // printed U evaluated at a = 1/2
  double reference_upper = 0.0; // upper bound of the half-viability theorem
  bool consistent = false;
};

// Compares the printed general-a upper bound at a = 1/2 with the known
// half-viability upper bound for the same capacities.
UConsistency u_half_consistency(double k1, double k2);

// General-viability extinction certificate. Evaluated verbatim; the verdict
// carries the a = 1/2 consistency flag for U, which deliberately stays
// unfixed. Requires a1 == a2.
CertificateVerdict check_thm_general_a(const PatchParams& p);

// Large-diffusion total equilibrium population of two logistic patches:
// k1 + k2 + (k1-k2)(l1*k2 - l2*k1)/(l1*k2 + l2*k1).
double perfect_mixing_capacity(double k1, double k2, double lambda1,
                               double lambda2);

}  // namespace metapop
