#pragma once

#include <optional>

#include "loopalg/linkrep.hpp"

namespace loopalg {

// ---------------------------------------------------------------------------
// Wenzl-Jones projectors. WJ_N is the unique idempotent in TL_N with unit
// coefficient on id that is killed by every generator; it is built here by
// Wenzl's recursion WJ_n = WJ_{n-1} + (S_{n-1}/S_n) WJ_{n-1} e_{n-1} WJ_{n-1}
// with S_k = sin(k Lambda). The projectors P^d act on d-defect link states by
// stripping arcs, applying rho(WJ_d) to the bare defects, and reinserting.
// ---------------------------------------------------------------------------

// First k in 2..n with S_k = 0 at this lambda (the offending box), if any.
std::optional<int> wj_singular_index(int n, const SpectralParams& params);

// TL-element form. Capacity: term count is Catalan(N); N <= 9.
TLElement build_WJ(int n, const SpectralParams& params);

// rho_{V_d}(WJ_d) by the same recursion at matrix level (any d <= 12).
MatrixXc wj_matrix(int d, const SpectralParams& params);

struct ProjectedState {
  LinkState source;
  VectorXc coeffs;  // expansion over link_basis(source.n)
};

// P^{d(v)} v. At a critical lambda where WJ_d is singular, the two-sided
// limit over lambda_c +- eps is attempted (eps = 1e-5, declared existent when
// the one-sided values agree to 1e-6 relative).
ProjectedState apply_Pd(const LinkState& v, const SpectralParams& params);

// The eigenbasis PB_N = { P^{d(v)} v : v in B_N }, aligned with the canonical
// basis; throws SingularParameter listing failing sectors at critical lambda.
std::vector<ProjectedState> build_PB_basis(int n, const SpectralParams& params);

// Change-of-basis matrix with the PB vectors as columns (unit upper
// triangular in the defect grading).
MatrixXc pb_change_of_basis(const std::vector<ProjectedState>& pb);

// ---------------------------------------------------------------------------
// Closed-form / recursive coefficients P^r_w = <w | P^r v^r> (Appendix
// formulas; computed without ever building WJ).
// ---------------------------------------------------------------------------

double pr_single_first(int r, const SpectralParams& params);        // P^r_{1}
double pr_single(int n, int r, const SpectralParams& params);       // P^r_{n}
double pr_concentric(int m, int r, const SpectralParams& params);   // P^r_{m^m}
double pr_tower(int n, int m, int r, const SpectralParams& params); // P^r_{n^m}

// General dispatcher; limit evaluation at critical lambda, SingularParameter
// (naming the vanishing cosine index) where no finite limit exists.
cplx pr_coeff_formula(const LinkState& w, int r, const SpectralParams& params);

// Cluster-replacement route (arcs of each cluster replaced by concentric
// ones times the product of S_i/S_{k_i}); equals pr_coeff_formula.
cplx pr_coeff_cluster_route(const LinkState& w, int r, const SpectralParams& params);

// ---------------------------------------------------------------------------
// Singularity predicate and the Laurent split at critical lambda
// ---------------------------------------------------------------------------

// Lambda_c = pi a/b: true iff a odd, d > d', d - d' < 2b and
// (d+d')/2 = b-1 mod 2b.
bool jordan_condition(int d, int d_prime, long a, long b);

struct SingularityReport {
  int d = 0;
  long a = 0, b = 1;                  // Lambda_c = pi a / b
  std::optional<int> partner_d_prime;  // largest partner < d
  bool is_singular = false;
};

SingularityReport singularity_report(int d, int n, long a, long b);

struct LaurentSplit {
  int d = 0, d_prime = 0;
  VectorXc regular;   // value of the regular part at q_c (full link basis)
  VectorXc residue;   // residue at q_c; supported in sector d'
  double cond_estimate = 0.0;
  bool extended_used = false;
  bool degenerate_warning = false;  // residue below 1e-8 * scale
};

// P^d(q) v = r(q,v) + s(v)/(q - q_c), residue from two-sided evaluation at
// q_c e^{+-i eps} with Richardson refinement; extended precision engages
// automatically when the condition estimate exceeds 1e8.
LaurentSplit laurent_split(const LinkState& v, const SpectralParams& params);

}  // namespace loopalg
