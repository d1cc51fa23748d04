#pragma once

#include "loopalg/linkrep.hpp"

// Extended-precision kernels (~50 significant digits, boost cpp_complex_50
// behind the scenes). Inputs and outputs stay double; the internal arithmetic
// is extended. Used by the near-critical Laurent splits and by Jordan rank
// decisions in extended mode.
namespace loopalg::xp {

// (regular part at q_c, residue) of P^d(q) v around q_c = e^{i lambda_c}.
std::pair<VectorXc, VectorXc> laurent_split_core(const LinkState& v, double lambda_c,
                                                 double eps);

// Ranks of (A - mu)^k for k = 1..kmax, singular values below tol * sigma_max
// counting as zero. The matrix is promoted entrywise.
std::vector<int> rank_sequence(const MatrixXc& a, cplx mu, int kmax, double tol);

// rho(F_N) assembled entirely in extended precision (recursive columns over
// the 8x8 products), then rounded to double for reporting.
MatrixXc fn_matrix(int n, double lambda);

}  // namespace loopalg::xp
