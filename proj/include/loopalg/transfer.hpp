#pragma once

#include "loopalg/linkrep.hpp"

namespace loopalg {

// ---------------------------------------------------------------------------
// Double-row diagrams. Both D_N(lambda,u) and the braid matrix F_N(lambda)
// are sums over the 2N face states of the same two-row diagram with left and
// right boundary half-arcs; they differ only in the face weights. Each face
// has midpoints S (bottom), E, W, N and two states:
//   H: connects S-E and W-N,   V: connects S-W and N-E.
// Lower row of D_N: sin(lambda-u) H + sin(u) V; upper row swaps the weights.
// The braid rows use the u -> -i*inf limits ie^{i lambda/2}, -ie^{-i lambda/2}.
// ---------------------------------------------------------------------------
struct FaceWeights {
  cplx lower_h, lower_v, upper_h, upper_v;
};

FaceWeights dn_face_weights(const SpectralParams& params);
FaceWeights dn_face_weights(double lambda, double u);
FaceWeights fn_face_weights(const SpectralParams& params);

// Exact TL-element expansion by enumerating all 2^{2N} face configurations.
// Capacity: N <= 8.
TLElement build_double_row_brute(int n, const FaceWeights& w, double beta);
TLElement build_DN_brute(int n, const SpectralParams& params);
TLElement build_FN_direct(int n, const SpectralParams& params);

// Column-by-column frontier sweep building rho of the double-row diagram
// directly in the link basis; polynomial cost, N <= 14.
SectorMatrix sweep_double_row(int n, const FaceWeights& w, double beta);
SectorMatrix build_rho_DN_sweep(int n, const SpectralParams& params);
SectorMatrix build_rho_FN_sweep(int n, const SpectralParams& params);

// Fourier coefficients C_0, C_2, ..., C_{2N} of
// D_N(lambda, v + lambda/2) = C_0/2 + sum_i C_{2i} cos(2iv),
// from samples at v_k = pi k / (2N+1).
std::vector<SectorMatrix> fourier_coefficients(int n, const SpectralParams& params);

// rho(F_N) assembled from the arc-stripping recursion: arcs of the incoming
// state propagate through the braid rows, so each column reduces to the last
// column of rho(F_d) on the stripped defects (Appendix-B product formula).
SectorMatrix fn_column_recursive(int n, const SpectralParams& params);

// <w| rho(F_r) v^r> via the 8x8 matrix product over the eta word of w.
cplx fn_element_8x8(const EtaWord& w, int r, const SpectralParams& params);

// Same element via the 2x2 product over the mu word (1- and 2-bubbles only).
cplx fn_element_2x2(const MuWord& w, int r, const SpectralParams& params);

// The 8x8 building blocks (exposed for the nilpotency self-tests).
using Matrix8c = Eigen::Matrix<cplx, 8, 8>;
Matrix8c appendix_N0(double lambda);
Matrix8c appendix_N1(double lambda);
Matrix8c appendix_Nm1(double lambda);
Matrix8c appendix_G(double lambda);

}  // namespace loopalg
