#pragma once

#include "loopalg/linkrep.hpp"

namespace loopalg {

// ---------------------------------------------------------------------------
// Q-Potts spin models on the 45-degree lattice with N x 2M boxes. Spins sit
// on lattice points (x, y) with x + y odd, 0 <= x <= N; rows alternate
// between N/2 spins (y even) and N/2+1 spins (y odd). Every box carries one
// diagonal bond: J-bonds in odd box columns, K-bonds in even ones. The
// cylinder closes row 2M onto row 0; the strip keeps rows 0 and 2M as free
// boundary rows.
// ---------------------------------------------------------------------------

struct PottsParams {
  int q = 2;         // number of spin states, Q = beta^2
  double lambda = 0; // sqrt(Q) = 2 cos lambda
  double u = 0;      // anisotropy: v_J / sqrt(Q) = sin(lambda-u)/sin(u)

  static PottsParams make(int q, double u);
  double v_j() const;
  double v_k() const;                   // v_J v_K = Q
  double gamma_j() const;               // e^gamma = 1 + v
  double gamma_k() const;
  double kappa(int n) const;            // Q^{(N+1)/2} / (sin u sin(lambda-u))^N
  SpectralParams loop_params() const;   // the matching D_N parameters
};

// One bond per box: the spin sites it couples and its type.
struct Bond {
  int site_a = 0, site_b = 0;
  bool is_j = false;
};

// Shared lattice geometry. Cylinder: spin rows 0..2M-1 (row 2M = row 0);
// strip: rows 0..2M with N/2-spin boundary rows at top and bottom.
struct PottsLattice {
  int n = 0, m = 0;
  bool cylinder = true;
  int n_sites = 0;
  std::vector<Bond> bonds;  // one per box, 2NM total

  static PottsLattice make(int n, int m, bool cylinder);
};

// Loop count #(G) of a bond subset: quarter-circle tilings traced through
// the boundary half-arcs (computed independently of the Euler relation).
int fk_loop_count(const PottsLattice& lat, unsigned long long bond_mask);

// Connected components via union-find over the bond mask.
int fk_components(const PottsLattice& lat, unsigned long long bond_mask);

// Exhaustive Fortuin-Kasteleyn sum over all 2^{2NM} bond subsets on the
// cylinder; asserts the Euler relation N_c = (#(G) + N_s - N_b)/2 per graph.
double fk_bruteforce_Z(int n, int m, const PottsParams& params);

// Exhaustive spin sum on the cylinder (oracle for the FK expansion).
double spin_bruteforce_Z(int n, int m, const PottsParams& params);

// Double-row spin transfer matrix (Q^{N/2} x Q^{N/2}); Lambda = tilde/kappa.
Eigen::MatrixXd spin_transfer(int n, const PottsParams& params, bool normalized = true);

// kappa^M tr(rho(D_N^M) W): the loop side of the partition function.
double loop_Z(int n, int m, const PottsParams& params);

// ---------------------------------------------------------------------------
// Fixed / free / mixed boundary conditions on the strip (N even).
// kind: 'a' top and bottom fixed to distinct values, 'b' fixed to the same
// value, 'c' both free, 'd' one free one fixed.
// ---------------------------------------------------------------------------

double boundary_Z(char kind, int n, int m, const PottsParams& params);

// Constrained exhaustive spin sum on the strip (the cross-check oracle).
double boundary_Z_spin(char kind, int n, int m, const PottsParams& params);

// The boundary link states of the Gram sandwiches.
LinkState boundary_state_wrap(int n);    // arc (1,N) over arcs (2,3),(4,5),...
LinkState boundary_state_defect(int n);  // defects at 1 and N, arcs between
LinkState boundary_state_simple(int n);  // arcs (1,2),(3,4),...

}  // namespace loopalg
