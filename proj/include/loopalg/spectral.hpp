#pragma once

#include "loopalg/linkrep.hpp"

namespace loopalg {

enum class Precision { Double, Extended };

// Eigenvalues of each diagonal block; their union is the spectrum of the
// block-triangular matrix.
std::map<int, std::vector<cplx>> sector_spectrum(const SectorMatrix& m);

struct JordanReport {
  cplx eigenvalue = 0.0;
  int algebraic_multiplicity = 0;
  std::map<int, int> block_size_histogram;       // size -> count
  std::vector<std::pair<int, int>> sector_links;  // (d, d'), d > d'
  double rank_tolerance = 0.0;
  bool ambiguous_clustering = false;  // another cluster within 10*tol
};

// Jordan structure per eigenvalue cluster: block sizes from the rank
// sequence rank((A - mu)^k), sector links from generalized-eigenvector
// chains strictly in the given filtration levels.
std::vector<JordanReport> jordan_analyze(const SectorMatrix& m, double tol = 1e-9,
                                         Precision prec = Precision::Double);

bool is_diagonalizable(const std::vector<JordanReport>& reports);

// Per-run check used by the D_N analysis: are all diagonal blocks
// individually diagonalizable at this tolerance?
bool sector_blocks_diagonalizable(const SectorMatrix& m, double tol = 1e-9);

struct InvariantSubspace {
  MatrixXc basis;                 // orthonormal columns
  std::vector<cplx> eigenvalues;  // one generalized eigenvalue per input matrix
};

// Simultaneous generalized-eigenspace refinement of a commuting family.
// Throws std::invalid_argument when a pairwise commutator exceeds tol*scale.
std::vector<InvariantSubspace> commuting_family_refine(const std::vector<SectorMatrix>& ms,
                                                       double tol = 1e-9);

}  // namespace loopalg
