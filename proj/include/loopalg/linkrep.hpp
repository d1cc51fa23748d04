#pragma once

#include <Eigen/Dense>

#include "loopalg/tl.hpp"

namespace loopalg {

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// LinkBasis: the canonical ordered basis B_N with index lookup.
// ---------------------------------------------------------------------------
struct LinkBasis {
  int n = 0;
  std::vector<LinkState> states;
  std::map<std::vector<int>, int> index_of;  // partner array -> basis index
  std::vector<int> sector_defects;           // distinct d values, increasing
  std::vector<int> sector_offsets;           // start index of each sector
  std::vector<int> sector_dims;

  explicit LinkBasis(int n_points);
  int dim() const { return static_cast<int>(states.size()); }
  int index(const LinkState& v) const;
  int sector_of_index(int idx) const;  // position within sector_defects
  int sector_for_defects(int d) const;
};

// Shared, lazily-built bases (immutable once constructed).
const LinkBasis& link_basis(int n);

// ---------------------------------------------------------------------------
// SectorMatrix: dense complex matrix over the defect-ordered link basis,
// block-upper-triangular in the defect grading (row = output, col = input).
// ---------------------------------------------------------------------------
struct SectorMatrix {
  int n_points = 0;
  MatrixXc mat;
  std::vector<int> sector_defects;
  std::vector<int> sector_offsets;
  std::vector<int> sector_dims;

  SectorMatrix() = default;
  explicit SectorMatrix(int n);

  int dim() const { return static_cast<int>(mat.rows()); }
  int sectors() const { return static_cast<int>(sector_defects.size()); }

  // Diagonal block acting on the d-defect sector (by sector position s).
  Eigen::Block<MatrixXc> block(int s_row, int s_col);
  Eigen::Block<const MatrixXc> block(int s_row, int s_col) const;

  // Submatrix over sectors with defect counts in [d_lo, d_hi].
  SectorMatrix range(int d_lo, int d_hi) const;

  // Largest |entry| below the block-upper-triangular profile.
  double triangularity_defect() const;
};

SectorMatrix identity_sector_matrix(int n);

// rho on a single connectivity / an algebra element.
SectorMatrix rho(const Connectivity& c, const SpectralParams& params);
SectorMatrix rho(const TLElement& x, const SpectralParams& params);

// W|_{V_N^d} = sin((d+1) lambda)/sin(lambda) * id  (diagonal).
SectorMatrix weight_matrix(int n, const SpectralParams& params);

// tr(rho(x) W) computed sector by sector.
cplx weighted_trace(const SectorMatrix& m, const SpectralParams& params);

// The (N/2+1)x(N/2+1) matrices of the two-trace relation, indexed by even
// defect numbers d = 2i. N must be even; beta must be non-zero for M.
Eigen::MatrixXd matrix_M(int n, const SpectralParams& params);
Eigen::MatrixXd matrix_M_inverse(int n, const SpectralParams& params);

// Gram matrix G_{vw} over the canonical basis.
MatrixXc gram_matrix(int n, const SpectralParams& params);

}  // namespace loopalg
