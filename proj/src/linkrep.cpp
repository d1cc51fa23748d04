#include "loopalg/linkrep.hpp"

#include <mutex>
#include <unordered_map>

namespace loopalg {

// ---------------------------------------------------------------------------
// LinkBasis
// ---------------------------------------------------------------------------

LinkBasis::LinkBasis(int n_points) : n(n_points) {
  states = enumerate_link_basis(n);
  for (int i = 0; i < static_cast<int>(states.size()); ++i) index_of[states[i].partner] = i;
  int prev_d = -1;
  for (int i = 0; i < static_cast<int>(states.size()); ++i) {
    const int d = states[i].defects();
    if (d != prev_d) {
      sector_defects.push_back(d);
      sector_offsets.push_back(i);
      sector_dims.push_back(0);
      prev_d = d;
    }
    ++sector_dims.back();
  }
}

int LinkBasis::index(const LinkState& v) const {
  auto it = index_of.find(v.partner);
  if (it == index_of.end()) throw std::invalid_argument("LinkBasis: state not in basis");
  return it->second;
}

int LinkBasis::sector_of_index(int idx) const {
  for (int s = static_cast<int>(sector_offsets.size()) - 1; s >= 0; --s)
    if (idx >= sector_offsets[s]) return s;
  throw std::invalid_argument("LinkBasis: bad index");
}

int LinkBasis::sector_for_defects(int d) const {
  for (size_t s = 0; s < sector_defects.size(); ++s)
    if (sector_defects[s] == d) return static_cast<int>(s);
  throw std::invalid_argument("LinkBasis: no sector with that defect count");
}

const LinkBasis& link_basis(int n) {
  static std::mutex mtx;
  static std::unordered_map<int, std::unique_ptr<LinkBasis>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<LinkBasis>(n);
  return *slot;
}

// ---------------------------------------------------------------------------
// SectorMatrix
// ---------------------------------------------------------------------------

SectorMatrix::SectorMatrix(int n) : n_points(n) {
  const LinkBasis& basis = link_basis(n);
  sector_defects = basis.sector_defects;
  sector_offsets = basis.sector_offsets;
  sector_dims = basis.sector_dims;
  mat = MatrixXc::Zero(basis.dim(), basis.dim());
}

Eigen::Block<MatrixXc> SectorMatrix::block(int s_row, int s_col) {
  return mat.block(sector_offsets[s_row], sector_offsets[s_col], sector_dims[s_row],
                   sector_dims[s_col]);
}

Eigen::Block<const MatrixXc> SectorMatrix::block(int s_row, int s_col) const {
  return mat.block(sector_offsets[s_row], sector_offsets[s_col], sector_dims[s_row],
                   sector_dims[s_col]);
}

SectorMatrix SectorMatrix::range(int d_lo, int d_hi) const {
  SectorMatrix out;
  out.n_points = n_points;
  int start = -1, len = 0;
  for (int s = 0; s < sectors(); ++s) {
    if (sector_defects[s] < d_lo || sector_defects[s] > d_hi) continue;
    if (start < 0) start = sector_offsets[s];
    out.sector_defects.push_back(sector_defects[s]);
    out.sector_offsets.push_back(len);
    out.sector_dims.push_back(sector_dims[s]);
    len += sector_dims[s];
  }
  out.mat = mat.block(start, start, len, len);
  return out;
}

double SectorMatrix::triangularity_defect() const {
  double worst = 0.0;
  for (int sr = 0; sr < sectors(); ++sr)
    for (int sc = 0; sc < sr; ++sc)  // rows below: larger d than column
      worst = std::max(worst, block(sr, sc).cwiseAbs().maxCoeff());
  // block(sr,sc) with sr>sc means output defects > input defects: must vanish
  return worst;
}

SectorMatrix identity_sector_matrix(int n) {
  SectorMatrix m(n);
  m.mat.setIdentity();
  return m;
}

// ---------------------------------------------------------------------------
// rho
// ---------------------------------------------------------------------------

SectorMatrix rho(const Connectivity& c, const SpectralParams& params) {
  const LinkBasis& basis = link_basis(c.n);
  SectorMatrix m(c.n);
  const double beta = params.beta();
  parallel_for(basis.dim(), [&](int col) {
    auto [w, loops] = apply_connectivity(c, basis.states[col]);
    m.mat(basis.index(w), col) = std::pow(beta, loops);
  });
  return m;
}

SectorMatrix rho(const TLElement& x, const SpectralParams& params) {
  const LinkBasis& basis = link_basis(x.n);
  SectorMatrix m(x.n);
  const double beta = params.beta();
  parallel_for(basis.dim(), [&](int col) {
    for (const auto& [c, coeff] : x.terms) {
      auto [w, loops] = apply_connectivity(c, basis.states[col]);
      m.mat(basis.index(w), col) += coeff * std::pow(beta, loops);
    }
  });
  return m;
}

// ---------------------------------------------------------------------------
// W, traces, M matrices
// ---------------------------------------------------------------------------

SectorMatrix weight_matrix(int n, const SpectralParams& params) {
  const double sl = std::sin(params.lambda);
  if (std::abs(sl) < 1e-14)
    throw SingularParameter("weight_matrix: sin(lambda) = 0");
  SectorMatrix m(n);
  for (int s = 0; s < m.sectors(); ++s) {
    const int d = m.sector_defects[s];
    const double w = std::sin((d + 1) * params.lambda) / sl;
    for (int i = 0; i < m.sector_dims[s]; ++i) {
      const int k = m.sector_offsets[s] + i;
      m.mat(k, k) = w;
    }
  }
  return m;
}

cplx weighted_trace(const SectorMatrix& m, const SpectralParams& params) {
  const double sl = std::sin(params.lambda);
  if (std::abs(sl) < 1e-14) throw SingularParameter("weighted_trace: sin(lambda) = 0");
  cplx out = 0.0;
  for (int s = 0; s < m.sectors(); ++s) {
    const int d = m.sector_defects[s];
    out += m.block(s, s).trace() * (std::sin((d + 1) * params.lambda) / sl);
  }
  return out;
}

Eigen::MatrixXd matrix_M(int n, const SpectralParams& params) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument("matrix_M: N must be even");
  const double beta = params.beta();
  if (std::abs(beta) < 1e-14) throw SingularParameter("matrix_M: beta = 0");
  const int m = n / 2 + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const int d = 2 * i, dp = 2 * j;
      out(i, j) = std::pow(beta, -dp) * static_cast<double>(sector_dimension(dp, d));
    }
  return out;
}

Eigen::MatrixXd matrix_M_inverse(int n, const SpectralParams& params) {
  if (n <= 0 || n % 2 != 0) throw std::invalid_argument("matrix_M_inverse: N must be even");
  const double beta = params.beta();
  const int m = n / 2 + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const int d = 2 * i, dp = 2 * j;
      const double sign = ((d + dp) / 2) % 2 == 0 ? 1.0 : -1.0;
      out(i, j) = sign * std::pow(beta, d) * static_cast<double>(binomial((d + dp) / 2, d));
    }
  return out;
}

MatrixXc gram_matrix(int n, const SpectralParams& params) {
  const LinkBasis& basis = link_basis(n);
  MatrixXc g = MatrixXc::Zero(basis.dim(), basis.dim());
  for (int i = 0; i < basis.dim(); ++i)
    for (int j = 0; j < basis.dim(); ++j)
      g(i, j) = gram(basis.states[i], basis.states[j], params);
  return g;
}

}  // namespace loopalg
