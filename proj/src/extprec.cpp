#include "loopalg/extprec.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace loopalg::xp {

using xreal = boost::multiprecision::cpp_bin_float_50;
using xcplx = boost::multiprecision::cpp_complex_50;
using XMatrix = Eigen::Matrix<xcplx, Eigen::Dynamic, Eigen::Dynamic>;
using XVector = Eigen::Matrix<xcplx, Eigen::Dynamic, 1>;

namespace {

const xreal kXPi = boost::math::constants::pi<xreal>();

xcplx xpolar(const xreal& angle) { return xcplx(cos(angle), sin(angle)); }

// ---------------------------------------------------------------------------
// rho(WJ_d) v^d in extended precision via the matrix recursion, for the
// near-critical Laurent split.
// ---------------------------------------------------------------------------

XVector pd_column_x(int d, const xreal& lambda) {
  const LinkBasis& basis = link_basis(d);
  const xreal Lambda = kXPi - lambda;
  const xreal beta = 2 * cos(lambda);
  XMatrix m = XMatrix::Identity(basis.dim(), basis.dim());
  for (int k = 2; k <= d; ++k) {
    const Connectivity e = generator(k - 1, d);
    XMatrix em = XMatrix::Zero(basis.dim(), basis.dim());
    for (int col = 0; col < basis.dim(); ++col) {
      auto [w, loops] = apply_connectivity(e, basis.states[col]);
      xcplx val(1);
      for (int l = 0; l < loops; ++l) val *= beta;
      em(basis.index(w), col) = val;
    }
    const xreal coeff = sin((k - 1) * Lambda) / sin(k * Lambda);
    m += coeff * (m * em * m).eval();
  }
  return m.col(basis.dim() - 1);
}

XVector pd_apply_x(const LinkState& v, const xreal& lambda) {
  const LinkBasis& basis = link_basis(v.n);
  const int d = v.defects();
  XVector out = XVector::Zero(basis.dim());
  if (d <= 1) {
    out(basis.index(v)) = xcplx(1);
    return out;
  }
  std::vector<int> pos;
  for (int i = 0; i < v.n; ++i)
    if (v.is_defect(i)) pos.push_back(i);
  const LinkBasis& bd = link_basis(d);
  const XVector col = pd_column_x(d, lambda);
  for (int i = 0; i < bd.dim(); ++i) {
    if (col(i) == xcplx(0)) continue;
    std::vector<int> partner = v.partner;
    const LinkState& wp = bd.states[i];
    for (int k = 0; k < d; ++k)
      partner[pos[k]] = wp.partner[k] == kDefect ? kDefect : pos[wp.partner[k]];
    out(basis.index(LinkState(v.n, std::move(partner)))) += col(i);
  }
  return out;
}

VectorXc to_double(const XVector& x) {
  VectorXc out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out(i) = cplx(static_cast<double>(x(i).real()), static_cast<double>(x(i).imag()));
  return out;
}

}  // namespace

std::pair<VectorXc, VectorXc> laurent_split_core(const LinkState& v, double lambda_c,
                                                 double eps) {
  const xreal lc(lambda_c), e(eps);
  const xcplx qc = xpolar(lc);

  auto split_at = [&](const xreal& h) {
    const xcplx qp = xpolar(lc + h), qm = xpolar(lc - h);
    const XVector fp = pd_apply_x(v, lc + h);
    const XVector fm = pd_apply_x(v, lc - h);
    const XVector s = ((qp - qc) * fp + (qm - qc) * fm) / 2;
    const XVector g = (fp - (1 / (qp - qc)) * s + fm - (1 / (qm - qc)) * s) / 2;
    return std::make_pair(g, s);
  };
  auto [g1, s1] = split_at(e);
  auto [g2, s2] = split_at(e / 2);
  const XVector s = (4 * s2 - s1) / 3;
  // recompute the regular part with the refined residue
  const xcplx qp = xpolar(lc + e), qm = xpolar(lc - e);
  const xcplx qp2 = xpolar(lc + e / 2), qm2 = xpolar(lc - e / 2);
  const XVector fp = pd_apply_x(v, lc + e), fm = pd_apply_x(v, lc - e);
  const XVector fp2 = pd_apply_x(v, lc + e / 2), fm2 = pd_apply_x(v, lc - e / 2);
  const XVector ga = (fp - (1 / (qp - qc)) * s + fm - (1 / (qm - qc)) * s) / 2;
  const XVector gb = (fp2 - (1 / (qp2 - qc)) * s + fm2 - (1 / (qm2 - qc)) * s) / 2;
  const XVector g = (4 * gb - ga) / 3;
  return {to_double(g), to_double(s)};
}

// ---------------------------------------------------------------------------
// Extended rank sequences (one-sided Jacobi SVD; singular values only)
// ---------------------------------------------------------------------------

namespace {

std::vector<xreal> singular_values_x(XMatrix a) {
  const int cols = static_cast<int>(a.cols());
  const xreal tiny = xreal("1e-80");
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int i = 0; i < cols; ++i) {
      for (int j = i + 1; j < cols; ++j) {
        const xreal app = a.col(i).squaredNorm().real();
        const xreal aqq = a.col(j).squaredNorm().real();
        const xcplx apq = (a.col(i).adjoint() * a.col(j)).value();
        const xreal mag = abs(apq);
        if (mag <= tiny || mag * mag <= tiny * app * aqq) continue;
        rotated = true;
        const xcplx phase = apq / mag;
        const xreal tau = (aqq - app) / (2 * mag);
        const xreal t = (tau >= 0 ? xreal(1) : xreal(-1)) / (abs(tau) + sqrt(1 + tau * tau));
        const xreal c = 1 / sqrt(1 + t * t);
        const xreal st = c * t;
        const XVector x = a.col(i), y = conj(phase) * a.col(j);
        a.col(i) = c * x - st * y;
        a.col(j) = phase * (st * x + c * y);
      }
    }
    if (!rotated) break;
  }
  std::vector<xreal> sv(cols);
  for (int i = 0; i < cols; ++i) sv[i] = sqrt(a.col(i).squaredNorm().real());
  std::sort(sv.begin(), sv.end(), std::greater<xreal>());
  return sv;
}

int rank_x_abs(const XMatrix& a, const xreal& cutoff) {
  auto sv = singular_values_x(a);
  int r = 0;
  for (const auto& s : sv) r += (s > cutoff);
  return r;
}

}  // namespace

std::vector<int> rank_sequence(const MatrixXc& a, cplx mu, int kmax, double tol) {
  const int n = static_cast<int>(a.rows());
  XMatrix xa(n, n);
  xreal norm = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      xa(i, j) = xcplx(a(i, j).real(), a(i, j).imag());
      if (i == j) xa(i, i) -= xcplx(mu.real(), mu.imag());
      norm = std::max(norm, abs(xa(i, j)));
    }
  if (norm > 0) xa /= xcplx(norm);
  // extended arithmetic removes the decomposition roundoff, but the input
  // entries are double data: zeros below their own rounding (~1e-16 relative)
  // are not observable, so the cutoff is floored there.
  const xreal sigma1 = singular_values_x(xa).front();
  const xreal cutoff = std::max(xreal(tol), xreal(1e-13)) * sigma1;
  std::vector<int> ranks;
  XMatrix power = XMatrix::Identity(n, n);
  for (int k = 1; k <= kmax; ++k) {
    power = (power * xa).eval();
    ranks.push_back(rank_x_abs(power, cutoff));
  }
  return ranks;
}

// ---------------------------------------------------------------------------
// rho(F_N) assembled in extended precision
// ---------------------------------------------------------------------------

namespace {

xcplx fn_element_x(const EtaWord& w, int r, const xreal& lambda) {
  using X8 = Eigen::Matrix<xcplx, 8, 8>;
  const xcplx qp = xpolar(lambda), qm = xpolar(-lambda);
  X8 n0 = X8::Zero(), n1 = X8::Zero(), nm1 = X8::Zero(), g = X8::Zero();
  n0(0, 0) = -qp;
  n0(0, 1) = xcplx(1) - qm * qm;
  n0(1, 1) = -qm;
  n0(1, 3) = 1;
  n0(2, 0) = -qp;
  n0(2, 1) = xcplx(1) - qm;
  n0(2, 2) = 1;
  n0(3, 3) = 1;
  n0(7, 1) = -qm;
  n1(0, 4) = xcplx(1) - qm * qm;
  n1(1, 4) = -qm;
  n1(1, 5) = 1;
  n1(2, 4) = xcplx(1) - qm;
  n1(3, 5) = 1;
  n1(4, 6) = 1;
  n1(5, 6) = 1;
  n1(7, 4) = -qm;
  nm1(4, 0) = -qp;
  nm1(4, 2) = 1;
  nm1(4, 7) = 1;
  nm1(5, 0) = -qp;
  nm1(5, 1) = 1;
  nm1(5, 7) = 1;
  nm1(6, 4) = 1;
  g(0, 0) = 2 * cos(lambda);
  g(0, 1) = g(0, 2) = g(0, 7) = 1;
  g(1, 0) = g(1, 2) = 1;
  g(2, 0) = g(2, 1) = g(2, 2) = g(2, 3) = 1;
  g(3, 2) = 1;
  g(4, 4) = g(4, 5) = 1;
  g(5, 4) = 1;
  g(6, 6) = 1;
  g(7, 0) = 1;
  Eigen::Matrix<xcplx, 1, 8> row = Eigen::Matrix<xcplx, 1, 8>::Zero();
  row(0) = 1;
  for (int k = 0; k < r; ++k) {
    const int s = w.symbols[k];
    row = row * (s == 0 ? n0 : (s == 1 ? n1 : nm1));
  }
  return (row * g.col(0)).value();
}

}  // namespace

MatrixXc fn_matrix(int n, double lambda) {
  const xreal la(lambda);
  const LinkBasis& basis = link_basis(n);
  MatrixXc result = MatrixXc::Zero(basis.dim(), basis.dim());
  std::map<int, std::vector<xcplx>> last_cols;
  for (int d = n; d >= 1; d -= 2) {
    const LinkBasis& bd = link_basis(d);
    std::vector<xcplx> col(bd.dim());
    for (int i = 0; i < bd.dim(); ++i) col[i] = fn_element_x(eta_encode(bd.states[i]), d, la);
    last_cols[d] = std::move(col);
  }
  const xreal diag0 = 2 * cos(la);
  for (int colidx = 0; colidx < basis.dim(); ++colidx) {
    const LinkState& v = basis.states[colidx];
    const int d = v.defects();
    if (d == 0) {
      result(colidx, colidx) = cplx(static_cast<double>(diag0), 0.0);
      continue;
    }
    std::vector<int> pos;
    for (int i = 0; i < n; ++i)
      if (v.is_defect(i)) pos.push_back(i);
    const LinkBasis& bd = link_basis(d);
    const auto& col = last_cols.at(d);
    for (int i = 0; i < bd.dim(); ++i) {
      if (col[i] == xcplx(0)) continue;
      std::vector<int> partner = v.partner;
      const LinkState& wp = bd.states[i];
      for (int k = 0; k < d; ++k)
        partner[pos[k]] = wp.partner[k] == kDefect ? kDefect : pos[wp.partner[k]];
      result(basis.index(LinkState(n, std::move(partner))), colidx) +=
          cplx(static_cast<double>(col[i].real()), static_cast<double>(col[i].imag()));
    }
  }
  return result;
}

}  // namespace loopalg::xp
