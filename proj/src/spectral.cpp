#include "loopalg/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "loopalg/extprec.hpp"

namespace loopalg {

namespace {

// Rank with an absolute singular-value cutoff. Powers of a nearly nilpotent
// matrix collapse to pure roundoff; their own sigma_max is then meaningless
// as a reference, so the cutoff must be anchored to the unpowered matrix.
int rank_svd_abs(const MatrixXc& a, double cutoff) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXc> svd(a);
  const auto& sv = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += (sv(i) > cutoff);
  return r;
}

// Orthonormal basis of the (right) null space at an absolute cutoff.
MatrixXc nullspace_abs(const MatrixXc& a, double cutoff) {
  Eigen::JacobiSVD<MatrixXc> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += (sv(i) > cutoff);
  return svd.matrixV().rightCols(a.cols() - rank);
}

std::vector<int> rank_sequence_double(const MatrixXc& a, cplx mu, int kmax, double tol) {
  const int n = static_cast<int>(a.rows());
  MatrixXc shifted = a - mu * MatrixXc::Identity(n, n);
  const double norm = shifted.cwiseAbs().maxCoeff();
  if (norm > 1e-200) shifted /= norm;  // ranks are scale-invariant
  const double sigma1 = shifted.size() ? Eigen::JacobiSVD<MatrixXc>(shifted).singularValues()(0)
                                       : 0.0;
  const double cutoff = tol * std::max(sigma1, 1e-300);
  std::vector<int> ranks;
  MatrixXc power = MatrixXc::Identity(n, n);
  for (int k = 1; k <= kmax; ++k) {
    power = power * shifted;
    ranks.push_back(rank_svd_abs(power, cutoff));
  }
  return ranks;
}

struct Cluster {
  cplx center;
  int count = 0;
  std::vector<int> sectors;  // defect numbers whose diagonal block contributes
};

std::vector<Cluster> cluster_eigenvalues(const SectorMatrix& m, double tol, double scale) {
  std::vector<std::pair<cplx, int>> vals;  // (eigenvalue, sector defects)
  for (int s = 0; s < m.sectors(); ++s) {
    Eigen::ComplexEigenSolver<MatrixXc> es(m.block(s, s), false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      vals.emplace_back(es.eigenvalues()(i), m.sector_defects[s]);
  }
  // union-find with radius tol*scale
  const double radius = tol * std::max(scale, 1e-300);
  const int n = static_cast<int>(vals.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(vals[i].first - vals[j].first) <= radius) parent[find(i)] = find(j);
  std::map<int, Cluster> by_root;
  for (int i = 0; i < n; ++i) {
    auto& c = by_root[find(i)];
    c.center += vals[i].first;
    ++c.count;
    c.sectors.push_back(vals[i].second);
  }
  std::vector<Cluster> out;
  for (auto& [root, c] : by_root) {
    c.center /= static_cast<double>(c.count);
    std::sort(c.sectors.begin(), c.sectors.end());
    c.sectors.erase(std::unique(c.sectors.begin(), c.sectors.end()), c.sectors.end());
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const Cluster& a, const Cluster& b) { return std::abs(a.center) > std::abs(b.center); });
  return out;
}

}  // namespace

std::map<int, std::vector<cplx>> sector_spectrum(const SectorMatrix& m) {
  std::map<int, std::vector<cplx>> out;
  for (int s = 0; s < m.sectors(); ++s) {
    Eigen::ComplexEigenSolver<MatrixXc> es(m.block(s, s), false);
    auto& v = out[m.sector_defects[s]];
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) v.push_back(es.eigenvalues()(i));
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
  }
  return out;
}

std::vector<JordanReport> jordan_analyze(const SectorMatrix& m, double tol, Precision prec) {
  if (tol <= 0) throw std::invalid_argument("jordan_analyze: tol must be positive");
  const int n = m.dim();
  const double scale = std::max(m.mat.cwiseAbs().maxCoeff(), 1e-300);
  auto clusters = cluster_eigenvalues(m, tol, scale);
  const double rank_tol = prec == Precision::Extended ? 1e-30 : tol;

  std::vector<JordanReport> reports;
  for (size_t ci = 0; ci < clusters.size(); ++ci) {
    const auto& cl = clusters[ci];
    JordanReport rep;
    rep.eigenvalue = cl.center;
    rep.algebraic_multiplicity = cl.count;
    rep.rank_tolerance = rank_tol;
    for (size_t cj = 0; cj < clusters.size(); ++cj)
      if (cj != ci && std::abs(clusters[cj].center - cl.center) <= 10 * tol * scale)
        rep.ambiguous_clustering = true;

    // rank sequence of (A - mu)^k until it stabilizes
    const int kmax = std::min(n, cl.count + 1);
    std::vector<int> ranks =
        prec == Precision::Extended
            ? xp::rank_sequence(m.mat, cl.center, kmax, rank_tol)
            : rank_sequence_double(m.mat, cl.center, kmax, rank_tol);
    ranks.insert(ranks.begin(), n);  // rank of (A-mu)^0
    // blocks of size >= k: ranks[k-1] - ranks[k]
    std::vector<int> at_least;
    for (size_t k = 1; k < ranks.size(); ++k) {
      const int cnt = ranks[k - 1] - ranks[k];
      if (cnt <= 0) break;
      at_least.push_back(cnt);
    }
    for (size_t s = 0; s < at_least.size(); ++s) {
      const int larger = s + 1 < at_least.size() ? at_least[s + 1] : 0;
      if (at_least[s] - larger > 0) rep.block_size_histogram[static_cast<int>(s + 1)] =
          at_least[s] - larger;
    }

    // Sector links: a pair (d, d') is linked when some Jordan chain has its
    // head strictly in UpTo_d and its tail strictly in UpTo_d'. A head is
    // genuine only if its tail cannot be produced by a head from UpTo_{d-2};
    // otherwise subtracting that lower chain leaves an eigenvector and the
    // "level-d head" is a basis artifact.
    const int max_block =
        rep.block_size_histogram.empty() ? 1 : rep.block_size_histogram.rbegin()->first;
    if (max_block >= 2 && cl.sectors.size() >= 2) {
      for (size_t di = 0; di < cl.sectors.size(); ++di) {
        for (size_t dj = di + 1; dj < cl.sectors.size(); ++dj) {
          const int d_lo = cl.sectors[di], d_hi = cl.sectors[dj];
          SectorMatrix sub = m.range(m.sector_defects.front(), d_hi);
          const int dim = sub.dim();
          MatrixXc shifted = sub.mat - cl.center * MatrixXc::Identity(dim, dim);
          const double nrm = shifted.cwiseAbs().maxCoeff();
          if (nrm > 1e-200) shifted /= nrm;
          // the link detection itself runs in double arithmetic, so its
          // cutoff cannot go below the double-data noise floor
          const double cutoff = std::max(rank_tol, 1e-13) *
                                Eigen::JacobiSVD<MatrixXc>(shifted).singularValues()(0);
          MatrixXc power = MatrixXc::Identity(dim, dim);
          for (int k = 0; k < max_block; ++k) power = power * shifted;
          const MatrixXc gen = nullspace_abs(power, cutoff);  // V(mu) within UpTo_{d_hi}
          if (gen.cols() == 0) continue;
          auto rows_of = [&](int d) {
            const int s = static_cast<int>(
                std::find(sub.sector_defects.begin(), sub.sector_defects.end(), d) -
                sub.sector_defects.begin());
            return std::pair<int, int>(sub.sector_offsets[s], sub.sector_dims[s]);
          };
          const MatrixXc img = shifted * gen;
          // heads with tails vanishing strictly above d_lo
          std::vector<int> above_lo;
          for (int s = 0; s < sub.sectors(); ++s)
            if (sub.sector_defects[s] > d_lo)
              for (int r = 0; r < sub.sector_dims[s]; ++r)
                above_lo.push_back(sub.sector_offsets[s] + r);
          MatrixXc constraint(above_lo.size(), gen.cols());
          for (size_t r = 0; r < above_lo.size(); ++r)
            constraint.row(r) = img.row(above_lo[r]);
          const MatrixXc sol = above_lo.empty()
                                   ? MatrixXc::Identity(gen.cols(), gen.cols())
                                   : nullspace_abs(constraint, cutoff);
          if (sol.cols() == 0) continue;
          auto [lo_off, lo_dim] = rows_of(d_lo);
          auto [hi_off, hi_dim] = rows_of(d_hi);
          const MatrixXc tails = img * sol;
          const double w_norm = tails.middleRows(lo_off, lo_dim).cwiseAbs().maxCoeff();
          const double v_norm = (gen.middleRows(hi_off, hi_dim) * sol).cwiseAbs().maxCoeff();
          if (w_norm <= 100 * cutoff || v_norm <= 100 * cutoff) continue;
          // tails achievable from heads confined to UpTo_{d_hi - 2}
          const MatrixXc top = gen.middleRows(hi_off, hi_dim);
          const MatrixXc low_heads = nullspace_abs(top, cutoff);
          bool genuine = true;
          if (low_heads.cols() > 0) {
            const MatrixXc t_lo = img * low_heads;
            Eigen::JacobiSVD<MatrixXc> svd(t_lo, Eigen::ComputeThinU);
            int rk = 0;
            for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
              rk += (svd.singularValues()(i) > cutoff);
            if (rk > 0) {
              const MatrixXc q = svd.matrixU().leftCols(rk);
              const MatrixXc resid = tails - q * (q.adjoint() * tails);
              genuine = resid.cwiseAbs().maxCoeff() > 100 * cutoff;
            }
          }
          if (genuine) rep.sector_links.emplace_back(d_hi, d_lo);
        }
      }
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

bool is_diagonalizable(const std::vector<JordanReport>& reports) {
  for (const auto& r : reports)
    for (const auto& [size, count] : r.block_size_histogram)
      if (size > 1 && count > 0) return false;
  return true;
}

bool sector_blocks_diagonalizable(const SectorMatrix& m, double tol) {
  for (int s = 0; s < m.sectors(); ++s) {
    SectorMatrix blk;
    blk.n_points = m.n_points;
    blk.sector_defects = {m.sector_defects[s]};
    blk.sector_offsets = {0};
    blk.sector_dims = {m.sector_dims[s]};
    blk.mat = m.block(s, s);
    if (!is_diagonalizable(jordan_analyze(blk, tol))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Commuting-family refinement
// ---------------------------------------------------------------------------

std::vector<InvariantSubspace> commuting_family_refine(const std::vector<SectorMatrix>& ms,
                                                       double tol) {
  if (ms.empty()) throw std::invalid_argument("commuting_family_refine: empty family");
  const int n = ms[0].dim();
  for (const auto& m : ms)
    if (m.dim() != n) throw std::invalid_argument("commuting_family_refine: size mismatch");
  for (size_t i = 0; i < ms.size(); ++i)
    for (size_t j = i + 1; j < ms.size(); ++j) {
      const double scale =
          std::max(1e-300, ms[i].mat.cwiseAbs().maxCoeff() * ms[j].mat.cwiseAbs().maxCoeff());
      const double comm =
          (ms[i].mat * ms[j].mat - ms[j].mat * ms[i].mat).cwiseAbs().maxCoeff();
      if (comm > tol * scale * n)
        throw std::invalid_argument("commuting_family_refine: matrices do not commute");
    }

  std::vector<InvariantSubspace> spaces;
  spaces.push_back({MatrixXc::Identity(n, n), {}});

  for (const auto& a : ms) {
    std::vector<InvariantSubspace> next;
    for (const auto& w : spaces) {
      // restriction of a to the subspace (basis columns orthonormal)
      const MatrixXc r = w.basis.adjoint() * a.mat * w.basis;
      const int m_dim = static_cast<int>(r.rows());
      Eigen::ComplexEigenSolver<MatrixXc> es(r, false);
      const double scale = std::max(1e-300, r.cwiseAbs().maxCoeff());
      // cluster eigenvalues of the restriction
      std::vector<cplx> vals(es.eigenvalues().data(),
                             es.eigenvalues().data() + es.eigenvalues().size());
      std::vector<int> parent(vals.size());
      for (size_t i = 0; i < vals.size(); ++i) parent[i] = static_cast<int>(i);
      std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
      };
      for (size_t i = 0; i < vals.size(); ++i)
        for (size_t j = i + 1; j < vals.size(); ++j)
          if (std::abs(vals[i] - vals[j]) <= tol * scale * 100)
            parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
      std::map<int, std::pair<cplx, int>> clusters;
      for (size_t i = 0; i < vals.size(); ++i) {
        auto& c = clusters[find(static_cast<int>(i))];
        c.first += vals[i];
        ++c.second;
      }
      for (auto& [root, c] : clusters) {
        const cplx mu = c.first / static_cast<double>(c.second);
        MatrixXc shifted = r - mu * MatrixXc::Identity(m_dim, m_dim);
        const double nrm = shifted.cwiseAbs().maxCoeff();
        if (nrm > 1e-200) shifted /= nrm;
        const double cutoff =
            tol * std::max(Eigen::JacobiSVD<MatrixXc>(shifted).singularValues()(0), 1e-300);
        MatrixXc power = MatrixXc::Identity(m_dim, m_dim);
        for (int k = 0; k < c.second; ++k) power = power * shifted;
        const MatrixXc ns = nullspace_abs(power, cutoff);
        if (ns.cols() == 0) continue;
        // orthonormalize the lifted basis
        Eigen::HouseholderQR<MatrixXc> qr(w.basis * ns);
        MatrixXc q = qr.householderQ() * MatrixXc::Identity(n, ns.cols());
        InvariantSubspace child;
        child.basis = std::move(q);
        child.eigenvalues = w.eigenvalues;
        child.eigenvalues.push_back(mu);
        next.push_back(std::move(child));
      }
    }
    spaces = std::move(next);
  }

  int total = 0;
  for (const auto& w : spaces) total += static_cast<int>(w.basis.cols());
  if (total != n)
    throw std::logic_error("commuting_family_refine: subspace dimensions do not add up");
  return spaces;
}

}  // namespace loopalg
