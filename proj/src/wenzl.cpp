#include "loopalg/wenzl.hpp"

#include "loopalg/extprec.hpp"

namespace loopalg {

namespace {

constexpr double kLimitEps = 1e-5;
constexpr double kLimitAgree = 1e-6;

LinkState graft_defect_pattern(const LinkState& v, const LinkState& small) {
  std::vector<int> pos;
  for (int i = 0; i < v.n; ++i)
    if (v.is_defect(i)) pos.push_back(i);
  std::vector<int> partner = v.partner;
  for (int k = 0; k < small.n; ++k)
    partner[pos[k]] = small.partner[k] == kDefect ? kDefect : pos[small.partner[k]];
  return LinkState(v.n, std::move(partner));
}

}  // namespace

std::optional<int> wj_singular_index(int n, const SpectralParams& params) {
  for (int k = 2; k <= n; ++k)
    if (params.s_half_is_zero(2 * k)) return k;
  return std::nullopt;
}

TLElement build_WJ(int n, const SpectralParams& params) {
  if (n < 1) throw std::invalid_argument("build_WJ: N must be positive");
  if (n > 9) throw CapacityError("build_WJ: N > 9 (Catalan-many terms)");
  if (auto k = wj_singular_index(n, params))
    throw SingularParameter("build_WJ: S_" + std::to_string(*k) + " vanishes at this lambda");
  const cplx beta = params.beta();
  TLElement wj = TLElement::identity(n);
  for (int m = 2; m <= n; ++m) {
    TLElement e(n);
    e.add(generator(m - 1, n), 1.0);
    TLElement correction = multiply(multiply(wj, e, beta), wj, beta);
    wj += correction * cplx(params.S(m - 1) / params.S(m));
  }
  return wj;
}

MatrixXc wj_matrix(int d, const SpectralParams& params) {
  if (d < 1) throw std::invalid_argument("wj_matrix: d must be positive");
  if (auto k = wj_singular_index(d, params))
    throw SingularParameter("wj_matrix: S_" + std::to_string(*k) + " vanishes at this lambda");
  const int dim = link_basis(d).dim();
  MatrixXc m = MatrixXc::Identity(dim, dim);
  for (int k = 2; k <= d; ++k) {
    const MatrixXc e = rho(generator(k - 1, d), params).mat;
    m += (params.S(k - 1) / params.S(k)) * (m * e * m).eval();
  }
  return m;
}

namespace {

// P^{d(v)} v at a regular lambda, given rho(WJ_d).
VectorXc pd_vector(const LinkState& v, const MatrixXc& wj_d) {
  const int n = v.n;
  const LinkBasis& basis = link_basis(n);
  const int d = v.defects();
  VectorXc out = VectorXc::Zero(basis.dim());
  if (d <= 1) {
    out(basis.index(v)) = 1.0;
    return out;
  }
  const LinkBasis& bd = link_basis(d);
  const VectorXc col = wj_d.col(bd.dim() - 1);  // action on the bare defects
  for (int i = 0; i < bd.dim(); ++i) {
    if (col(i) == cplx(0.0)) continue;
    out(basis.index(graft_defect_pattern(v, bd.states[i]))) += col(i);
  }
  return out;
}

VectorXc pd_vector_at(const LinkState& v, double lambda) {
  const int d = v.defects();
  if (d <= 1) return pd_vector(v, MatrixXc());
  return pd_vector(v, wj_matrix(d, SpectralParams::from_real(lambda)));
}

}  // namespace

ProjectedState apply_Pd(const LinkState& v, const SpectralParams& params) {
  const int d = v.defects();
  if (d <= 1 || !wj_singular_index(d, params))
    return {v, pd_vector_at(v, params.lambda)};
  // Critical lambda: two-sided limit over lambda_c +- eps. A simple pole shows
  // up as one-sided values of order 1/eps with opposite signs; a finite limit
  // leaves them O(eps * slope) apart. The averaged values are then refined by
  // Richardson and must agree to 1e-6 relative.
  const VectorXc fp = pd_vector_at(v, params.lambda + kLimitEps);
  const VectorXc fm = pd_vector_at(v, params.lambda - kLimitEps);
  const double scale = std::max({1.0, fp.cwiseAbs().maxCoeff(), fm.cwiseAbs().maxCoeff()});
  const bool pole = (fp - fm).cwiseAbs().maxCoeff() > 1e-3 * scale;
  const VectorXc avg1 = (fp + fm) / 2.0;
  const VectorXc fp2 = pd_vector_at(v, params.lambda + kLimitEps / 2);
  const VectorXc fm2 = pd_vector_at(v, params.lambda - kLimitEps / 2);
  const VectorXc avg2 = (fp2 + fm2) / 2.0;
  if (pole || (avg1 - avg2).cwiseAbs().maxCoeff() > kLimitAgree * scale)
    throw SingularParameter("apply_Pd: P^" + std::to_string(d) +
                            " has no finite limit at this critical lambda");
  return {v, (4.0 * avg2 - avg1) / 3.0};
}

std::vector<ProjectedState> build_PB_basis(int n, const SpectralParams& params) {
  const LinkBasis& basis = link_basis(n);
  std::map<int, MatrixXc> wj_cache;
  std::string failing;
  for (size_t s = 0; s < basis.sector_defects.size(); ++s) {
    const int d = basis.sector_defects[s];
    if (d <= 1) continue;
    if (wj_singular_index(d, params)) {
      failing += (failing.empty() ? "" : ", ") + std::to_string(d);
      continue;
    }
    wj_cache[d] = wj_matrix(d, params);
  }
  if (!failing.empty())
    throw SingularParameter("build_PB_basis: WJ singular in sectors {" + failing + "}");
  std::vector<ProjectedState> out;
  out.reserve(basis.dim());
  for (const auto& v : basis.states) {
    const int d = v.defects();
    out.push_back({v, d <= 1 ? pd_vector(v, MatrixXc()) : pd_vector(v, wj_cache.at(d))});
  }
  return out;
}

MatrixXc pb_change_of_basis(const std::vector<ProjectedState>& pb) {
  if (pb.empty()) throw std::invalid_argument("pb_change_of_basis: empty basis");
  const int dim = static_cast<int>(pb[0].coeffs.size());
  MatrixXc t(dim, dim);
  for (int j = 0; j < dim; ++j) t.col(j) = pb[j].coeffs;
  return t;
}

// ---------------------------------------------------------------------------
// Appendix coefficient formulas
// ---------------------------------------------------------------------------

double pr_single_first(int r, const SpectralParams& p) {
  return p.s_half(r - 1) / (2.0 * p.s_half(1) * p.c_half(r));
}

double pr_single(int n, int r, const SpectralParams& p) {
  return p.s_half(r - n) * p.s_half(n) / (2.0 * p.s_half(1) * p.s_half(1) * p.c_half(r));
}

double pr_concentric(int m, int r, const SpectralParams& p) {
  double val = std::pow(2.0 * p.s_half(1), -m);
  for (int i = 0; i < m; ++i) val *= p.s_half(r - m - i) / p.c_half(r - i);
  return val;
}

double pr_tower(int n, int m, int r, const SpectralParams& p) {
  double val = std::pow(2.0 * p.s_half(1), -m);
  for (int i = 0; i < m; ++i)
    val *= p.s_half(r - n - i) * p.s_half(n - i) / (p.c_half(r - i) * p.s_half(i + 1));
  return val;
}

namespace {

// Left-shift recursion, valid for every link state:
//   P^r_w = P^{r-1}_{<-w} + (sum_j S_{r-n_j} P^{r-2}_{w\{j}}) / (4 S_1/2 C_r/2 C_(r-1)/2)
double pr_recursive(const std::vector<int>& partner, const SpectralParams& p,
                    std::map<std::vector<int>, double>& memo) {
  const int r = static_cast<int>(partner.size());
  bool has_arc = false;
  for (int x : partner) has_arc |= (x != kDefect);
  if (!has_arc) return 1.0;
  if (auto it = memo.find(partner); it != memo.end()) return it->second;

  double left = 0.0;
  if (partner[0] == kDefect) {
    std::vector<int> shifted(partner.begin() + 1, partner.end());
    for (int& x : shifted)
      if (x != kDefect) --x;
    left = pr_recursive(shifted, p, memo);
  }
  double sum = 0.0;
  for (int q = 0; q + 1 < r; ++q) {
    if (partner[q] != q + 1) continue;  // 1-bubbles only
    std::vector<int> removed;
    removed.reserve(r - 2);
    for (int i = 0; i < r; ++i) {
      if (i == q || i == q + 1) continue;
      int x = partner[i];
      if (x != kDefect) x -= (x > q ? 2 : 0);
      removed.push_back(x);
    }
    sum += p.S(r - (q + 1)) * pr_recursive(removed, p, memo);
  }
  const double val = left + sum / (4.0 * p.s_half(1) * p.c_half(r) * p.c_half(r - 1));
  memo[partner] = val;
  return val;
}

double pr_dispatch(const LinkState& w, const SpectralParams& p) {
  const int r = w.n;
  int arcs = 0;
  for (int x : w.partner) arcs += (x != kDefect);
  arcs /= 2;
  if (arcs == 0) return 1.0;
  if (arcs == 1) {
    for (int q = 0; q < r; ++q)
      if (w.partner[q] == q + 1) return q == 0 ? pr_single_first(r, p) : pr_single(q + 1, r, p);
  }
  // a single concentric tower {n^m}: arcs (inner-i, inner+1+i), i = 0..m-1
  {
    int inner = -1;
    for (int q = 0; q + 1 < r; ++q)
      if (w.partner[q] == q + 1) {
        inner = q;
        break;
      }
    bool tower = inner >= 0;
    for (int i = 0; tower && i < arcs; ++i) {
      const int a = inner - i, b = inner + 1 + i;
      tower = a >= 0 && b < r && w.partner[a] == b;
    }
    if (tower) {
      int paired = 0;
      for (int q = 0; q < r; ++q) paired += (w.partner[q] != kDefect);
      if (paired == 2 * arcs) {
        const int n1 = inner + 1;  // 1-indexed half-point of the innermost arc
        return n1 == arcs ? pr_concentric(arcs, r, p) : pr_tower(n1, arcs, r, p);
      }
    }
  }
  std::map<std::vector<int>, double> memo;
  return pr_recursive(w.partner, p, memo);
}

}  // namespace

cplx pr_coeff_formula(const LinkState& w, int r, const SpectralParams& params) {
  if (w.n != r) throw std::invalid_argument("pr_coeff_formula: state size != r");
  int arcs = 0;
  for (int x : w.partner) arcs += (x != kDefect);
  arcs /= 2;
  if (arcs == 0) return 1.0;
  if (!(params.rational && params.critical_for(r))) return pr_dispatch(w, params);
  // critical lambda: intermediate terms of the recursion can hit exact poles
  // even when the coefficient itself is finite, so evaluate the two-sided
  // limit; report the vanishing cosine index when no finite limit exists
  const double vp = pr_dispatch(w, SpectralParams::from_real(params.lambda + kLimitEps));
  const double vm = pr_dispatch(w, SpectralParams::from_real(params.lambda - kLimitEps));
  const double scale = std::max({1.0, std::abs(vp), std::abs(vm)});
  const double a1 = (vp + vm) / 2.0;
  const double vp2 = pr_dispatch(w, SpectralParams::from_real(params.lambda + kLimitEps / 2));
  const double vm2 = pr_dispatch(w, SpectralParams::from_real(params.lambda - kLimitEps / 2));
  const double a2 = (vp2 + vm2) / 2.0;
  if (std::abs(vp - vm) > 1e-3 * scale || std::abs(a1 - a2) > kLimitAgree * scale) {
    int idx = -1;
    for (int i = 0; i < arcs && idx < 0; ++i)
      if (params.c_half_is_zero(r - i)) idx = r - i;
    throw SingularParameter("pr_coeff_formula: pole at this lambda (vanishing C_{" +
                            std::to_string(idx) + "/2})");
  }
  return (4.0 * a2 - a1) / 3.0;
}

cplx pr_coeff_cluster_route(const LinkState& w, int r, const SpectralParams& params) {
  if (w.n != r) throw std::invalid_argument("pr_coeff_cluster_route: state size != r");
  // Every cluster of arcs is replaced by concentric ones at the same spot,
  // times prod_i S_i / S_{k_i}, where k_i is half the span of the cluster's
  // i-th arc (in increasing-span order) and the product index runs 1..m.
  double factor = 1.0;
  std::vector<int> partner(r, kDefect);
  int i = 0;
  while (i < r) {
    if (w.partner[i] == kDefect) {
      ++i;
      continue;
    }
    int j = i;
    while (j < r && w.partner[j] != kDefect) ++j;  // cluster [i, j)
    const int m = (j - i) / 2;
    std::vector<int> spans;
    for (int q = i; q < j; ++q)
      if (w.partner[q] > q) spans.push_back((w.partner[q] - q + 1) / 2);
    std::sort(spans.begin(), spans.end());
    for (int t = 0; t < m; ++t) factor *= params.S(t + 1) / params.S(spans[t]);
    for (int t = 0; t < m; ++t) {
      partner[i + t] = j - 1 - t;
      partner[j - 1 - t] = i + t;
    }
    i = j;
  }
  return factor * pr_coeff_formula(LinkState(r, std::move(partner)), r, params);
}

// ---------------------------------------------------------------------------
// Jordan predicate and Laurent split
// ---------------------------------------------------------------------------

bool jordan_condition(int d, int d_prime, long a, long b) {
  if (b <= 0 || std::gcd(std::abs(a), b) != 1)
    throw std::invalid_argument("jordan_condition: a, b must be coprime with b > 0");
  if (d < 0 || d_prime < 0 || (d - d_prime) % 2 != 0)
    throw std::invalid_argument("jordan_condition: d, d' must be non-negative, same parity");
  if (a % 2 == 0) return false;
  if (d <= d_prime) return false;
  if (d - d_prime >= 2 * b) return false;
  const long half_sum = (d + d_prime) / 2;
  return ((half_sum - (b - 1)) % (2 * b)) == 0;
}

SingularityReport singularity_report(int d, int n, long a, long b) {
  if (d > n) throw std::invalid_argument("singularity_report: d > N");
  SingularityReport rep;
  rep.d = d;
  rep.a = a;
  rep.b = b;
  for (int dp = d - 2; dp >= 0; dp -= 2) {
    if (jordan_condition(d, dp, a, b)) {
      rep.partner_d_prime = dp;
      rep.is_singular = true;
      break;
    }
  }
  return rep;
}

LaurentSplit laurent_split(const LinkState& v, const SpectralParams& params) {
  if (!params.rational)
    throw std::invalid_argument("laurent_split: lambda must be a rational multiple of pi");
  const int d = v.defects();
  const auto rep = singularity_report(d, v.n, params.a(), params.b());
  if (!rep.is_singular)
    throw std::invalid_argument("laurent_split: P^d is not singular at this lambda");

  const LinkBasis& basis = link_basis(v.n);
  const double lc = params.lambda;
  const cplx qc = std::polar(1.0, lc);
  const double eps = 1e-4;

  LaurentSplit out;
  out.d = d;
  out.d_prime = *rep.partner_d_prime;

  const VectorXc fp = pd_vector_at(v, lc + eps);
  const VectorXc fm = pd_vector_at(v, lc - eps);
  out.cond_estimate = std::max(fp.cwiseAbs().maxCoeff(), fm.cwiseAbs().maxCoeff()) / eps;
  if (out.cond_estimate > 1e8) {
    auto [g, s] = xp::laurent_split_core(v, lc, eps);
    out.regular = g;
    out.residue = s;
    out.extended_used = true;
  } else {
    const VectorXc fp2 = pd_vector_at(v, lc + eps / 2);
    const VectorXc fm2 = pd_vector_at(v, lc - eps / 2);
    const cplx qp = std::polar(1.0, lc + eps), qm = std::polar(1.0, lc - eps);
    const cplx qp2 = std::polar(1.0, lc + eps / 2), qm2 = std::polar(1.0, lc - eps / 2);
    const VectorXc s1 = ((qp - qc) * fp + (qm - qc) * fm) / 2.0;
    const VectorXc s2 = ((qp2 - qc) * fp2 + (qm2 - qc) * fm2) / 2.0;
    out.residue = (4.0 * s2 - s1) / 3.0;  // Richardson in eps^2
    const VectorXc ga = (fp - out.residue / (qp - qc) + fm - out.residue / (qm - qc)) / 2.0;
    const VectorXc gb =
        (fp2 - out.residue / (qp2 - qc) + fm2 - out.residue / (qm2 - qc)) / 2.0;
    out.regular = (4.0 * gb - ga) / 3.0;
  }

  // the residue must live entirely in sector d'
  const int sp = basis.sector_for_defects(out.d_prime);
  const int lo = basis.sector_offsets[sp], hi = lo + basis.sector_dims[sp];
  double inside = 0.0, outside = 0.0;
  for (int i = 0; i < basis.dim(); ++i) {
    double& bucket = (i >= lo && i < hi) ? inside : outside;
    bucket = std::max(bucket, std::abs(out.residue(i)));
  }
  const double scale = std::max(1.0, out.regular.cwiseAbs().maxCoeff());
  if (inside < 1e-8 * scale) out.degenerate_warning = true;
  if (outside > 1e-5 * std::max(inside, 1e-8))
    throw std::logic_error("laurent_split: residue leaked outside sector d'");
  for (int i = 0; i < basis.dim(); ++i)
    if (i < lo || i >= hi) out.residue(i) = 0.0;
  return out;
}

}  // namespace loopalg
