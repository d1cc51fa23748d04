#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "loopalg/transfer.hpp"
#include "loopalg/wenzl.hpp"

using namespace loopalg;

namespace {
const SpectralParams kGeneric = SpectralParams::from_real(0.8191);

// coefficient of connectivity c in x
cplx coeff_of(const TLElement& x, const Connectivity& c) {
  auto it = x.terms.find(c);
  return it == x.terms.end() ? cplx(0.0) : it->second;
}
}  // namespace

TEST_CASE("WJ_1, WJ_2, WJ_3 explicit expansions") {
  auto p = kGeneric;
  CHECK(build_WJ(1, p).terms.size() == 1);
  CHECK(std::abs(coeff_of(build_WJ(1, p), Connectivity::identity(1)) - cplx(1.0)) < 1e-15);

  auto wj2 = build_WJ(2, p);
  CHECK(std::abs(coeff_of(wj2, Connectivity::identity(2)) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(coeff_of(wj2, generator(1, 2)) - cplx(p.S(1) / p.S(2))) < 1e-14);

  auto wj3 = build_WJ(3, p);
  CHECK(std::abs(coeff_of(wj3, Connectivity::identity(3)) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(coeff_of(wj3, generator(1, 3)) - cplx(p.S(2) / p.S(3))) < 1e-13);
  CHECK(std::abs(coeff_of(wj3, generator(2, 3)) - cplx(p.S(2) / p.S(3))) < 1e-13);
  auto e1e2 = compose(generator(1, 3), generator(2, 3)).first;
  auto e2e1 = compose(generator(2, 3), generator(1, 3)).first;
  CHECK(std::abs(coeff_of(wj3, e1e2) - cplx(p.S(1) / p.S(3))) < 1e-13);
  CHECK(std::abs(coeff_of(wj3, e2e1) - cplx(p.S(1) / p.S(3))) < 1e-13);
}

TEST_CASE("WJ_N is the idempotent killed by every generator") {
  auto p = kGeneric;
  const cplx beta = p.beta();
  for (int n = 2; n <= 6; ++n) {
    auto wj = build_WJ(n, p);
    // WJ^2 = WJ
    auto sq = multiply(wj, wj, beta);
    for (const auto& [c, a] : wj.terms)
      CHECK(std::abs(coeff_of(sq, c) - a) < 1e-10 * std::max(1.0, std::abs(a)));
    CHECK(sq.terms.size() == wj.terms.size());
    // e_i WJ = WJ e_i = 0
    for (int i = 1; i < n; ++i) {
      TLElement e(n);
      e.add(generator(i, n), 1.0);
      for (const auto& [c, a] : multiply(e, wj, beta).terms) CHECK(std::abs(a) < 1e-10);
      for (const auto& [c, a] : multiply(wj, e, beta).terms) CHECK(std::abs(a) < 1e-10);
    }
  }
  // singular parameter: WJ_3 needs S_3 != 0, which fails at Lambda = 2pi/3
  CHECK_THROWS_AS(build_WJ(3, SpectralParams::from_rational(1, 3)), SingularParameter);
  CHECK_THROWS_AS(build_WJ(12, kGeneric), CapacityError);
}

TEST_CASE("wj_matrix equals rho(build_WJ)") {
  auto p = kGeneric;
  for (int d = 1; d <= 6; ++d) {
    auto direct = rho(build_WJ(d, p), p);
    auto fast = wj_matrix(d, p);
    CHECK((direct.mat - fast).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("P^d action, the 3.3 display example") {
  auto p = kGeneric;
  const auto& basis = link_basis(4);
  // v = (defect, defect, arc(3,4)): P^2 v = v + (S_1/S_2) (arc(1,2)+arc(3,4))
  LinkState v(4, {kDefect, kDefect, 3, 2});
  auto ps = apply_Pd(v, p);
  LinkState two_arcs(4, {1, 0, 3, 2});
  CHECK(std::abs(ps.coeffs(basis.index(v)) - cplx(1.0)) < 1e-14);
  CHECK(std::abs(ps.coeffs(basis.index(two_arcs)) - cplx(p.S(1) / p.S(2))) < 1e-13);
  for (int i = 0; i < basis.dim(); ++i) {
    if (i == basis.index(v) || i == basis.index(two_arcs)) continue;
    CHECK(std::abs(ps.coeffs(i)) < 1e-14);
  }

  // P^0 = id on a 0-defect state
  LinkState w(4, {1, 0, 3, 2});
  auto pw = apply_Pd(w, p);
  CHECK(std::abs(pw.coeffs(basis.index(w)) - cplx(1.0)) < 1e-15);

  // components at the source itself are exactly 1; sectors above vanish
  for (const auto& s : basis.states) {
    auto q = apply_Pd(s, p);
    CHECK(q.coeffs(basis.index(s)) == cplx(1.0));
    for (int i = 0; i < basis.dim(); ++i)
      if (basis.states[i].defects() > s.defects()) CHECK(std::abs(q.coeffs(i)) == 0.0);
      else if (basis.states[i].defects() == s.defects() && i != basis.index(s))
        CHECK(std::abs(q.coeffs(i)) < 1e-14);
  }
}

TEST_CASE("percolation limit of P^3") {
  // Lambda_c = 2pi/3 (lambda = pi/3): lim P^3(v^3) = v^3 - (1/2)(both one-arc states)
  auto p = SpectralParams::from_rational(1, 3);
  LinkState v3(3, {kDefect, kDefect, kDefect});
  auto ps = apply_Pd(v3, p);
  const auto& basis = link_basis(3);
  LinkState a(3, {1, 0, kDefect});
  LinkState b(3, {kDefect, 2, 1});
  CHECK(std::abs(ps.coeffs(basis.index(v3)) - cplx(1.0)) < 1e-9);
  CHECK(std::abs(ps.coeffs(basis.index(a)) - cplx(-0.5)) < 1e-6);
  CHECK(std::abs(ps.coeffs(basis.index(b)) - cplx(-0.5)) < 1e-6);
}

TEST_CASE("PB basis diagonalizes rho(F_N) and block-diagonalizes rho(D_N)") {
  auto p = SpectralParams::from_rational(1, 5, 0.0);  // lambda = pi/5, generic for N=4
  const int n = 4;
  auto pb = build_PB_basis(n, p);
  CHECK(pb.size() == 6);
  MatrixXc t = pb_change_of_basis(pb);
  // unit upper-triangular in the defect grading
  for (int j = 0; j < t.cols(); ++j) {
    CHECK(std::abs(t(j, j) - cplx(1.0)) < 1e-13);
    for (int i = j + 1; i < t.rows(); ++i) CHECK(std::abs(t(i, j)) < 1e-13);
  }
  // rho(F_4) conjugated is diagonal with entries 2(-1)^d cos(lambda(d+1))
  auto f = build_rho_FN_sweep(n, p);
  MatrixXc conj = t.inverse() * f.mat * t;
  const auto& basis = link_basis(n);
  for (int i = 0; i < conj.rows(); ++i) {
    const int d = basis.states[i].defects();
    const double mu = 2.0 * (d % 2 ? -1 : 1) * std::cos(p.lambda * (d + 1));
    CHECK(std::abs(conj(i, i) - cplx(mu)) < 1e-10);
    for (int j = 0; j < conj.cols(); ++j)
      if (i != j) CHECK(std::abs(conj(i, j)) < 1e-9);
  }
  // rho(D_4(u)) block-diagonal in PB, off-block norm <= 1e-9
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> du(0.1, 0.9);
  for (int rep = 0; rep < 2; ++rep) {
    auto d4 = build_rho_DN_sweep(n, p.with_u(du(rng) * p.lambda));
    MatrixXc c = t.inverse() * d4.mat * t;
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j)
        if (basis.states[i].defects() != basis.states[j].defects())
          CHECK(std::abs(c(i, j)) < 1e-9);
  }
  // critical lambda raises SingularParameter listing the failing sectors
  CHECK_THROWS_AS(build_PB_basis(4, SpectralParams::from_rational(1, 2)), SingularParameter);
}

TEST_CASE("cP^d v = 0 when the connectivity joins contiguous defects of v") {
  auto p = kGeneric;
  const auto& basis = link_basis(4);
  // v = (def, arc(2,3), def): defects at 1 and 4 are contiguous (across the arc)
  LinkState v(4, {kDefect, 2, 1, kDefect});
  auto ps = apply_Pd(v, p);
  // c joins top points 1 and 4, with top arc (2,3) and bottom arcs (1,2),(3,4)
  Connectivity c(4, {1, 0, 3, 2, 7, 6, 5, 4});
  auto rc = rho(c, p);
  CHECK((rc.mat * ps.coeffs).cwiseAbs().maxCoeff() < 1e-12);
  // e_i on two adjacent defects of a projected state (N=4, v = dd(34))
  LinkState w(4, {kDefect, kDefect, 3, 2});
  auto pw = apply_Pd(w, p);
  auto re = rho(generator(1, 4), p);
  CHECK((re.mat * pw.coeffs).cwiseAbs().maxCoeff() < 1e-12);
  // P^d is idempotent as a map on UpTo_d: P(P v) = P v componentwise
  for (const auto& s : basis.states) {
    auto q = apply_Pd(s, p);
    VectorXc acc = VectorXc::Zero(basis.dim());
    for (int i = 0; i < basis.dim(); ++i) {
      if (std::abs(q.coeffs(i)) < 1e-16) continue;
      if (basis.states[i].defects() == s.defects())
        acc += q.coeffs(i) * apply_Pd(basis.states[i], p).coeffs;
      // lower sectors are annihilated by P^{d(s)}
    }
    CHECK((acc - q.coeffs).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("Appendix closed forms match direct projection coefficients") {
  // P^r_{} = 1; P^r_{n} closed forms; concentric and tower forms; and the
  // general recursion, all against <w | rho(WJ_r) v^r>
  std::vector<SpectralParams> lambdas;
  for (double l : {0.41, 0.73, 0.98, 1.19, 1.342}) lambdas.push_back(SpectralParams::from_real(l));
  for (const auto& p : lambdas) {
    for (int r = 2; r <= 7; ++r) {
      const auto wj = wj_matrix(r, p);
      const auto& basis = link_basis(r);
      const VectorXc direct = wj.col(basis.dim() - 1);
      for (int i = 0; i < basis.dim(); ++i) {
        const cplx got = pr_coeff_formula(basis.states[i], r, p);
        CHECK(std::abs(got - direct(i)) <= 1e-9 * std::max(1.0, std::abs(direct(i))));
        const cplx cluster = pr_coeff_cluster_route(basis.states[i], r, p);
        CHECK(std::abs(cluster - direct(i)) <= 1e-9 * std::max(1.0, std::abs(direct(i))));
      }
    }
  }
  // explicit spot checks of the named forms
  auto p = kGeneric;
  CHECK(pr_single_first(5, p) ==
        doctest::Approx(p.s_half(4) / (2 * p.s_half(1) * p.c_half(5))).epsilon(1e-14));
  // P^4_{1} at lambda = pi/3: S_{3/2}/(2 S_{1/2} C_2) with Lambda = 2pi/3 -> 0
  {
    auto p3 = SpectralParams::from_rational(1, 3);
    CHECK(std::abs(pr_single_first(4, p3)) < 1e-14);
    CHECK(std::abs(pr_coeff_formula(parse_link_notation("1", 4), 4, p3)) < 1e-6);
  }
  // reflection P^r_{n} = P^r_{r-n} for r = 6
  for (int nn = 1; nn <= 5; ++nn)
    CHECK(pr_single(nn, 6, p) == doctest::Approx(pr_single(6 - nn, 6, p)).epsilon(1e-12));
}

TEST_CASE("singularity sweep: coefficient blowups sit on zeros of C_{(r-i)/2}") {
  // scan lambda; wherever |P^r_w| exceeds 1e6 some C_{(r-i)/2} vanishes nearby
  for (int r : {4, 6, 8}) {
    const auto& basis = link_basis(r);
    for (double l = 0.05; l < 1.55; l += 0.01) {
      auto p = SpectralParams::from_real(l);
      for (const auto& w : basis.states) {
        int arcs = 0;
        for (int x : w.partner) arcs += (x != kDefect);
        arcs /= 2;
        if (arcs == 0) continue;
        if (std::abs(pr_coeff_formula(w, r, p)) > 1e6) {
          double closest = 1e9;
          for (int i = 0; i < arcs; ++i) closest = std::min(closest, std::abs(p.c_half(r - i)));
          CHECK(closest < 1e-3);
        }
      }
    }
  }
}

TEST_CASE("jordan condition and singularity report") {
  // lambda = pi/2: Lambda = pi/2, a=1, b=2
  CHECK(jordan_condition(2, 0, 1, 2));
  CHECK(jordan_condition(6, 4, 1, 2));
  CHECK(!jordan_condition(4, 2, 1, 2));
  CHECK(!jordan_condition(4, 0, 1, 2));  // d - d' = 4 is not < 2b
  // lambda = pi/3: Lambda = 2pi/3, a = 2 even: never singular
  for (int d = 0; d <= 8; d += 2)
    for (int dp = 0; dp < d; dp += 2) CHECK(!jordan_condition(d, dp, 2, 3));
  // d = d' is never a partner
  CHECK(!jordan_condition(4, 4, 1, 2));
  CHECK_THROWS_AS(jordan_condition(2, 0, 2, 4), std::invalid_argument);  // not coprime
  CHECK_THROWS_AS(jordan_condition(3, 0, 1, 2), std::invalid_argument);  // parity

  auto rep = singularity_report(6, 8, 1, 2);
  CHECK(rep.is_singular);
  CHECK(rep.partner_d_prime == 4);
  auto rep2 = singularity_report(4, 8, 1, 2);
  CHECK(!rep2.is_singular);
  auto rep3 = singularity_report(2, 8, 1, 2);
  CHECK(rep3.is_singular);
  CHECK(rep3.partner_d_prime == 0);
}

TEST_CASE("Laurent split at the critical polymer point") {
  // N=2, d=2, lambda_c = pi/2: P^2(defects) = v + (S_1/S_2) arc; as a function
  // of q the pole term is -q/((q-i)(q+i)), residue -1/2 at q_c = i.
  auto p = SpectralParams::from_rational(1, 2);
  LinkState v2(2, {kDefect, kDefect});
  auto split = laurent_split(v2, p);
  CHECK(split.d == 2);
  CHECK(split.d_prime == 0);
  const auto& basis = link_basis(2);
  const int arc_idx = basis.index(LinkState(2, {1, 0}));
  CHECK(std::abs(split.residue(arc_idx) - cplx(-0.5)) < 1e-9);
  CHECK(std::abs(split.regular(basis.index(v2)) - cplx(1.0)) < 1e-9);
  CHECK(!split.degenerate_warning);

  // non-singular input is rejected (a even at lambda = pi/3)
  CHECK_THROWS_AS(laurent_split(LinkState(2, {kDefect, kDefect}),
                                SpectralParams::from_rational(1, 3)),
                  std::invalid_argument);

  // Jordan relation for N=4, lambda_c = pi/2, sectors (2,0):
  // (F - mu_d) r = alpha s and (F - mu_d) s = 0 on the [d', d] block
  const int n = 4;
  auto f = build_rho_FN_sweep(n, p);
  const auto& b4 = link_basis(n);
  for (const auto& v : b4.states) {
    if (v.defects() != 2) continue;
    auto sp = laurent_split(v, p);
    auto sub = f.range(0, 2);  // sectors d'=0 and d=2 (lowest levels)
    const int dim = sub.dim();
    VectorXc r = sp.regular.head(dim), s = sp.residue.head(dim);
    const double mu = 2.0 * std::cos(p.lambda * 3);  // mu_d at d=2
    const VectorXc lhs = sub.mat * r - mu * r;
    // fit alpha
    const cplx alpha = s.squaredNorm() > 0 ? (s.adjoint() * lhs).value() / s.squaredNorm()
                                            : cplx(0.0);
    CHECK(std::abs(alpha) > 1e-3);
    CHECK((lhs - alpha * s).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK((sub.mat * s - mu * s).cwiseAbs().maxCoeff() <= 1e-9);
  }
}
