#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "loopalg/linkrep.hpp"

using namespace loopalg;

namespace {
const SpectralParams kGeneric = SpectralParams::from_real(0.9531, 0.3);

TLElement random_element(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  TLElement x(n);
  for (const auto& c : enumerate_connectivities(n))
    if (coef(rng) > -0.2) x.add(c, cplx(coef(rng), coef(rng)));
  return x;
}
}  // namespace

TEST_CASE("apply_connectivity basics") {
  // apply(id, v) = (v, 0)
  for (const auto& v : link_basis(5).states) {
    auto [w, l] = apply_connectivity(Connectivity::identity(5), v);
    CHECK(w == v);
    CHECK(l == 0);
  }
  // apply(e_1, arc(1,2)-state) = same state with one loop (e_1^2 = beta e_1)
  auto arc = parse_link_notation("1", 2);
  auto [w, l] = apply_connectivity(generator(1, 2), arc);
  CHECK(w == arc);
  CHECK(l == 1);

  // the 8-point diagram of the link-action display: c v = beta^2 w, with
  // c: b1-t1, b2-b3, b4-t2, b5-t3, b6-b7, b8-t4, t5-t8, t6-t7
  // v: arcs (1,2), (5,8), (6,7), defects at 3, 4
  // w: arcs (1,4), (2,3), (6,7), defects at 5, 8   (two loops closed)
  Connectivity c(8, {8, 2, 1, 9, 10, 6, 5, 11, 0, 3, 4, 7, 15, 14, 13, 12});
  LinkState v(8, {1, 0, kDefect, kDefect, 7, 6, 5, 4});
  auto [res, loops] = apply_connectivity(c, v);
  CHECK(loops == 2);
  LinkState expect(8, {3, 2, 1, 0, kDefect, 6, 5, kDefect});
  CHECK(res == expect);
}

TEST_CASE("rho is a representation and block-upper-triangular") {
  auto params = kGeneric;
  std::mt19937 rng(777);

  // rho(e_1) for N=2 in basis {arc, defects}: [[beta, 1], [0, 0]]
  auto m = rho(generator(1, 2), params);
  CHECK(m.mat(0, 0).real() == doctest::Approx(params.beta()));
  CHECK(m.mat(0, 1).real() == doctest::Approx(1.0));
  CHECK(std::abs(m.mat(1, 0)) == 0.0);
  CHECK(std::abs(m.mat(1, 1)) == 0.0);

  // rho(id) = identity
  CHECK((rho(TLElement::identity(4), params).mat - MatrixXc::Identity(6, 6)).norm() == 0.0);

  // rho(e_1 e_2) = rho(e_1) rho(e_2) for N=3
  {
    auto [e12, l] = compose(generator(1, 3), generator(2, 3));
    CHECK(l == 0);
    auto lhs = rho(e12, params).mat;
    auto rhs = (rho(generator(1, 3), params).mat * rho(generator(2, 3), params).mat).eval();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
  }

  // rho(xy) = rho(x) rho(y) for random elements, relative 1e-10
  for (int n : {4, 5}) {
    for (int rep = 0; rep < 5; ++rep) {
      auto x = random_element(n, rng);
      auto y = random_element(n, rng);
      auto xy = multiply(x, y, cplx(params.beta()));
      auto lhs = rho(xy, params).mat;
      auto rhs = (rho(x, params).mat * rho(y, params).mat).eval();
      const double scale = std::max(1.0, lhs.cwiseAbs().maxCoeff());
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() / scale < 1e-10);
    }
  }

  // block-triangularity of rho(x) for all connectivities, N <= 6 (spot of N<=10)
  for (int n = 2; n <= 6; ++n)
    for (const auto& c : enumerate_connectivities(n))
      CHECK(rho(c, params).triangularity_defect() == 0.0);

  // single non-zero entry per column, a power of beta
  for (const auto& c : enumerate_connectivities(4)) {
    auto r = rho(c, params);
    for (int col = 0; col < r.dim(); ++col) {
      int nonzero = 0;
      for (int row = 0; row < r.dim(); ++row)
        if (std::abs(r.mat(row, col)) > 0) ++nonzero;
      CHECK(nonzero == 1);
    }
  }

  // rho is faithful on generators (sanity)
  for (int i = 1; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      CHECK((rho(generator(i, 4), params).mat - rho(generator(j, 4), params).mat).norm() > 0.1);
}

TEST_CASE("weight matrix") {
  auto params = kGeneric;
  auto w = weight_matrix(6, params);
  // sector d=0 -> 1
  CHECK(w.mat(0, 0).real() == doctest::Approx(1.0));
  // sector d=1 would be beta (odd N); check via N=3
  auto w3 = weight_matrix(3, params);
  const int off = w3.sector_offsets[0];
  CHECK(w3.mat(off, off).real() == doctest::Approx(params.beta()).epsilon(1e-12));
  // diagonal and constant per sector
  for (int s = 0; s < w.sectors(); ++s) {
    const int d = w.sector_defects[s];
    const double expect = std::sin((d + 1) * params.lambda) / std::sin(params.lambda);
    for (int i = 0; i < w.sector_dims[s]; ++i)
      CHECK(w.mat(w.sector_offsets[s] + i, w.sector_offsets[s] + i).real() ==
            doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK_THROWS_AS(weight_matrix(4, SpectralParams::from_rational(0, 1)), SingularParameter);
}

TEST_CASE("M matrices") {
  auto params = kGeneric;
  for (int n : {2, 4, 6, 8}) {
    auto M = matrix_M(n, params);
    auto Minv = matrix_M_inverse(n, params);
    CHECK(((M * Minv) - Eigen::MatrixXd::Identity(M.rows(), M.cols())).cwiseAbs().maxCoeff() <
          1e-12);
    // diagonal of M^{-1} is beta^d
    for (int i = 0; i <= n / 2; ++i)
      CHECK(Minv(i, i) == doctest::Approx(std::pow(params.beta(), 2 * i)).epsilon(1e-12));
  }
  // N=2 explicit: M = [[1, beta^-2], [0, beta^-2]]
  {
    auto M = matrix_M(2, params);
    const double b2 = std::pow(params.beta(), -2.0);
    CHECK(M(0, 0) == doctest::Approx(1.0));
    CHECK(M(0, 1) == doctest::Approx(b2));
    CHECK(M(1, 0) == 0.0);
    CHECK(M(1, 1) == doctest::Approx(b2));
  }
  // column sums of M^{-1}: sum_{d'<=d} (M^{-1})_{d'd} = sin(lambda(d+1))/sin(lambda), N=8, lambda=pi/5
  {
    auto p5 = SpectralParams::from_rational(1, 5);
    auto Minv = matrix_M_inverse(8, p5);
    for (int j = 0; j <= 4; ++j) {
      const int d = 2 * j;
      double sum = 0;
      for (int i = 0; i <= j; ++i) sum += Minv(i, j);
      CHECK(sum == doctest::Approx(std::sin(p5.lambda * (d + 1)) / std::sin(p5.lambda))
                       .epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(matrix_M(3, params), std::invalid_argument);
  CHECK_THROWS_AS(matrix_M(4, SpectralParams::from_rational(1, 2)), SingularParameter);
}

TEST_CASE("two-trace reconstruction: tr_d rho(C) = sum_d' M_dd' tau(C_d')") {
  auto params = kGeneric;
  std::mt19937 rng(4242);
  for (int n : {4, 6}) {
    auto M = matrix_M(n, params);
    for (int rep = 0; rep < 5; ++rep) {
      auto x = random_element(n, rng);
      // split by delta and take tau of each part
      std::vector<cplx> tau_d(n / 2 + 1, 0.0);
      for (const auto& [c, coeff] : x.terms) {
        TLElement single(n);
        single.add(c, coeff);
        tau_d[delta_of(c) / 2] += trace_tau(single, params);
      }
      auto r = rho(x, params);
      for (int s = 0; s < r.sectors(); ++s) {
        const int d = r.sector_defects[s];
        cplx expect = 0.0;
        for (int j = 0; j <= n / 2; ++j) expect += M(d / 2, j) * tau_d[j];
        const cplx got = r.block(s, s).trace();
        CHECK(std::abs(got - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
      }
    }
  }
}
