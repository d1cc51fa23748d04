#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "loopalg/extprec.hpp"
#include "loopalg/spectral.hpp"
#include "loopalg/transfer.hpp"
#include "loopalg/wenzl.hpp"

using namespace loopalg;

namespace {

std::vector<double> seeded_u(const SpectralParams& p, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> du(0.1, 0.9);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(du(rng) * p.lambda);
  return out;
}

std::vector<std::pair<int, int>> all_links(const std::vector<JordanReport>& reports) {
  std::vector<std::pair<int, int>> links;
  for (const auto& r : reports)
    links.insert(links.end(), r.sector_links.begin(), r.sector_links.end());
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
  return links;
}

}  // namespace

TEST_CASE("sector spectrum") {
  // identity: all ones
  auto id = identity_sector_matrix(4);
  for (const auto& [d, vals] : sector_spectrum(id))
    for (cplx v : vals) CHECK(std::abs(v - cplx(1.0)) < 1e-14);

  // rho(F_6): sector d carries 2(-1)^d cos(lambda(d+1)) with multiplicity dim V_6^d
  auto p = SpectralParams::from_real(0.618);
  auto f = build_rho_FN_sweep(6, p);
  auto spec = sector_spectrum(f);
  for (const auto& [d, vals] : spec) {
    CHECK(static_cast<long long>(vals.size()) == sector_dimension(6, d));
    const double mu = 2.0 * (d % 2 ? -1 : 1) * std::cos(p.lambda * (d + 1));
    for (cplx v : vals) CHECK(std::abs(v - cplx(mu)) < 1e-9);
  }

  // sector spectra of rho(D_4) match the dense full-matrix eigenvalues
  auto pd = SpectralParams::from_rational(1, 4, 0.31);
  auto dmat = build_rho_DN_sweep(4, pd);
  auto by_sector = sector_spectrum(dmat);
  std::vector<cplx> collected;
  for (auto& [d, vals] : by_sector) collected.insert(collected.end(), vals.begin(), vals.end());
  Eigen::ComplexEigenSolver<MatrixXc> es(dmat.mat, false);
  std::vector<cplx> full(es.eigenvalues().data(), es.eigenvalues().data() + dmat.dim());
  auto key = [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  };
  std::sort(collected.begin(), collected.end(), key);
  std::sort(full.begin(), full.end(), key);
  for (size_t i = 0; i < full.size(); ++i) CHECK(std::abs(collected[i] - full[i]) < 1e-8);
}

TEST_CASE("jordan_analyze: diagonal matrix and basic errors") {
  SectorMatrix m = identity_sector_matrix(4);
  m.mat.diagonal() << 1, 1, 2, 2, 2, 3;
  auto reports = jordan_analyze(m, 1e-9);
  CHECK(reports.size() == 3);
  for (const auto& r : reports) {
    CHECK(r.block_size_histogram.size() == 1);
    CHECK(r.block_size_histogram.count(1) == 1);
    CHECK(r.sector_links.empty());
  }
  CHECK(is_diagonalizable(reports));
  CHECK_THROWS_AS(jordan_analyze(m, -1.0), std::invalid_argument);
}

TEST_CASE("jordan_analyze: rho(F_4) at lambda = pi/2 has one (2,0) block") {
  auto p = SpectralParams::from_rational(1, 2);
  auto f = build_rho_FN_sweep(4, p);
  auto reports = jordan_analyze(f, 1e-9);
  // all eigenvalues collapse to 0 (F^2 = 0): a single cluster
  REQUIRE(reports.size() == 1);
  CHECK(std::abs(reports[0].eigenvalue) < 1e-9);
  CHECK(reports[0].algebraic_multiplicity == 6);
  // two size-2 blocks (rank F_4(pi/2) = 2: the three d=2 columns map onto two
  // independent d=0 vectors), the remaining two vectors in size-1 blocks
  CHECK(reports[0].block_size_histogram.at(2) == 2);
  CHECK(reports[0].block_size_histogram.at(1) == 2);
  CHECK(all_links(reports) == std::vector<std::pair<int, int>>{{2, 0}});
}

TEST_CASE("jordan_analyze agrees with the boxed condition for F_N") {
  // predicted-vs-detected over coprime (a,b), a odd, b <= 4, N <= 6
  for (long b = 2; b <= 4; ++b) {
    for (long a = 1; a < b; a += 2) {
      if (std::gcd(a, b) != 1) continue;
      auto p = SpectralParams::from_rational(b - a, b);  // Lambda = pi a / b
      REQUIRE(p.a() == a);
      REQUIRE(p.b() == b);
      for (int n = 2; n <= 6; ++n) {
        auto f = build_rho_FN_sweep(n, p);
        auto detected = all_links(jordan_analyze(f, 1e-9));
        std::vector<std::pair<int, int>> predicted;
        for (int d = n % 2; d <= n; d += 2)
          for (int dp = n % 2; dp < d; dp += 2)
            if (jordan_condition(d, dp, a, b)) predicted.emplace_back(d, dp);
        std::sort(predicted.begin(), predicted.end());
        CHECK(detected == predicted);
      }
    }
  }
}

TEST_CASE("percolation and irrational lambda give diagonalizable D_N") {
  // lambda = pi/3 (percolation): no Jordan blocks for N = 4, 5, 6
  auto p3 = SpectralParams::from_rational(1, 3);
  for (int n : {4, 5, 6}) {
    for (double u : seeded_u(p3, 3, 1234)) {
      auto d = build_rho_DN_sweep(n, p3.with_u(u));
      CHECK(is_diagonalizable(jordan_analyze(d, 1e-9)));
    }
  }
  // irrational lambda/pi (1 radian): no Jordan blocks, N <= 6
  auto p1 = SpectralParams::from_real(1.0);
  for (int n : {4, 5, 6}) {
    for (double u : seeded_u(p1, 2, 77)) {
      auto d = build_rho_DN_sweep(n, p1.with_u(u));
      CHECK(is_diagonalizable(jordan_analyze(d, 1e-9)));
    }
  }
}

TEST_CASE("links only between sectors with equal F-diagonal values") {
  auto p = SpectralParams::from_rational(1, 2);
  for (int n : {4, 6}) {
    auto f = build_rho_FN_sweep(n, p);
    for (const auto& rep : jordan_analyze(f, 1e-9))
      for (auto [d, dp] : rep.sector_links)
        CHECK(std::abs(std::cos(p.lambda * (d + 1)) - std::cos(p.lambda * (dp + 1))) <= 1e-9);
  }
}

TEST_CASE("D_N at critical lambda = pi/2 carries the same sector links as F_N") {
  auto p = SpectralParams::from_rational(1, 2, 0.41);
  auto d = build_rho_DN_sweep(4, p);
  auto links = all_links(jordan_analyze(d, 1e-9));
  CHECK(links == std::vector<std::pair<int, int>>{{2, 0}});
  CHECK(sector_blocks_diagonalizable(d, 1e-9));
}

TEST_CASE("commuting family refinement") {
  // single identity: one space of full dimension
  {
    std::vector<SectorMatrix> fam = {identity_sector_matrix(3)};
    auto spaces = commuting_family_refine(fam, 1e-9);
    REQUIRE(spaces.size() == 1);
    CHECK(spaces[0].basis.cols() == 3);
  }
  // non-commuting input is rejected
  {
    SectorMatrix a = identity_sector_matrix(2);
    a.mat << 0, 1, 0, 0;
    SectorMatrix b = identity_sector_matrix(2);
    b.mat << 0, 0, 1, 0;
    CHECK_THROWS_AS(commuting_family_refine({a, b}, 1e-9), std::invalid_argument);
  }
  // {rho(F_4), rho(D_4(u0))} at lambda = pi/2: the refinement isolates the
  // subspace carrying the (2,0) Jordan link
  {
    auto p = SpectralParams::from_rational(1, 2, 0.37);
    auto f = build_rho_FN_sweep(4, p);
    auto d = build_rho_DN_sweep(4, p);
    auto spaces = commuting_family_refine({f, d}, 1e-8);
    int total = 0;
    bool found_link_space = false;
    for (const auto& w : spaces) {
      total += static_cast<int>(w.basis.cols());
      // invariance residuals
      for (const auto& m : {f, d}) {
        const MatrixXc r = w.basis.adjoint() * m.mat * w.basis;
        const double res = (m.mat * w.basis - w.basis * r).cwiseAbs().maxCoeff();
        CHECK(res <= 1e-7 * std::max(1.0, m.mat.cwiseAbs().maxCoeff()));
      }
      if (w.basis.cols() >= 2) {
        // does this space carry a nilpotent part of F?
        const MatrixXc r = w.basis.adjoint() * f.mat * w.basis;
        MatrixXc offdiag = r;
        offdiag.diagonal().setZero();
        if (offdiag.cwiseAbs().maxCoeff() > 1e-9) found_link_space = true;
      }
    }
    CHECK(total == 6);
    CHECK(found_link_space);
  }
  // Fourier family {C_0,...,C_6} for N=3: decomposition invariant under D(u)
  {
    auto p = SpectralParams::from_real(0.694);
    auto coeffs = fourier_coefficients(3, p);
    auto spaces = commuting_family_refine(coeffs, 1e-8);
    auto dfresh = build_rho_DN_sweep(3, p.with_u(0.2345));
    int total = 0;
    for (const auto& w : spaces) {
      total += static_cast<int>(w.basis.cols());
      const MatrixXc r = w.basis.adjoint() * dfresh.mat * w.basis;
      const double res = (dfresh.mat * w.basis - w.basis * r).cwiseAbs().maxCoeff();
      CHECK(res <= 1e-8 * std::max(1.0, dfresh.mat.cwiseAbs().maxCoeff()));
    }
    CHECK(total == dfresh.dim());
  }
}

TEST_CASE("extended-precision rank sequence and F matrix") {
  auto p = SpectralParams::from_rational(1, 2);
  auto f = build_rho_FN_sweep(4, p);
  // extended and double ranks agree on a clean problem
  auto rx = xp::rank_sequence(f.mat, 0.0, 3, 1e-30);
  CHECK(rx[0] == 2);  // rank F_4 = 2 at pi/2
  CHECK(rx[1] == 0);  // F^2 = 0
  // extended assembly of rho(F_N) matches the double sweep
  auto fx = xp::fn_matrix(4, p.lambda);
  CHECK((fx - f.mat).cwiseAbs().maxCoeff() < 1e-11);
  // extended-mode jordan analysis reproduces the (2,0) link
  auto reports = jordan_analyze(f, 1e-9, Precision::Extended);
  CHECK(all_links(reports) == std::vector<std::pair<int, int>>{{2, 0}});
}
