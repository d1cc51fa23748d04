#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopalg/potts.hpp"
#include "loopalg/transfer.hpp"

using namespace loopalg;

TEST_CASE("critical parametrization") {
  auto p2 = PottsParams::make(2, 0.3);
  CHECK(p2.lambda == doctest::Approx(pi / 4).epsilon(1e-12));
  auto p3 = PottsParams::make(3, 0.3);
  CHECK(p3.lambda == doctest::Approx(pi / 6).epsilon(1e-12));
  auto p1 = PottsParams::make(1, 0.3);
  CHECK(p1.lambda == doctest::Approx(pi / 3).epsilon(1e-12));
  // v_J v_K = Q and sqrt(Q) = 2 cos lambda = beta
  for (auto& p : {p1, p2, p3}) {
    CHECK(p.v_j() * p.v_k() == doctest::Approx(p.q).epsilon(1e-12));
    CHECK(2 * std::cos(p.lambda) == doctest::Approx(std::sqrt(p.q)).epsilon(1e-12));
    CHECK(p.v_j() / std::sqrt(p.q) ==
          doctest::Approx(std::sin(p.lambda - p.u) / std::sin(p.u)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(PottsParams::make(5, 0.3), std::invalid_argument);
}

TEST_CASE("lattice geometry self-tests") {
  // all-bonds graph: N_c = 1, #(G) = 2 + (N-1)M, N_b = 2NM
  for (int n : {2, 4}) {
    for (int m : {1, 2, 3}) {
      if (2 * n * m > 24) continue;
      auto lat = PottsLattice::make(n, m, true);
      CHECK(lat.n_sites == (n + 1) * m);
      CHECK(static_cast<int>(lat.bonds.size()) == 2 * n * m);
      const unsigned long long all = (1ULL << lat.bonds.size()) - 1;
      CHECK(fk_components(lat, all) == 1);
      CHECK(fk_loop_count(lat, all) == 2 + (n - 1) * m);
      // empty graph: N_c = N_s; Euler forces #(G) = N_s
      CHECK(fk_components(lat, 0) == lat.n_sites);
      CHECK(fk_loop_count(lat, 0) == lat.n_sites);
      // J-bonds on odd box columns: exactly NM of each type
      int nj = 0;
      for (auto& b : lat.bonds) nj += b.is_j;
      CHECK(nj == n * m);
    }
  }
}

TEST_CASE("Euler relation holds for every graph") {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{2, 1}, {4, 1}}) {
    auto lat = PottsLattice::make(n, m, true);
    const int nb = static_cast<int>(lat.bonds.size());
    for (unsigned long long mask = 0; mask < (1ULL << nb); ++mask) {
      const int comps = fk_components(lat, mask);
      const int loops = fk_loop_count(lat, mask);
      const int bonds = __builtin_popcountll(mask);
      REQUIRE(2 * comps == loops + lat.n_sites - bonds);
    }
  }
}

TEST_CASE("spin sum equals FK sum") {
  // N=2, M=1: 16 graphs vs exhaustive spin sum
  for (int q : {2, 3}) {
    auto params = PottsParams::make(q, 0.37 * PottsParams::make(q, 1).lambda);
    const double z_fk = fk_bruteforce_Z(2, 1, params);
    const double z_spin = spin_bruteforce_Z(2, 1, params);
    CHECK(z_fk == doctest::Approx(z_spin).epsilon(1e-12));
  }
  for (int q : {2, 3}) {
    auto params = PottsParams::make(q, 0.52 * PottsParams::make(q, 1).lambda);
    const double z_fk = fk_bruteforce_Z(4, 1, params);
    const double z_spin = spin_bruteforce_Z(4, 1, params);
    CHECK(z_fk == doctest::Approx(z_spin).epsilon(1e-12));
  }
}

TEST_CASE("three-way equality: spin = FK = loop") {
  for (int q : {2, 3}) {
    const double lambda = PottsParams::make(q, 1).lambda;
    for (double frac : {0.3, 0.62}) {
      auto params = PottsParams::make(q, frac * lambda);
      for (int m : {1, 2}) {
        const double z_fk = fk_bruteforce_Z(4, m, params);
        const double z_spin = spin_bruteforce_Z(4, m, params);
        const double z_loop = loop_Z(4, m, params);
        CHECK(std::abs(z_fk - z_spin) <= 1e-10 * z_fk);
        CHECK(std::abs(z_loop - z_fk) <= 1e-8 * z_fk);
      }
    }
  }
  // Q=1 (percolation) on the loop/FK side only
  {
    auto params = PottsParams::make(1, 0.4 * PottsParams::make(1, 1).lambda);
    const double z_fk = fk_bruteforce_Z(2, 2, params);
    const double z_loop = loop_Z(2, 2, params);
    CHECK(std::abs(z_loop - z_fk) <= 1e-8 * z_fk);
  }
}

TEST_CASE("spin transfer matrix") {
  for (int q : {2, 3}) {
    const double lambda = PottsParams::make(q, 1).lambda;
    auto params = PottsParams::make(q, 0.44 * lambda);
    auto lam_tilde = spin_transfer(4, params, false);
    // entries real and positive
    CHECK(lam_tilde.minCoeff() > 0.0);
    // tr Lambda~^M is the cylinder partition function
    for (int m : {1, 2, 3}) {
      Eigen::MatrixXd p = Eigen::MatrixXd::Identity(lam_tilde.rows(), lam_tilde.cols());
      for (int k = 0; k < m; ++k) p = p * lam_tilde;
      if (std::pow(static_cast<double>(q), (4 + 1) * m) > 2.1e7) continue;
      const double z = spin_bruteforce_Z(4, m, params);
      CHECK(p.trace() == doctest::Approx(z).epsilon(1e-10));
    }
    // tr Lambda^M = tr(rho(D^M) W)
    auto lam = spin_transfer(4, params, true);
    auto d = build_rho_DN_sweep(4, params.loop_params());
    for (int m : {1, 2, 3}) {
      Eigen::MatrixXd p = Eigen::MatrixXd::Identity(lam.rows(), lam.cols());
      MatrixXc dp = MatrixXc::Identity(d.dim(), d.dim());
      for (int k = 0; k < m; ++k) {
        p = p * lam;
        dp = dp * d.mat;
      }
      SectorMatrix dm = d;
      dm.mat = dp;
      const double rhs = weighted_trace(dm, params.loop_params()).real();
      CHECK(p.trace() == doctest::Approx(rhs).epsilon(1e-8));
    }
    // left-right reflection conjugates Lambda(u) into Lambda(lambda - u)
    auto mirrored = spin_transfer(4, PottsParams::make(q, lambda - params.u), true);
    const int half = 2;
    const int dim = static_cast<int>(lam.rows());
    Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(dim, dim);
    for (int code = 0; code < dim; ++code) {
      int rev = 0;
      int c = code;
      std::vector<int> digits(half);
      for (int i = 0; i < half; ++i) {
        digits[i] = c % q;
        c /= q;
      }
      for (int i = 0; i < half; ++i) rev = rev * q + digits[i];
      perm(rev, code) = 1.0;
    }
    CHECK((perm * lam * perm.transpose() - mirrored).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_THROWS_AS(spin_transfer(3, PottsParams::make(2, 0.2)), std::invalid_argument);
  CHECK_THROWS_AS(spin_transfer(4, PottsParams::make(1, 0.2)), std::invalid_argument);
}

TEST_CASE("boundary partition functions") {
  {
    const double lambda = PottsParams::make(2, 1).lambda;
    for (int n : {2, 4}) {
      auto params = PottsParams::make(2, 0.41 * lambda);
      for (char kind : {'a', 'b', 'c', 'd'}) {
        const double z_loop = boundary_Z(kind, n, 1, params);
        const double z_spin = boundary_Z_spin(kind, n, 1, params);
        INFO("kind ", kind, " N ", n);
        CHECK(std::abs(z_loop - z_spin) <= 1e-8 * std::max(1.0, std::abs(z_spin)));
      }
    }
  }
  CHECK_THROWS_AS(boundary_Z('x', 4, 1, PottsParams::make(2, 0.3)), std::invalid_argument);
  CHECK_THROWS_AS(boundary_Z('a', 3, 1, PottsParams::make(2, 0.3)), std::invalid_argument);
}

TEST_CASE("capacity guards") {
  CHECK_THROWS_AS(fk_bruteforce_Z(4, 4, PottsParams::make(2, 0.3)), CapacityError);
  CHECK_THROWS_AS(spin_transfer(30, PottsParams::make(3, 0.2)), CapacityError);
}
