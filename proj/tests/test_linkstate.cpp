#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "loopalg/linkstate.hpp"

using namespace loopalg;

TEST_CASE("link basis counts and ordering") {
  // N=4: six states, 2 with d=0, 3 with d=2, 1 with d=4
  auto b4 = enumerate_link_basis(4);
  REQUIRE(b4.size() == 6);
  int counts[3] = {0, 0, 0};
  for (const auto& s : b4) ++counts[s.defects() / 2];
  CHECK(counts[0] == 2);
  CHECK(counts[1] == 3);
  CHECK(counts[2] == 1);
  // increasing defect number along the basis
  for (size_t i = 1; i < b4.size(); ++i) CHECK(b4[i - 1].defects() <= b4[i].defects());

  // N=1: a single defect
  auto b1 = enumerate_link_basis(1);
  REQUIRE(b1.size() == 1);
  CHECK(b1[0].defects() == 1);

  CHECK_THROWS_AS(enumerate_link_basis(0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_link_basis(-2), std::invalid_argument);
}

TEST_CASE("sector dimensions agree with the closed formula") {
  // N=6, d=2 gives 9 states (exhaustive generation vs dimension formula)
  CHECK(sector_dimension(6, 2) == 9);
  for (int n = 1; n <= 12; ++n) {
    auto basis = enumerate_link_basis(n);
    long long total = 0;
    for (int d = n % 2; d <= n; d += 2) {
      const long long dim = sector_dimension(n, d);
      long long count = 0;
      for (const auto& s : basis) count += (s.defects() == d);
      CHECK(count == dim);
      total += dim;
    }
    CHECK(total == binomial(n, n / 2));
    CHECK(static_cast<long long>(basis.size()) == total);
    // no duplicates
    std::set<std::vector<int>> keys;
    for (const auto& s : basis) keys.insert(s.partner);
    CHECK(keys.size() == basis.size());
  }
}

TEST_CASE("link state invariants are enforced") {
  CHECK_THROWS_AS(LinkState(4, {1, 0, 3, 1}), std::invalid_argument);  // not involution
  CHECK_THROWS_AS(LinkState(4, {2, 3, 0, 1}), std::invalid_argument);  // crossing
  CHECK_THROWS_AS(LinkState(4, {3, kDefect, kDefect, 0}), std::invalid_argument);  // defect under arc
  CHECK_NOTHROW(LinkState(4, {1, 0, kDefect, kDefect}));
}

TEST_CASE("eta words") {
  // v^10_{3,7} -> {0,0,1,-1,0,0,1,-1,0,0}
  auto v = parse_link_notation("3,7", 10);
  auto eta = eta_encode(v);
  CHECK(eta.symbols == std::vector<int>{0, 0, 1, -1, 0, 0, 1, -1, 0, 0});
  CHECK(eta_decode(eta) == v);

  // all-defect state has an all-zero word
  auto vN = parse_link_notation("", 5);
  CHECK(eta_encode(vN).symbols == std::vector<int>(5, 0));

  // more examples from the same family
  auto v2 = parse_link_notation("2,2,7,7", 10);
  CHECK(eta_encode(v2).symbols == std::vector<int>{1, 1, -1, -1, 0, 1, 1, -1, -1, 0});
  auto v3 = parse_link_notation("2,6,8,7", 10);
  CHECK(eta_encode(v3).symbols == std::vector<int>{0, 1, -1, 0, 1, 1, -1, 1, -1, -1});
  auto v4 = parse_link_notation("3,5,4,8,5", 10);
  CHECK(eta_encode(v4).symbols == std::vector<int>{1, 1, 1, -1, 1, -1, -1, 1, -1, -1});

  CHECK(eta_to_text(eta_encode(parse_link_notation("2", 4))) == "0,+,-,0");
  CHECK(eta_from_text("0,+,-,0") == eta_encode(parse_link_notation("2", 4)));

  // round trip over a full basis
  for (const auto& s : enumerate_link_basis(8)) CHECK(eta_decode(eta_encode(s)) == s);
}

TEST_CASE("mu words") {
  // mu(v^20_{3,11,13,19}) = [3,8,2,6,1]
  auto w = parse_link_notation("3,11,13,19", 20);
  auto mu = mu_encode(w);
  REQUIRE(mu.has_value());
  CHECK(mu->tokens == std::vector<int>{3, 8, 2, 6, 1});

  // mu(v^20_{3,5,4,12,12,19}) = [2,*,5,*,6,1]
  auto w2 = parse_link_notation("3,5,4,12,12,19", 20);
  auto mu2 = mu_encode(w2);
  REQUIRE(mu2.has_value());
  const int S = MuWord::kStar;
  CHECK(mu2->tokens == std::vector<int>{2, S, 5, S, 6, 1});
  CHECK(mu_to_text(*mu2) == "[2,*,5,*,6,1]");

  // 3-bubble is unsupported
  auto w3 = parse_link_notation("3,5,4,8,5", 10);
  CHECK(max_bubble_depth(w3) == 3);
  CHECK(!mu_encode(w3).has_value());

  // defined exactly when the bubble depth is at most 2
  for (const auto& s : enumerate_link_basis(8)) {
    CHECK(mu_encode(s).has_value() == (max_bubble_depth(s) <= 2));
    auto m = mu_encode(s);
    if (m) {
      // integer tokens plus 2-bubble interiors cover all N points
      int total = 0;
      for (int t : m->tokens)
        if (t != MuWord::kStar) total += t;
      int interior = 0;
      for (int i = 0; i < s.n; ++i) {
        const int j = s.partner[i];
        if (j > i)
          for (int k = i + 1; k < j; ++k)
            if (s.partner[k] != kDefect) {
              interior = interior + (j - i - 1);
              break;
            }
      }
      CHECK(total + interior == s.n);
    }
  }
}

TEST_CASE("v-notation parsing") {
  // "2,2,7,7" with N=10: two nested pairs
  auto v = parse_link_notation("2,2,7,7", 10);
  CHECK(v.partner[0] == 3);
  CHECK(v.partner[1] == 2);
  CHECK(v.partner[5] == 8);
  CHECK(v.partner[6] == 7);
  CHECK(v.defects() == 2);

  // empty list: all defects
  auto v3 = parse_link_notation("", 3);
  CHECK(v3.defects() == 3);

  // "3,5,4,8,5" with N=10 has a 3-bubble
  auto vb = parse_link_notation("3,5,4,8,5", 10);
  CHECK(max_bubble_depth(vb) == 3);
  CHECK(vb.partner[0] == 9);

  // errors: endpoint reuse / defect under an arc
  CHECK_THROWS_AS(parse_link_notation("1,1", 4), std::invalid_argument);
  CHECK_THROWS_AS(parse_link_notation("1,3,2", 4), std::invalid_argument);
  CHECK_THROWS_AS(parse_link_notation("0", 4), std::invalid_argument);
  CHECK_THROWS_AS(parse_link_notation("4", 4), std::invalid_argument);

  // format/parse round trip over a basis
  for (const auto& s : enumerate_link_basis(7)) {
    CHECK(parse_link_notation(format_link_notation(s), 7) == s);
    CHECK(parse_v_notation(format_v_notation(s)) == s);
  }
}

TEST_CASE("connectivity enumeration and generators") {
  for (int n = 1; n <= 5; ++n)
    CHECK(static_cast<long long>(enumerate_connectivities(n).size()) == catalan(n));

  auto e1 = generator(1, 2);
  CHECK(e1.partner == std::vector<int>{1, 0, 3, 2});
  CHECK_THROWS_AS(generator(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(generator(3, 3), std::invalid_argument);

  // identity pairs bottom k with top k
  auto id = Connectivity::identity(3);
  for (int k = 0; k < 3; ++k) CHECK(id.partner[k] == 3 + k);

  CHECK_THROWS_AS(Connectivity(2, {3, 2, 1, 0}), std::invalid_argument);  // crossing on rectangle
}
