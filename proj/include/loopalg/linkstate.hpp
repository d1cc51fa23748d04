#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loopalg/common.hpp"

namespace loopalg {

// Sentinel partner value for a point paired to infinity.
inline constexpr int kDefect = -1;

// ---------------------------------------------------------------------------
// LinkState: a non-crossing pairing of N points on a line, unpaired points
// ("defects") running to infinity. Points are 0-indexed internally; all text
// I/O uses 1-indexed labels.
// ---------------------------------------------------------------------------
struct LinkState {
  int n = 0;
  std::vector<int> partner;  // partner[i] = j for an arc i<->j, kDefect otherwise

  LinkState() = default;
  LinkState(int n_points, std::vector<int> p);

  int defects() const;
  bool is_defect(int i) const { return partner[i] == kDefect; }
  bool operator==(const LinkState& o) const { return n == o.n && partner == o.partner; }

  // Canonical in-sector order: lexicographic on the partner array with the
  // defect sentinel sorting greatest.
  static bool canonical_less(const LinkState& a, const LinkState& b);
};

// All N-link states, ordered by increasing defect number, then canonically.
std::vector<LinkState> enumerate_link_basis(int n);

// dim V_N^d = binom(N,(N-d)/2) - binom(N,(N-d)/2-1); 0 on parity mismatch.
long long sector_dimension(int n, int d);

// ---------------------------------------------------------------------------
// Connectivity: a planar perfect matching of 2N rectangle boundary points,
// labeled 0..N-1 on the bottom (left to right) and N..2N-1 on the top
// (left to right). The identity pairs bottom k with top k.
// ---------------------------------------------------------------------------
struct Connectivity {
  int n = 0;                 // number of sites per side
  std::vector<int> partner;  // involution on 0..2n-1, no fixed points

  Connectivity() = default;
  Connectivity(int n_sites, std::vector<int> p);

  static Connectivity identity(int n);
  bool operator==(const Connectivity& o) const { return n == o.n && partner == o.partner; }
  bool operator<(const Connectivity& o) const { return partner < o.partner; }
};

// Generator e_i, 1 <= i <= N-1: pairs bottom (i,i+1) and top (i,i+1).
Connectivity generator(int i, int n);

// All Catalan(N) connectivities of TL_N.
std::vector<Connectivity> enumerate_connectivities(int n);

// ---------------------------------------------------------------------------
// Encodings (Appendix-notation words)
// ---------------------------------------------------------------------------

// One symbol per point: 0 = defect, +1 = arc opens, -1 = arc closes.
struct EtaWord {
  std::vector<int> symbols;
  bool operator==(const EtaWord& o) const { return symbols == o.symbols; }
};

EtaWord eta_encode(const LinkState& w);
LinkState eta_decode(const EtaWord& word);
std::string eta_to_text(const EtaWord& word);  // "0,0,+,-,0"
EtaWord eta_from_text(const std::string& text);

// Token sequence [m_0, m_1, ..., m_L] where integers count points between
// consecutive bubble middles (2-bubble delimiting points included) and the
// asterisk stands for the interior of a 2-bubble. Defined only for states
// whose bubbles have depth <= 2.
struct MuWord {
  static constexpr int kStar = -1;
  std::vector<int> tokens;
  bool operator==(const MuWord& o) const { return tokens == o.tokens; }
};

// Empty optional = state has an n-bubble with n >= 3 (unsupported).
std::optional<MuWord> mu_encode(const LinkState& w);
std::string mu_to_text(const MuWord& word);  // "[3,8,2,6,1]" / "[2,*,5,*,6,1]"

// Nesting depth of the deepest bubble (0 for a state with no arcs).
int max_bubble_depth(const LinkState& w);

// ---------------------------------------------------------------------------
// v-notation: v^N_{n1,...,nk}, each n_i in 1..N-1 a half-way point label,
// arcs closed inner to outer. parse takes the bare comma list ("2,2,7,7");
// the "N=10; arcs=2,2,7,7" form is handled by parse_v_notation.
// ---------------------------------------------------------------------------
LinkState parse_link_notation(const std::string& spec, int n);
std::string format_link_notation(const LinkState& w);  // bare comma list
LinkState parse_v_notation(const std::string& text);   // "N=10; arcs=3,7"
std::string format_v_notation(const LinkState& w);

}  // namespace loopalg
