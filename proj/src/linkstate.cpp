#include "loopalg/linkstate.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>

namespace loopalg {

// ---------------------------------------------------------------------------
// Threading helpers (declared in common.hpp)
// ---------------------------------------------------------------------------

namespace {
std::atomic<int> g_max_threads{1};
}

void set_max_threads(int n) { g_max_threads = n; }
int max_threads() {
  int n = g_max_threads;
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

void parallel_for(int n, const std::function<void(int)>& body) {
  const int nt = std::min(max_threads(), n);
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// LinkState
// ---------------------------------------------------------------------------

LinkState::LinkState(int n_points, std::vector<int> p) : n(n_points), partner(std::move(p)) {
  if (n <= 0) throw std::invalid_argument("LinkState: N must be positive");
  if (static_cast<int>(partner.size()) != n)
    throw std::invalid_argument("LinkState: partner array size mismatch");
  for (int i = 0; i < n; ++i) {
    const int j = partner[i];
    if (j == kDefect) continue;
    if (j < 0 || j >= n || j == i || partner[j] != i)
      throw std::invalid_argument("LinkState: partner is not an involution");
  }
  // non-crossing, and no defect under an arc
  for (int i = 0; i < n; ++i) {
    const int j = partner[i];
    if (j <= i) continue;
    for (int k = i + 1; k < j; ++k) {
      const int l = partner[k];
      if (l == kDefect) throw std::invalid_argument("LinkState: defect under an arc");
      if (l < i || l > j) throw std::invalid_argument("LinkState: crossing arcs");
    }
  }
}

int LinkState::defects() const {
  int d = 0;
  for (int p : partner) d += (p == kDefect);
  return d;
}

bool LinkState::canonical_less(const LinkState& a, const LinkState& b) {
  const int da = a.defects(), db = b.defects();
  if (da != db) return da < db;
  for (int i = 0; i < a.n; ++i) {
    const unsigned ka = a.partner[i] == kDefect ? ~0u : static_cast<unsigned>(a.partner[i]);
    const unsigned kb = b.partner[i] == kDefect ? ~0u : static_cast<unsigned>(b.partner[i]);
    if (ka != kb) return ka < kb;
  }
  return false;
}

long long sector_dimension(int n, int d) {
  if (d < 0 || d > n || (n - d) % 2 != 0) return 0;
  const int k = (n - d) / 2;
  return binomial(n, k) - binomial(n, k - 1);
}

namespace {

// Depth-first generation: scanning left to right, a point may open an arc,
// close the innermost open arc, or be a defect -- the latter only at nesting
// depth zero, since defects must stand outside every arc.
void gen_links(int n, int pos, std::vector<int>& open, std::vector<int>& partner,
               std::vector<LinkState>& out) {
  if (pos == n) {
    if (open.empty()) out.emplace_back(n, partner);
    return;
  }
  if (open.empty()) {
    partner[pos] = kDefect;
    gen_links(n, pos + 1, open, partner, out);
  }
  if (!open.empty()) {
    const int i = open.back();
    open.pop_back();
    partner[i] = pos;
    partner[pos] = i;
    gen_links(n, pos + 1, open, partner, out);
    partner[i] = 0;
    open.push_back(i);
  }
  if (n - pos - 1 > static_cast<int>(open.size())) {  // room left to close everything
    open.push_back(pos);
    gen_links(n, pos + 1, open, partner, out);
    open.pop_back();
  }
}

}  // namespace

std::vector<LinkState> enumerate_link_basis(int n) {
  if (n <= 0) throw std::invalid_argument("enumerate_link_basis: N must be positive");
  std::vector<LinkState> out;
  std::vector<int> open, partner(n, 0);
  gen_links(n, 0, open, partner, out);
  std::sort(out.begin(), out.end(), LinkState::canonical_less);
  return out;
}

// ---------------------------------------------------------------------------
// Connectivity
// ---------------------------------------------------------------------------

namespace {

// Circular order for rectangle planarity: bottom left-to-right, then top
// right-to-left. Crossings on the rectangle are crossings in this order.
inline int circ(int idx, int n) { return idx < n ? idx : n + (2 * n - 1 - idx); }

}  // namespace

Connectivity::Connectivity(int n_sites, std::vector<int> p) : n(n_sites), partner(std::move(p)) {
  if (n <= 0) throw std::invalid_argument("Connectivity: N must be positive");
  if (static_cast<int>(partner.size()) != 2 * n)
    throw std::invalid_argument("Connectivity: partner array size mismatch");
  for (int i = 0; i < 2 * n; ++i) {
    const int j = partner[i];
    if (j < 0 || j >= 2 * n || j == i || partner[j] != i)
      throw std::invalid_argument("Connectivity: not a perfect matching");
  }
  for (int i = 0; i < 2 * n; ++i) {
    const int j = partner[i];
    int a = circ(i, n), b = circ(j, n);
    if (a > b) std::swap(a, b);
    for (int k = 0; k < 2 * n; ++k) {
      int c = circ(k, n), d = circ(partner[k], n);
      if (c > d) std::swap(c, d);
      const bool c_in = (c > a && c < b), d_in = (d > a && d < b);
      if (c_in != d_in) throw std::invalid_argument("Connectivity: crossing curves");
    }
  }
}

Connectivity Connectivity::identity(int n) {
  std::vector<int> p(2 * n);
  for (int i = 0; i < n; ++i) {
    p[i] = n + i;
    p[n + i] = i;
  }
  return Connectivity(n, std::move(p));
}

Connectivity generator(int i, int n) {
  if (i < 1 || i > n - 1) throw std::invalid_argument("generator: index out of range");
  Connectivity c = Connectivity::identity(n);
  const int a = i - 1, b = i;  // 0-indexed bottom positions
  c.partner[a] = b;
  c.partner[b] = a;
  c.partner[n + a] = n + b;
  c.partner[n + b] = n + a;
  return c;
}

namespace {

void gen_conn(int m, int pos, std::vector<int>& open, std::vector<int>& partner,
              std::vector<int>& order, std::vector<Connectivity>& out, int n) {
  if (pos == m) {
    std::vector<int> p(m);
    for (int i = 0; i < m; ++i) {
      // map circular index back to rectangle labels
      const int a = order[i], b = order[partner[i]];
      p[a] = b;
    }
    out.emplace_back(n, std::move(p));
    return;
  }
  if (!open.empty()) {
    const int i = open.back();
    open.pop_back();
    partner[i] = pos;
    partner[pos] = i;
    gen_conn(m, pos + 1, open, partner, order, out, n);
    open.push_back(i);
  }
  if (m - pos - 1 > static_cast<int>(open.size())) {
    open.push_back(pos);
    gen_conn(m, pos + 1, open, partner, order, out, n);
    open.pop_back();
  }
}

}  // namespace

std::vector<Connectivity> enumerate_connectivities(int n) {
  const int m = 2 * n;
  std::vector<int> order(m);  // circular position -> rectangle label
  for (int i = 0; i < m; ++i) order[i] = i < n ? i : n + (m - 1 - i);
  std::vector<Connectivity> out;
  std::vector<int> open, partner(m, 0);
  gen_conn(m, 0, open, partner, order, out, n);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Eta words
// ---------------------------------------------------------------------------

EtaWord eta_encode(const LinkState& w) {
  EtaWord e;
  e.symbols.resize(w.n);
  for (int i = 0; i < w.n; ++i)
    e.symbols[i] = w.partner[i] == kDefect ? 0 : (w.partner[i] > i ? 1 : -1);
  return e;
}

LinkState eta_decode(const EtaWord& word) {
  const int n = static_cast<int>(word.symbols.size());
  if (n == 0) throw std::invalid_argument("eta_decode: empty word");
  std::vector<int> partner(n, kDefect), stack;
  for (int i = 0; i < n; ++i) {
    switch (word.symbols[i]) {
      case 0:
        if (!stack.empty()) throw std::invalid_argument("eta_decode: defect under an arc");
        break;
      case 1:
        stack.push_back(i);
        break;
      case -1: {
        if (stack.empty()) throw std::invalid_argument("eta_decode: unmatched close");
        const int j = stack.back();
        stack.pop_back();
        partner[j] = i;
        partner[i] = j;
        break;
      }
      default:
        throw std::invalid_argument("eta_decode: symbol not in {-1,0,+1}");
    }
  }
  if (!stack.empty()) throw std::invalid_argument("eta_decode: unmatched open");
  return LinkState(n, std::move(partner));
}

std::string eta_to_text(const EtaWord& word) {
  std::string s;
  for (size_t i = 0; i < word.symbols.size(); ++i) {
    if (i) s += ',';
    s += word.symbols[i] == 0 ? "0" : (word.symbols[i] > 0 ? "+" : "-");
  }
  return s;
}

EtaWord eta_from_text(const std::string& text) {
  EtaWord w;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove(tok.begin(), tok.end(), ' '), tok.end());
    if (tok == "0")
      w.symbols.push_back(0);
    else if (tok == "+" || tok == "+1" || tok == "1")
      w.symbols.push_back(1);
    else if (tok == "-" || tok == "-1")
      w.symbols.push_back(-1);
    else
      throw std::invalid_argument("eta_from_text: bad token '" + tok + "'");
  }
  return w;
}

// ---------------------------------------------------------------------------
// Bubble structure and mu words
// ---------------------------------------------------------------------------

int max_bubble_depth(const LinkState& w) {
  int depth = 0, best = 0;
  for (int i = 0; i < w.n; ++i) {
    if (w.partner[i] > i) best = std::max(best, ++depth);
    else if (w.partner[i] != kDefect) --depth;
  }
  return best;
}

std::optional<MuWord> mu_encode(const LinkState& w) {
  if (max_bubble_depth(w) > 2) return std::nullopt;
  // Top-level structures scanned left to right. Cut positions delimit the
  // integer segments: a 1-bubble (p,p+1) cuts at its middle; a 2-bubble (P,Q)
  // cuts after P and before Q, its interior points standing for a star.
  MuWord mu;
  int seg = 0;  // points accumulated in the current integer token
  int i = 0;
  while (i < w.n) {
    if (w.partner[i] == kDefect) {
      ++seg;
      ++i;
      continue;
    }
    const int j = w.partner[i];  // top-level arc i..j
    bool two_bubble = false;
    for (int k = i + 1; k < j; ++k)
      if (w.partner[k] != kDefect) two_bubble = true;
    if (!two_bubble) {
      seg += 1;  // left point of the 1-bubble
      mu.tokens.push_back(seg);
      seg = 1;  // right point
    } else {
      seg += 1;  // delimiting point P
      mu.tokens.push_back(seg);
      mu.tokens.push_back(MuWord::kStar);
      seg = 1;  // delimiting point Q
    }
    i = j + 1;
  }
  mu.tokens.push_back(seg);
  return mu;
}

std::string mu_to_text(const MuWord& word) {
  std::string s = "[";
  for (size_t i = 0; i < word.tokens.size(); ++i) {
    if (i) s += ',';
    s += word.tokens[i] == MuWord::kStar ? "*" : std::to_string(word.tokens[i]);
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// v-notation
// ---------------------------------------------------------------------------

LinkState parse_link_notation(const std::string& spec, int n) {
  if (n <= 0) throw std::invalid_argument("parse_link_notation: N must be positive");
  std::vector<int> partner(n, kDefect);
  std::vector<bool> used(n, false);
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove(tok.begin(), tok.end(), ' '), tok.end());
    if (tok.empty()) continue;
    int h = 0;
    try {
      h = std::stoi(tok);
    } catch (...) {
      throw std::invalid_argument("parse_link_notation: bad label '" + tok + "'");
    }
    if (h < 1 || h > n - 1)
      throw std::invalid_argument("parse_link_notation: label out of range 1..N-1");
    // half-way point h sits between points h and h+1 (1-indexed)
    int p = h - 1;  // 0-indexed candidates
    while (p >= 0 && used[p]) --p;
    int q = h;
    while (q < n && used[q]) ++q;
    if (p < 0 || q >= n)
      throw std::invalid_argument("parse_link_notation: arc endpoint already used at " + tok);
    for (int k = p + 1; k < q; ++k)
      if (!used[k])
        throw std::invalid_argument("parse_link_notation: defect under an arc at " + tok);
    partner[p] = q;
    partner[q] = p;
    used[p] = used[q] = true;
  }
  return LinkState(n, std::move(partner));
}

std::string format_link_notation(const LinkState& w) {
  // arcs emitted inner to outer, labeled by their left endpoint
  std::vector<std::pair<int, int>> arcs;  // (depth-major order)
  std::vector<int> order;
  std::vector<int> stack;
  for (int i = 0; i < w.n; ++i) {
    if (w.partner[i] > i) stack.push_back(i);
    else if (w.partner[i] != kDefect) {
      order.push_back(stack.back());
      stack.pop_back();
    }
  }
  std::string s;
  for (size_t k = 0; k < order.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(order[k] + 1);
  }
  return s;
}

LinkState parse_v_notation(const std::string& text) {
  const auto npos = std::string::npos;
  const auto eq = text.find("N=");
  const auto sc = text.find(';');
  const auto ar = text.find("arcs=");
  if (eq == npos || sc == npos || ar == npos)
    throw std::invalid_argument("parse_v_notation: expected 'N=<n>; arcs=<list>'");
  const int n = std::stoi(text.substr(eq + 2, sc - eq - 2));
  return parse_link_notation(text.substr(ar + 5), n);
}

std::string format_v_notation(const LinkState& w) {
  return "N=" + std::to_string(w.n) + "; arcs=" + format_link_notation(w);
}

}  // namespace loopalg
