#include "loopalg/tl.hpp"

#include <cstdlib>

namespace loopalg {

// ---------------------------------------------------------------------------
// SpectralParams
// ---------------------------------------------------------------------------

SpectralParams SpectralParams::from_rational(long p, long q, double u) {
  if (q == 0) throw std::invalid_argument("SpectralParams: zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const long g = std::gcd(std::abs(p), q);
  SpectralParams s;
  s.rational = true;
  s.p = g ? p / g : p;
  s.q_den = g ? q / g : q;
  s.lambda = pi * static_cast<double>(s.p) / static_cast<double>(s.q_den);
  s.u = u;
  return s;
}

SpectralParams SpectralParams::from_real(double lambda, double u) {
  SpectralParams s;
  s.rational = false;
  s.lambda = lambda;
  s.u = u;
  return s;
}

long SpectralParams::a() const {
  if (!rational) throw std::invalid_argument("SpectralParams: lambda is not rational");
  // Lambda/pi = (q_den - p)/q_den, reduced
  long num = q_den - p, den = q_den;
  const long g = std::gcd(std::abs(num), den);
  return g ? num / g : num;
}

long SpectralParams::b() const {
  if (!rational) throw std::invalid_argument("SpectralParams: lambda is not rational");
  long num = q_den - p, den = q_den;
  const long g = std::gcd(std::abs(num), den);
  return g ? den / g : den;
}

bool SpectralParams::critical_for(int n) const {
  // e^{i pi a/b} is a (2l)-th root of unity iff b | l (a odd) or b | 2l (a
  // even, b odd); some l in [2, N] exists iff b <= N (b = 1 always works).
  if (!rational || n < 2) return false;
  return b() <= n;
}

bool SpectralParams::s_half_is_zero(long n2) const {
  if (rational) return (n2 * a()) % (2 * b()) == 0;
  return std::abs(s_half(n2)) < 1e-12;
}

bool SpectralParams::c_half_is_zero(long n2) const {
  if (rational) {
    const long m = ((n2 * a()) % (2 * b()) + 2 * b()) % (2 * b());
    return m == b();
  }
  return std::abs(c_half(n2)) < 1e-12;
}

// ---------------------------------------------------------------------------
// Diagram composition
// ---------------------------------------------------------------------------

std::pair<Connectivity, int> compose(const Connectivity& c1, const Connectivity& c2) {
  if (c1.n != c2.n) throw std::invalid_argument("compose: size mismatch");
  const int n = c1.n;
  // Glue c2's bottom onto c1's top. External points of the result: c1 bottom
  // (0..n-1) and c2 top (n..2n-1). Walk each curve across the interface.
  std::vector<int> result(2 * n, -1);
  std::vector<bool> seen_mid(n, false);  // interface strands c1.top[k] = c2.bottom[k]
  int loops = 0;

  // from an external endpoint, walk to the other external endpoint
  auto walk = [&](int ext) -> int {
    // ext encoding: 0..n-1 = c1 bottom, n..2n-1 = c2 top
    bool in_c1 = ext < n;
    int point = in_c1 ? ext : (ext - n) + n;  // local label within its diagram
    for (;;) {
      if (in_c1) {
        const int q = c1.partner[point];
        if (q < n) return q;  // c1 bottom
        seen_mid[q - n] = true;
        point = q - n;  // continue inside c2 from its bottom point
        in_c1 = false;
      } else {
        const int q = c2.partner[point];
        if (q >= n) return n + (q - n);  // c2 top
        seen_mid[q] = true;
        point = n + q;  // continue inside c1 from its top point
        in_c1 = true;
      }
    }
  };

  for (int ext = 0; ext < 2 * n; ++ext) {
    if (result[ext] != -1) continue;
    const int other = walk(ext);
    result[ext] = other;
    result[other] = ext;
  }
  // closed loops live entirely on unseen interface strands
  std::vector<bool> visited(n, false);
  for (int k = 0; k < n; ++k) {
    if (seen_mid[k] || visited[k]) continue;
    int point = k;
    for (;;) {
      visited[point] = true;
      const int q1 = c1.partner[n + point];  // q1 is a c1 top point on a loop
      const int p2 = q1 - n;
      visited[p2] = true;
      const int q2 = c2.partner[p2];
      point = q2;
      if (point == k) break;
    }
    ++loops;
  }
  return {Connectivity(n, std::move(result)), loops};
}

int closure_loops(const Connectivity& c) {
  const int n = c.n;
  std::vector<bool> visited(2 * n, false);
  int loops = 0;
  for (int s = 0; s < 2 * n; ++s) {
    if (visited[s]) continue;
    int point = s;
    do {
      visited[point] = true;
      const int q = c.partner[point];
      visited[q] = true;
      point = q < n ? q + n : q - n;  // identify bottom k with top k
    } while (point != s);
    ++loops;
  }
  return loops;
}

int delta_of(const Connectivity& c) {
  // Reduction from the eigenstate-counting lemma: repeatedly glue a top arc
  // over a contiguous bottom pair joined in the diagram and erase the pair.
  // The process ends in the unit on delta(c) strands. (Through-strand count
  // alone overcounts: through-lines that shift sideways absorb defects.)
  const int n = c.n;
  std::vector<int> partner = c.partner;
  std::vector<bool> live(2 * n, true);
  auto next_live = [&](int i) {
    int j = i + 1;
    while (j < n && !live[j]) ++j;
    return j;
  };
  for (;;) {
    int i = 0;
    bool reduced = false;
    while (i < n) {
      if (!live[i]) {
        ++i;
        continue;
      }
      const int j = next_live(i);
      if (j < n && partner[i] == j) {
        const int a = partner[n + i], b = partner[n + j];
        if (a != n + j) {  // otherwise a loop closes; nothing to rewire
          partner[a] = b;
          partner[b] = a;
        }
        live[i] = live[j] = live[n + i] = live[n + j] = false;
        reduced = true;
        break;
      }
      ++i;
    }
    if (!reduced) break;
  }
  int delta = 0;
  for (int i = 0; i < n; ++i) delta += live[i];
  return delta;
}

cplx trace_tau(const TLElement& x, const SpectralParams& params) {
  cplx out = 0.0;
  const double beta = params.beta();
  for (const auto& [c, coeff] : x.terms) out += coeff * std::pow(beta, closure_loops(c));
  return out;
}

// ---------------------------------------------------------------------------
// Action on link states
// ---------------------------------------------------------------------------

std::pair<LinkState, int> apply_connectivity(const Connectivity& c, const LinkState& v) {
  if (c.n != v.n) throw std::invalid_argument("apply_connectivity: size mismatch");
  const int n = c.n;
  std::vector<int> out(n, kDefect);
  std::vector<bool> seen_top(n, false);

  // From bottom point b, walk up through c and the arcs of v; the strand ends
  // at another bottom point or runs to infinity through a defect of v.
  auto walk = [&](int b) -> int {
    int point = b;
    bool at_bottom = true;
    for (;;) {
      if (at_bottom) {
        const int q = c.partner[point];
        if (q < n) return q;
        seen_top[q - n] = true;
        point = q - n;  // now at v's point
        at_bottom = false;
      } else {
        if (v.partner[point] == kDefect) return -1;  // to infinity
        const int w = v.partner[point];
        seen_top[w] = true;
        point = w;  // descend back into c from top point w
        const int q = c.partner[n + point];
        if (q < n) return q;
        seen_top[q - n] = true;
        point = q - n;
      }
    }
  };

  for (int b = 0; b < n; ++b) {
    if (out[b] != kDefect) continue;
    const int other = walk(b);
    if (other >= 0) {
      out[b] = other;
      out[other] = b;
    }
  }
  // loops: cycles alternating c-top arcs and v arcs that touch no bottom point
  int loops = 0;
  std::vector<bool> visited(n, false);
  for (int t = 0; t < n; ++t) {
    if (seen_top[t] || visited[t] || v.partner[t] == kDefect) continue;
    int point = t;
    bool closed = true;
    std::vector<int> trail;
    for (;;) {
      visited[point] = true;
      trail.push_back(point);
      const int w = v.partner[point];
      if (w == kDefect) {
        closed = false;
        break;
      }
      visited[w] = true;
      trail.push_back(w);
      const int q = c.partner[n + w];
      if (q < n) {
        closed = false;
        break;
      }
      point = q - n;
      if (point == t) break;
    }
    if (closed) ++loops;
  }
  return {LinkState(n, std::move(out)), loops};
}

// ---------------------------------------------------------------------------
// Gram product
// ---------------------------------------------------------------------------

int gram_loops(const LinkState& v, const LinkState& w) {
  if (v.n != w.n) throw std::invalid_argument("gram: size mismatch");
  const int n = v.n;
  // Reflect w and glue point i of v to point i of w. Each curve alternates
  // arcs of v and w; it is either a closed loop or a path between defect
  // rays. The product vanishes unless every path ties a defect of v to a
  // defect of w.
  std::vector<bool> visited(n, false);
  // paths starting from a defect ray of v: walk w-arc, v-arc, w-arc, ...
  for (int s = 0; s < n; ++s) {
    if (!v.is_defect(s) || visited[s]) continue;
    int point = s;
    visited[point] = true;
    for (;;) {
      if (w.is_defect(point)) break;  // ends on a defect of w
      point = w.partner[point];
      visited[point] = true;
      if (v.is_defect(point)) return -1;  // tied two defects of v
      point = v.partner[point];
      visited[point] = true;
    }
  }
  // an unvisited defect of w can only pair with another defect of w
  for (int s = 0; s < n; ++s)
    if (w.is_defect(s) && !visited[s]) return -1;
  // everything left closes into loops
  int loops = 0;
  for (int s = 0; s < n; ++s) {
    if (visited[s]) continue;
    int point = s;
    do {
      visited[point] = true;
      point = v.partner[point];
      visited[point] = true;
      point = w.partner[point];
    } while (point != s);
    ++loops;
  }
  return loops;
}

cplx gram(const LinkState& v, const LinkState& w, const SpectralParams& params) {
  const int l = gram_loops(v, w);
  if (l < 0) return 0.0;
  return std::pow(params.beta(), l);
}

}  // namespace loopalg
