#include "loopalg/transfer.hpp"

#include <unordered_map>

namespace loopalg {

FaceWeights dn_face_weights(double lambda, double u) {
  // lower row boxes carry u, upper row boxes lambda-u, same orientation
  return {std::sin(lambda - u), std::sin(u), std::sin(u), std::sin(lambda - u)};
}

FaceWeights dn_face_weights(const SpectralParams& params) {
  return dn_face_weights(params.lambda, params.u);
}

FaceWeights fn_face_weights(const SpectralParams& params) {
  // braid limits of the two rows: u -> -i inf with the 1/sin(lambda-u)
  // normalization and the -ie^{-i lambda/2} phase per box
  const cplx ip = cplx(0, 1) * std::polar(1.0, params.lambda / 2.0);    // ie^{+i lambda/2}
  const cplx im = cplx(0, -1) * std::polar(1.0, -params.lambda / 2.0);  // -ie^{-i lambda/2}
  return {im, ip, ip, im};
}

// ---------------------------------------------------------------------------
// Brute-force expansion over the 2^{2N} face configurations.
//
// Point layout for the two-row diagram with N columns:
//   bottom externals 0..N-1, top externals N..2N-1, mids M_j, and horizontal
//   edge midpoints LH_0..LH_N (lower row), UH_0..UH_N (upper row). The left
//   boundary half-arc joins LH_0-UH_0, the right one LH_N-UH_N.
// ---------------------------------------------------------------------------

TLElement build_double_row_brute(int n, const FaceWeights& w, double beta) {
  if (n > 8) throw CapacityError("build_double_row_brute: N > 8 (2^{2N} terms)");
  if (n < 1) throw std::invalid_argument("build_double_row_brute: N must be positive");

  const int B0 = 0, T0 = n;  // externals
  const int M0 = 2 * n;      // mids M_j = M0 + j
  const int LH = 3 * n;      // LH_j = LH + j, j = 0..n
  const int UH = 4 * n + 1;  // UH_j = UH + j
  const int total = 5 * n + 2;

  TLElement out(n);
  std::vector<int> adj(2 * total);
  std::vector<int> deg(total);

  for (long long cfg = 0; cfg < (1LL << (2 * n)); ++cfg) {
    std::fill(deg.begin(), deg.end(), 0);
    auto connect = [&](int a, int b) {
      adj[2 * a + deg[a]++] = b;
      adj[2 * b + deg[b]++] = a;
    };
    cplx weight = 1.0;
    for (int j = 0; j < n; ++j) {
      const bool low_h = (cfg >> (2 * j)) & 1;
      const bool up_h = (cfg >> (2 * j + 1)) & 1;
      if (low_h) {  // S-E, W-N
        connect(B0 + j, LH + j + 1);
        connect(LH + j, M0 + j);
        weight *= w.lower_h;
      } else {  // S-W, N-E
        connect(B0 + j, LH + j);
        connect(M0 + j, LH + j + 1);
        weight *= w.lower_v;
      }
      if (up_h) {
        connect(M0 + j, UH + j + 1);
        connect(UH + j, T0 + j);
        weight *= w.upper_h;
      } else {
        connect(M0 + j, UH + j);
        connect(T0 + j, UH + j + 1);
        weight *= w.upper_v;
      }
    }
    connect(LH, UH);          // left boundary arc
    connect(LH + n, UH + n);  // right boundary arc

    // walk external-to-external paths
    std::vector<int> partner(2 * n, -1);
    std::vector<bool> visited(total, false);
    for (int s = 0; s < 2 * n; ++s) {
      if (partner[s] != -1) continue;
      int prev = -1, cur = s;
      for (;;) {
        visited[cur] = true;
        const int a = adj[2 * cur], b = deg[cur] > 1 ? adj[2 * cur + 1] : -1;
        const int nxt = (a != prev) ? a : b;
        if (nxt < 2 * n) {  // reached an external point
          visited[nxt] = true;
          partner[s] = nxt;
          partner[nxt] = s;
          break;
        }
        prev = cur;
        cur = nxt;
      }
    }
    // interior loops
    int loops = 0;
    for (int s = 2 * n; s < total; ++s) {
      if (visited[s]) continue;
      int prev = -1, cur = s;
      do {
        visited[cur] = true;
        const int a = adj[2 * cur], b = adj[2 * cur + 1];
        const int nxt = (a != prev) ? a : b;
        prev = cur;
        cur = nxt;
      } while (cur != s);
      ++loops;
    }
    out.add(Connectivity(n, partner), weight * std::pow(beta, loops));
  }
  return out;
}

TLElement build_DN_brute(int n, const SpectralParams& params) {
  return build_double_row_brute(n, dn_face_weights(params), params.beta());
}

TLElement build_FN_direct(int n, const SpectralParams& params) {
  return build_double_row_brute(n, fn_face_weights(params), params.beta());
}

// ---------------------------------------------------------------------------
// Frontier sweep.
//
// For a fixed input link state v, the diagram (two face rows, boundary arcs,
// v glued on top) is contracted column by column. A partial contraction is a
// set of open strand fragments whose ends live on: the two cut points of the
// current column boundary, stubs of v-arcs that re-enter later, emitted
// bottom points, and infinity rays from defects of v. States with identical
// fragment structure and identical finalized output are merged, which keeps
// the column cost polynomial instead of 2^{2N}.
//
// End encoding: 0..N-1 emitted bottom points; N+0 / N+1 the lower/upper cut;
// N+2+k the stub of a v-arc ending at top position k; kInf for a ray.
// ---------------------------------------------------------------------------

namespace {

constexpr int kInf = -1;    // infinity ray (value-only sentinel)
constexpr int kUnset = -3;  // bottom point not emitted yet
constexpr int kOpen = -2;   // bottom point attached to an open fragment

struct SweepState {
  std::vector<int> out;                    // partner / kDefect / kOpen / kUnset
  std::vector<std::pair<int, int>> frags;  // open fragment end -> other end, sorted

  bool operator==(const SweepState& o) const { return out == o.out && frags == o.frags; }
};

struct SweepStateHash {
  size_t operator()(const SweepState& s) const {
    size_t h = 1469598103934665603ull;
    auto mix = [&](long long x) {
      h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (int x : s.out) mix(x);
    for (auto [a, b] : s.frags) {
      mix(a);
      mix(b);
    }
    return h;
  }
};

// Mutable fragment table during a column transition.
struct FragTable {
  std::map<int, int> p;  // open end -> other end (kInf appears only as value)
  std::vector<int>* out = nullptr;
  int n_points = 0;
  int loops = 0;

  bool is_bottom(int e) const { return e >= 0 && e < n_points; }

  void set_resolved(int e, int val) {
    if (is_bottom(e)) (*out)[e] = val;
  }

  // Join ends x and y with a new strand segment; y == kInf attaches a ray.
  void add_edge(int x, int y) {
    if (y == kInf) {
      auto it = p.find(x);
      if (it == p.end()) {
        p[x] = kInf;
        return;
      }
      const int fx = it->second;
      p.erase(it);
      if (fx == kInf) return;  // infinity-to-infinity curve, dropped
      if (is_bottom(fx)) {
        p.erase(fx);
        (*out)[fx] = kDefect;
        return;
      }
      p[fx] = kInf;
      return;
    }
    auto itx = p.find(x);
    if (itx != p.end() && itx->second == y) {  // the segment closes a loop
      p.erase(x);
      p.erase(y);
      ++loops;
      return;
    }
    int ex = x, ey = y;
    if (itx != p.end()) {
      ex = itx->second;
      p.erase(x);
    }
    auto ity = p.find(y);
    if (ity != p.end()) {
      ey = ity->second;
      p.erase(y);
    }
    // resolve pairs whose surviving ends need no further merging
    const bool ex_term = ex == kInf || is_bottom(ex);
    const bool ey_term = ey == kInf || is_bottom(ey);
    if (ex_term && ey_term) {
      if (ex == kInf && ey == kInf) return;  // dropped curve
      if (ex == kInf) {
        p.erase(ey);
        (*out)[ey] = kDefect;
        return;
      }
      if (ey == kInf) {
        p.erase(ex);
        (*out)[ex] = kDefect;
        return;
      }
      p.erase(ex);
      p.erase(ey);
      (*out)[ex] = ey;
      (*out)[ey] = ex;
      return;
    }
    if (ex != x && ex != kInf) p.erase(ex);
    if (ey != y && ey != kInf) p.erase(ey);
    if (ex == kInf) {
      p[ey] = kInf;
      return;
    }
    if (ey == kInf) {
      p[ex] = kInf;
      return;
    }
    p[ex] = ey;
    p[ey] = ex;
  }
};

}  // namespace

SectorMatrix sweep_double_row(int n, const FaceWeights& fw, double beta) {
  if (n < 1) throw std::invalid_argument("sweep_double_row: N must be positive");
  if (n > 14) throw CapacityError("sweep_double_row: N > 14");
  const LinkBasis& basis = link_basis(n);
  SectorMatrix result(n);

  const int kCutL = n, kCutU = n + 1;
  auto stub_id = [&](int k) { return n + 2 + k; };
  const int kM = n + 100, kLp = n + 101, kUp = n + 102, kT = n + 103;

  parallel_for(basis.dim(), [&](int col) {
    const LinkState& v = basis.states[col];
    std::unordered_map<SweepState, cplx, SweepStateHash> states;
    SweepState init;
    init.out.assign(n, kUnset);
    init.frags = {{kCutL, kCutU}, {kCutU, kCutL}};  // left boundary arc
    states.emplace(std::move(init), cplx(1.0));

    for (int c = 0; c < n; ++c) {
      std::unordered_map<SweepState, cplx, SweepStateHash> next;
      for (const auto& [st, coeff] : states) {
        for (int face = 0; face < 4; ++face) {
          const bool low_h = face & 1, up_h = face & 2;
          cplx w = coeff * (low_h ? fw.lower_h : fw.lower_v) * (up_h ? fw.upper_h : fw.upper_v);
          if (w == cplx(0.0)) continue;

          FragTable ft;
          ft.p.insert(st.frags.begin(), st.frags.end());
          std::vector<int> out = st.out;
          ft.out = &out;
          ft.n_points = n;
          out[c] = kOpen;

          if (low_h) {  // S-E, W-N
            ft.add_edge(c, kLp);
            ft.add_edge(kCutL, kM);
          } else {  // S-W, N-E
            ft.add_edge(c, kCutL);
            ft.add_edge(kM, kLp);
          }
          const int t_partner = v.partner[c];
          const int t_node = t_partner == kDefect ? kInf : kT;
          if (up_h) {  // S-E, W-N with S=mid, N=top attachment
            ft.add_edge(kM, kUp);
            ft.add_edge(kCutU, t_node);
          } else {
            ft.add_edge(kM, kCutU);
            ft.add_edge(t_node == kInf ? kUp : kT, t_node == kInf ? kInf : kUp);
          }
          if (t_partner != kDefect && t_partner < c)  // closing arc: bridge to stub
            ft.add_edge(kT, stub_id(c));

          for (int l = 0; l < ft.loops; ++l) w *= beta;

          // rename cut/stub ends for the next column
          auto rename = [&](int from, int to) {
            auto it = ft.p.find(from);
            if (it == ft.p.end()) return;
            const int far = it->second;
            ft.p.erase(it);
            ft.p[to] = far;
            if (far != kInf) ft.p[far] = to;
          };
          rename(kLp, -100);
          rename(kUp, -101);
          rename(-100, kCutL);
          rename(-101, kCutU);
          if (t_partner != kDefect && t_partner > c) rename(kT, stub_id(t_partner));

          SweepState ns;
          ns.out = std::move(out);
          ns.frags.assign(ft.p.begin(), ft.p.end());
          auto [it, fresh] = next.try_emplace(std::move(ns), w);
          if (!fresh) it->second += w;
        }
      }
      states = std::move(next);
    }

    // right boundary arc closes the remaining cuts
    for (const auto& [st, coeff] : states) {
      FragTable ft;
      ft.p.insert(st.frags.begin(), st.frags.end());
      std::vector<int> out = st.out;
      ft.out = &out;
      ft.n_points = n;
      ft.add_edge(kCutL, kCutU);
      cplx w = coeff;
      for (int l = 0; l < ft.loops; ++l) w *= beta;
      if (!ft.p.empty()) throw std::logic_error("sweep_double_row: unresolved fragments");
      result.mat(basis.index(LinkState(n, out)), col) += w;
    }
  });
  return result;
}

SectorMatrix build_rho_DN_sweep(int n, const SpectralParams& params) {
  return sweep_double_row(n, dn_face_weights(params), params.beta());
}

SectorMatrix build_rho_FN_sweep(int n, const SpectralParams& params) {
  return sweep_double_row(n, fn_face_weights(params), params.beta());
}

// ---------------------------------------------------------------------------
// Fourier coefficients
// ---------------------------------------------------------------------------

std::vector<SectorMatrix> fourier_coefficients(int n, const SpectralParams& params) {
  const int samples = 2 * n + 1;
  std::vector<SectorMatrix> ms;
  ms.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const double vk = pi * k / samples;
    ms.push_back(build_rho_DN_sweep(n, params.with_u(vk + params.lambda / 2)));
  }
  std::vector<SectorMatrix> coeffs(n + 1, SectorMatrix(n));
  for (int j = 0; j <= n; ++j) {
    MatrixXc acc = MatrixXc::Zero(ms[0].dim(), ms[0].dim());
    for (int k = 0; k < samples; ++k) acc += ms[k].mat * std::cos(2.0 * j * (pi * k / samples));
    coeffs[j].mat = acc * (2.0 / samples);
  }
  return coeffs;
}

// ---------------------------------------------------------------------------
// Appendix 8x8 matrices and the eta-word product
// ---------------------------------------------------------------------------

namespace {
inline cplx ei(double x) { return std::polar(1.0, x); }
}  // namespace

Matrix8c appendix_N0(double la) {
  Matrix8c m = Matrix8c::Zero();
  const cplx qp = ei(la), qm = ei(-la);
  m(0, 0) = -qp;
  m(0, 1) = 1.0 - qm * qm;
  m(1, 1) = -qm;
  m(1, 3) = 1.0;
  m(2, 0) = -qp;
  m(2, 1) = 1.0 - qm;
  m(2, 2) = 1.0;
  m(3, 3) = 1.0;
  m(7, 1) = -qm;
  return m;
}

Matrix8c appendix_N1(double la) {
  Matrix8c m = Matrix8c::Zero();
  const cplx qm = ei(-la);
  m(0, 4) = 1.0 - qm * qm;
  m(1, 4) = -qm;
  m(1, 5) = 1.0;
  m(2, 4) = 1.0 - qm;
  m(3, 5) = 1.0;
  m(4, 6) = 1.0;
  m(5, 6) = 1.0;
  m(7, 4) = -qm;
  return m;
}

Matrix8c appendix_Nm1(double la) {
  Matrix8c m = Matrix8c::Zero();
  const cplx qp = ei(la);
  m(4, 0) = -qp;
  m(4, 2) = 1.0;
  m(4, 7) = 1.0;
  m(5, 0) = -qp;
  m(5, 1) = 1.0;
  m(5, 7) = 1.0;
  m(6, 4) = 1.0;
  return m;
}

Matrix8c appendix_G(double la) {
  Matrix8c m = Matrix8c::Zero();
  m(0, 0) = 2.0 * std::cos(la);
  m(0, 1) = m(0, 2) = m(0, 7) = 1.0;
  m(1, 0) = m(1, 2) = 1.0;
  m(2, 0) = m(2, 1) = m(2, 2) = m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  m(4, 4) = m(4, 5) = 1.0;
  m(5, 4) = 1.0;
  m(6, 6) = 1.0;
  m(7, 0) = 1.0;
  return m;
}

cplx fn_element_8x8(const EtaWord& w, int r, const SpectralParams& params) {
  if (static_cast<int>(w.symbols.size()) != r)
    throw std::invalid_argument("fn_element_8x8: word length != r");
  const double la = params.lambda;
  const Matrix8c n0 = appendix_N0(la), n1 = appendix_N1(la), nm1 = appendix_Nm1(la);
  Eigen::Matrix<cplx, 1, 8> row = Eigen::Matrix<cplx, 1, 8>::Zero();
  row(0) = 1.0;
  for (int k = 0; k < r; ++k) {
    switch (w.symbols[k]) {
      case 0:
        row = row * n0;
        break;
      case 1:
        row = row * n1;
        break;
      case -1:
        row = row * nm1;
        break;
      default:
        throw std::invalid_argument("fn_element_8x8: malformed word");
    }
  }
  return row * appendix_G(la).col(0);
}

// ---------------------------------------------------------------------------
// 2x2 route over mu words
// ---------------------------------------------------------------------------

cplx fn_element_2x2(const MuWord& w, int r, const SpectralParams& params) {
  const auto& toks = w.tokens;
  if (toks.empty()) throw std::invalid_argument("fn_element_2x2: empty word");
  if (toks.size() == 1) {
    // pure defects: the product degenerates to the diagonal value
    if (toks[0] != r) throw std::invalid_argument("fn_element_2x2: word does not match r");
    const double sign = r % 2 == 0 ? 1.0 : -1.0;
    return 2.0 * sign * std::cos(params.lambda * (r + 1));
  }
  if (toks.front() == MuWord::kStar || toks.back() == MuWord::kStar)
    throw std::invalid_argument("fn_element_2x2: word must start and end with an integer");
  const double s_half = params.s_half(1);
  using M2 = Eigen::Matrix2d;
  using V2 = Eigen::Vector2d;
  auto vec = [&](int m) {
    return V2(2.0 * params.S(m), 2.0 * params.s_half(m - 1) * params.s_half(m) / s_half);
  };
  auto mat = [&](int m) -> M2 {
    M2 o;
    o << params.s_half(2 * m - 1) / s_half,
        params.s_half(m) * params.s_half(m - 2) / (s_half * s_half), 2.0 * params.C(m - 1),
        params.s_half(2 * m - 3) / s_half;
    return o;
  };
  const M2 star = (M2() << 1, 0, 1, 0).finished();
  const M2 gp = (M2() << 1, 1, 1, 0).finished();

  M2 mid = M2::Identity();
  for (size_t i = 1; i + 1 < toks.size(); ++i)
    mid = mid * (toks[i] == MuWord::kStar ? star : mat(toks[i]));
  return (vec(toks.front()).transpose() * mid * gp * vec(toks.back())).value();
}

// ---------------------------------------------------------------------------
// Recursive column assembly of rho(F_N)
// ---------------------------------------------------------------------------

SectorMatrix fn_column_recursive(int n, const SpectralParams& params) {
  const LinkBasis& basis = link_basis(n);
  SectorMatrix result(n);

  // last column of rho(F_d) for each defect count present
  std::map<int, std::vector<cplx>> last_cols;
  for (int d = n; d >= 1; d -= 2) {
    const LinkBasis& bd = link_basis(d);
    std::vector<cplx> col(bd.dim());
    for (int i = 0; i < bd.dim(); ++i)
      col[i] = fn_element_8x8(eta_encode(bd.states[i]), d, params);
    last_cols[d] = std::move(col);
  }

  const double diag0 = 2.0 * std::cos(params.lambda);  // d = 0 eigenvalue
  parallel_for(basis.dim(), [&](int colidx) {
    const LinkState& v = basis.states[colidx];
    const int d = v.defects();
    if (d == 0) {
      result.mat(colidx, colidx) = diag0;
      return;
    }
    std::vector<int> pos;
    for (int i = 0; i < n; ++i)
      if (v.is_defect(i)) pos.push_back(i);
    const LinkBasis& bd = link_basis(d);
    const auto& col = last_cols.at(d);
    for (int i = 0; i < bd.dim(); ++i) {
      if (std::abs(col[i]) < 1e-300) continue;
      const LinkState& wp = bd.states[i];
      std::vector<int> partner = v.partner;
      for (int k = 0; k < d; ++k)
        partner[pos[k]] = wp.partner[k] == kDefect ? kDefect : pos[wp.partner[k]];
      result.mat(basis.index(LinkState(n, std::move(partner))), colidx) += col[i];
    }
  });
  return result;
}

}  // namespace loopalg
