#include "loopalg/potts.hpp"

#include "loopalg/transfer.hpp"

namespace loopalg {

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

PottsParams PottsParams::make(int q, double u) {
  if (q < 1 || q > 4) throw std::invalid_argument("PottsParams: Q must be 1..4");
  PottsParams p;
  p.q = q;
  p.lambda = std::acos(std::sqrt(static_cast<double>(q)) / 2.0);
  p.u = u;
  return p;
}

double PottsParams::v_j() const {
  return std::sqrt(static_cast<double>(q)) * std::sin(lambda - u) / std::sin(u);
}

double PottsParams::v_k() const {
  return std::sqrt(static_cast<double>(q)) * std::sin(u) / std::sin(lambda - u);
}

double PottsParams::gamma_j() const { return std::log1p(v_j()); }
double PottsParams::gamma_k() const { return std::log1p(v_k()); }

double PottsParams::kappa(int n) const {
  return std::pow(static_cast<double>(q), (n + 1) / 2.0) /
         std::pow(std::sin(u) * std::sin(lambda - u), n);
}

SpectralParams PottsParams::loop_params() const {
  return SpectralParams::from_real(lambda, u);
}

// ---------------------------------------------------------------------------
// Lattice
// ---------------------------------------------------------------------------

namespace {

// spins per row: N/2 on even rows, N/2+1 on odd rows
int row_width(int n, int y) { return y % 2 == 0 ? n / 2 : n / 2 + 1; }

int site_index(int n, int y, int x) {
  // x is a lattice abscissa with x+y odd; position within the row:
  const int pos = y % 2 == 0 ? (x - 1) / 2 : x / 2;
  int base = 0;
  for (int r = 0; r < y; ++r) base += row_width(n, r);
  return base + pos;
}

}  // namespace

PottsLattice PottsLattice::make(int n, int m, bool cylinder) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("PottsLattice: N must be even, >= 2");
  if (m < 1) throw std::invalid_argument("PottsLattice: M must be positive");
  PottsLattice lat;
  lat.n = n;
  lat.m = m;
  lat.cylinder = cylinder;
  const int rows = cylinder ? 2 * m : 2 * m + 1;
  lat.n_sites = 0;
  for (int r = 0; r < rows; ++r) lat.n_sites += row_width(n, r);
  for (int y = 0; y < 2 * m; ++y) {
    for (int i = 0; i < n; ++i) {
      const int yn = cylinder ? (y + 1) % (2 * m) : y + 1;
      Bond b;
      b.is_j = (i % 2 == 1);  // J-bonds live in odd box columns
      if ((i + y) % 2 == 1) {
        b.site_a = site_index(n, y, i);
        b.site_b = site_index(n, yn, i + 1);
      } else {
        b.site_a = site_index(n, y, i + 1);
        b.site_b = site_index(n, yn, i);
      }
      lat.bonds.push_back(b);
    }
  }
  return lat;
}

// ---------------------------------------------------------------------------
// Loop tracing (cylinder)
// ---------------------------------------------------------------------------

int fk_loop_count(const PottsLattice& lat, unsigned long long bond_mask) {
  if (!lat.cylinder) throw std::invalid_argument("fk_loop_count: cylinder geometry only");
  const int n = lat.n, rows = 2 * lat.m;
  // nodes: horizontal edge midpoints H(i,y), then vertical ones V(x,y)
  const int h0 = 0;                       // H(i,y): i*rows + y
  const int v0 = n * rows;                // V(x,y): v0 + x*rows + y
  const int total = n * rows + (n + 1) * rows;
  std::vector<int> adj(2 * total, -1);
  std::vector<int> deg(total, 0);
  auto connect = [&](int a, int b) {
    adj[2 * a + deg[a]++] = b;
    adj[2 * b + deg[b]++] = a;
  };
  for (int y = 0; y < rows; ++y) {
    for (int i = 0; i < n; ++i) {
      const bool present = (bond_mask >> (y * n + i)) & 1ULL;
      const bool state_h = present == (((i + y) % 2) == 1);
      const int s = h0 + i * rows + y;
      const int nn = h0 + i * rows + (y + 1) % rows;
      const int w = v0 + i * rows + y;
      const int e = v0 + (i + 1) * rows + y;
      if (state_h) {  // S-E, W-N
        connect(s, e);
        connect(w, nn);
      } else {  // S-W, N-E
        connect(s, w);
        connect(nn, e);
      }
    }
  }
  // boundary half-arcs pair rows (2k, 2k+1) on both vertical edges
  for (int k = 0; k < lat.m; ++k) {
    connect(v0 + 0 * rows + 2 * k, v0 + 0 * rows + 2 * k + 1);
    connect(v0 + n * rows + 2 * k, v0 + n * rows + 2 * k + 1);
  }
  int loops = 0;
  std::vector<bool> visited(total, false);
  for (int s = 0; s < total; ++s) {
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
  return loops;
}

int fk_components(const PottsLattice& lat, unsigned long long bond_mask) {
  std::vector<int> parent(lat.n_sites);
  for (int i = 0; i < lat.n_sites; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (size_t b = 0; b < lat.bonds.size(); ++b)
    if ((bond_mask >> b) & 1ULL) parent[find(lat.bonds[b].site_a)] = find(lat.bonds[b].site_b);
  int comps = 0;
  for (int i = 0; i < lat.n_sites; ++i) comps += (find(i) == i);
  return comps;
}

// ---------------------------------------------------------------------------
// Brute-force partition functions (cylinder)
// ---------------------------------------------------------------------------

double fk_bruteforce_Z(int n, int m, const PottsParams& params) {
  const PottsLattice lat = PottsLattice::make(n, m, true);
  const int nb = static_cast<int>(lat.bonds.size());
  if (nb > 24) throw CapacityError("fk_bruteforce_Z: 2NM > 24 bonds");
  const double vj = params.v_j(), vk = params.v_k();

  // partitioned by 6-bit mask prefix; partial sums reduced in fixed order
  const int prefix_bits = std::min(6, nb);
  const int chunks = 1 << prefix_bits;
  const long long per = 1LL << (nb - prefix_bits);
  std::vector<double> partial(chunks, 0.0);
  parallel_for(chunks, [&](int chunk) {
    double acc = 0.0;
    for (long long lo = 0; lo < per; ++lo) {
      const unsigned long long mask =
          (static_cast<unsigned long long>(chunk) << (nb - prefix_bits)) | lo;
      int nbj = 0, nbk = 0;
      for (int b = 0; b < nb; ++b)
        if ((mask >> b) & 1ULL) (lat.bonds[b].is_j ? nbj : nbk) += 1;
      const int comps = fk_components(lat, mask);
      const int loops = fk_loop_count(lat, mask);
      if (2 * comps != loops + lat.n_sites - (nbj + nbk))
        throw std::logic_error("fk_bruteforce_Z: Euler relation violated");
      acc += std::pow(vj, nbj) * std::pow(vk, nbk) *
             std::pow(static_cast<double>(params.q), comps);
    }
    partial[chunk] = acc;
  });
  double z = 0.0;
  for (double x : partial) z += x;
  return z;
}

double spin_bruteforce_Z(int n, int m, const PottsParams& params) {
  const PottsLattice lat = PottsLattice::make(n, m, true);
  double total_configs = std::pow(static_cast<double>(params.q), lat.n_sites);
  if (total_configs > 2.1e7) throw CapacityError("spin_bruteforce_Z: Q^{N_s} too large");
  const double vj = params.v_j(), vk = params.v_k();
  std::vector<int> spin(lat.n_sites, 0);
  double z = 0.0;
  for (;;) {
    double w = 1.0;
    for (const auto& b : lat.bonds)
      if (spin[b.site_a] == spin[b.site_b]) w *= 1.0 + (b.is_j ? vj : vk);
    z += w;
    int k = 0;
    while (k < lat.n_sites && ++spin[k] == params.q) spin[k++] = 0;
    if (k == lat.n_sites) break;
  }
  return z;
}

// ---------------------------------------------------------------------------
// Spin transfer matrix
// ---------------------------------------------------------------------------

Eigen::MatrixXd spin_transfer(int n, const PottsParams& params, bool normalized) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("spin_transfer: N must be even");
  if (params.q < 2) throw std::invalid_argument("spin_transfer: Q must be an integer >= 2");
  const int half = n / 2;
  double dim_d = std::pow(static_cast<double>(params.q), half);
  if (dim_d > 1e4) throw CapacityError("spin_transfer: Q^{N/2} > 1e4");
  const int dim = static_cast<int>(dim_d);
  const int mid = half + 1;
  const double ej = 1.0 + params.v_j(), ek = 1.0 + params.v_k();

  auto digits = [&](int code, int len, std::vector<int>& out) {
    out.resize(len);
    for (int i = 0; i < len; ++i) {
      out[i] = code % params.q;
      code /= params.q;
    }
  };

  const int mid_count = static_cast<int>(std::pow(params.q, mid));
  Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<int> mu, nu, rho_row;
  for (int a = 0; a < dim; ++a) {
    digits(a, half, mu);
    for (int b = 0; b < dim; ++b) {
      digits(b, half, nu);
      double sum = 0.0;
      for (int r = 0; r < mid_count; ++r) {
        digits(r, mid, rho_row);
        double w = 1.0;
        // spin mu_k sits at x = 2k+1 and couples to rho at x+1 (J) and x-1 (K)
        for (int k = 0; k < half; ++k) {
          if (mu[k] == rho_row[k + 1]) w *= ej;
          if (mu[k] == rho_row[k]) w *= ek;
          if (nu[k] == rho_row[k + 1]) w *= ej;
          if (nu[k] == rho_row[k]) w *= ek;
        }
        sum += w;
      }
      lam(a, b) = sum;
    }
  }
  if (normalized) lam /= params.kappa(n);
  return lam;
}

double loop_Z(int n, int m, const PottsParams& params) {
  auto d = build_rho_DN_sweep(n, params.loop_params());
  MatrixXc power = MatrixXc::Identity(d.dim(), d.dim());
  for (int k = 0; k < m; ++k) power = power * d.mat;
  SectorMatrix pm = d;
  pm.mat = power;
  const cplx tr = weighted_trace(pm, params.loop_params());
  return std::pow(params.kappa(n), m) * tr.real();
}

// ---------------------------------------------------------------------------
// Boundary conditions on the strip
// ---------------------------------------------------------------------------

LinkState boundary_state_wrap(int n) {
  std::vector<int> partner(n, kDefect);
  partner[0] = n - 1;
  partner[n - 1] = 0;
  for (int i = 1; i + 1 < n - 1; i += 2) {
    partner[i] = i + 1;
    partner[i + 1] = i;
  }
  return LinkState(n, std::move(partner));
}

LinkState boundary_state_defect(int n) {
  std::vector<int> partner(n, kDefect);
  for (int i = 1; i + 1 < n - 1; i += 2) {
    partner[i] = i + 1;
    partner[i + 1] = i;
  }
  return LinkState(n, std::move(partner));
}

LinkState boundary_state_simple(int n) {
  std::vector<int> partner(n, kDefect);
  for (int i = 0; i + 1 < n; i += 2) {
    partner[i] = i + 1;
    partner[i + 1] = i;
  }
  return LinkState(n, std::move(partner));
}

double boundary_Z(char kind, int n, int m, const PottsParams& params) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("boundary_Z: N must be even");
  const auto lp = params.loop_params();
  auto d = build_rho_DN_sweep(n, lp);
  MatrixXc power = MatrixXc::Identity(d.dim(), d.dim());
  for (int k = 0; k < m; ++k) power = power * d.mat;
  const MatrixXc g = gram_matrix(n, lp);
  const LinkBasis& basis = link_basis(n);

  auto sandwich = [&](const LinkState& v, const LinkState& w) {
    return (g.row(basis.index(v)) * power.col(basis.index(w))).value().real();
  };

  const double beta = lp.beta();
  const int ns = (n + 1) * m + n / 2;
  const double big_k =
      std::pow(beta, ns) / std::pow(std::sin(lp.u) * std::sin(lp.lambda - lp.u), n * m);
  const LinkState wrap = boundary_state_wrap(n);
  const LinkState def = boundary_state_defect(n);
  const LinkState simple = boundary_state_simple(n);

  switch (kind) {
    case 'a':
      return big_k * std::pow(beta, -n - 2) *
             (sandwich(wrap, wrap) - beta * sandwich(def, def));
    case 'b':
      return big_k * std::pow(beta, -n - 2) *
             (sandwich(wrap, wrap) + beta * (beta * beta - 1.0) * sandwich(def, def));
    case 'c':
      return big_k * sandwich(simple, simple);
    case 'd':
      return big_k * std::pow(beta, -n / 2.0 - 1) * sandwich(wrap, simple);
    default:
      throw std::invalid_argument("boundary_Z: kind must be one of a, b, c, d");
  }
}

double boundary_Z_spin(char kind, int n, int m, const PottsParams& params) {
  const PottsLattice lat = PottsLattice::make(n, m, false);
  const double vj = params.v_j(), vk = params.v_k();
  // boundary rows are the even rows 0 and 2M, each with N/2 spins
  std::vector<int> fixed(lat.n_sites, -1);
  int top_base = 0;
  for (int r = 0; r < 2 * m; ++r) top_base += row_width(n, r);
  switch (kind) {
    case 'a':
      for (int i = 0; i < n / 2; ++i) fixed[i] = 0;
      for (int i = 0; i < n / 2; ++i) fixed[top_base + i] = 1;
      if (params.q < 2) throw std::invalid_argument("boundary_Z_spin: kind a needs Q >= 2");
      break;
    case 'b':
      for (int i = 0; i < n / 2; ++i) fixed[i] = 0;
      for (int i = 0; i < n / 2; ++i) fixed[top_base + i] = 0;
      break;
    case 'c':
      break;
    case 'd':
      for (int i = 0; i < n / 2; ++i) fixed[i] = 0;
      break;
    default:
      throw std::invalid_argument("boundary_Z_spin: kind must be one of a, b, c, d");
  }
  std::vector<int> free_sites;
  for (int i = 0; i < lat.n_sites; ++i)
    if (fixed[i] < 0) free_sites.push_back(i);
  if (std::pow(static_cast<double>(params.q), free_sites.size()) > 2.1e7)
    throw CapacityError("boundary_Z_spin: too many free spins");

  std::vector<int> spin(lat.n_sites, 0);
  for (int i = 0; i < lat.n_sites; ++i)
    if (fixed[i] >= 0) spin[i] = fixed[i];
  double z = 0.0;
  for (;;) {
    double w = 1.0;
    for (const auto& b : lat.bonds)
      if (spin[b.site_a] == spin[b.site_b]) w *= 1.0 + (b.is_j ? vj : vk);
    z += w;
    size_t k = 0;
    while (k < free_sites.size() && ++spin[free_sites[k]] == params.q)
      spin[free_sites[k++]] = 0;
    if (k == free_sites.size()) break;
  }
  return z;
}

}  // namespace loopalg
