#pragma once

#include <cmath>
#include <map>
#include <utility>

#include "loopalg/linkstate.hpp"

namespace loopalg {

// ---------------------------------------------------------------------------
// SpectralParams: the parameter bundle (lambda, Lambda = pi - lambda,
// beta = 2 cos lambda, q = e^{i lambda}, anisotropy u). lambda is either a
// rational multiple of pi -- the only case in which criticality and exact
// zero tests are decided -- or a free real number.
// ---------------------------------------------------------------------------
struct SpectralParams {
  bool rational = false;
  long p = 0, q_den = 1;  // lambda = pi*p/q_den, reduced, q_den > 0
  double lambda = 0.0;
  double u = 0.0;

  static SpectralParams from_rational(long p, long q, double u = 0.0);
  static SpectralParams from_real(double lambda, double u = 0.0);

  double Lambda() const { return pi - lambda; }
  double beta() const { return 2.0 * std::cos(lambda); }
  cplx q() const { return std::polar(1.0, lambda); }

  // Lambda = pi*a/b in lowest terms (rational input only).
  long a() const;
  long b() const;

  // e^{i Lambda} is a (2l)-th root of unity for some 2 <= l <= N.
  bool critical_for(int n) const;

  // S_k = sin(k Lambda), C_k = cos(k Lambda); half-integer indexing via
  // doubled arguments: s_half(n) = sin(n Lambda / 2).
  double S(double k) const { return std::sin(k * Lambda()); }
  double C(double k) const { return std::cos(k * Lambda()); }
  double s_half(long n2) const { return std::sin(0.5 * n2 * Lambda()); }
  double c_half(long n2) const { return std::cos(0.5 * n2 * Lambda()); }

  // Exact zero tests for sin(n Lambda / 2), cos(n Lambda / 2). Rational
  // parameters decide arithmetically; free reals use a tolerance.
  bool s_half_is_zero(long n2) const;
  bool c_half_is_zero(long n2) const;

  SpectralParams with_u(double new_u) const {
    SpectralParams s = *this;
    s.u = new_u;
    return s;
  }
};

// ---------------------------------------------------------------------------
// Diagram operations
// ---------------------------------------------------------------------------

// beta-product c1*c2 with c2 drawn on top; returns the resulting connectivity
// and the number of closed interior loops.
std::pair<Connectivity, int> compose(const Connectivity& c1, const Connectivity& c2);

// Number of loops closed by identifying top and bottom points (#(c)).
int closure_loops(const Connectivity& c);

// delta(c): number of through-strands (bottom-to-top pairings).
int delta_of(const Connectivity& c);

// Action of a connectivity on a link state (v drawn on top of c): resulting
// state and the number of closed loops.
std::pair<LinkState, int> apply_connectivity(const Connectivity& c, const LinkState& v);

// Gram bilinear form: 0 on defect mismatch, else beta^{#closed loops}.
// gram_loops returns -1 for the mismatch case.
int gram_loops(const LinkState& v, const LinkState& w);
cplx gram(const LinkState& v, const LinkState& w, const SpectralParams& params);

// ---------------------------------------------------------------------------
// TLElement: finite formal linear combination of connectivities. Scalar is
// the coefficient type (complex double by default; the extended-precision
// instantiation lives behind src/extprec.cpp).
// ---------------------------------------------------------------------------
template <typename Scalar = cplx>
struct TLElementT {
  int n = 0;
  std::map<Connectivity, Scalar> terms;

  TLElementT() = default;
  explicit TLElementT(int n_sites) : n(n_sites) {}

  static TLElementT identity(int n, Scalar coeff = Scalar(1)) {
    TLElementT x(n);
    x.terms[Connectivity::identity(n)] = coeff;
    return x;
  }

  void add(const Connectivity& c, Scalar coeff) {
    auto it = terms.find(c);
    if (it == terms.end()) {
      if (coeff != Scalar(0)) terms.emplace(c, coeff);
    } else {
      it->second += coeff;
      if (it->second == Scalar(0)) terms.erase(it);
    }
  }

  TLElementT& operator+=(const TLElementT& o) {
    for (const auto& [c, a] : o.terms) add(c, a);
    return *this;
  }

  TLElementT operator*(Scalar s) const {
    TLElementT r(n);
    if (s == Scalar(0)) return r;
    for (const auto& [c, a] : terms) r.terms[c] = a * s;
    return r;
  }
};

using TLElement = TLElementT<cplx>;

// beta-product of algebra elements: loops become factors of beta.
template <typename Scalar>
TLElementT<Scalar> multiply(const TLElementT<Scalar>& x, const TLElementT<Scalar>& y,
                            Scalar beta) {
  if (x.n != y.n) throw std::invalid_argument("multiply: size mismatch");
  TLElementT<Scalar> r(x.n);
  for (const auto& [cx, ax] : x.terms)
    for (const auto& [cy, ay] : y.terms) {
      auto [c, loops] = compose(cx, cy);
      Scalar w = ax * ay;
      for (int l = 0; l < loops; ++l) w *= beta;
      r.add(c, w);
    }
  return r;
}

// tau(c) = beta^{#(c)}, extended linearly.
cplx trace_tau(const TLElement& x, const SpectralParams& params);

}  // namespace loopalg
