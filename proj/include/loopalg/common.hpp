#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace loopalg {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// A request exceeded the desk-scale limits of an algorithm (brute-force
// enumeration, dense dimensions, ...). Carries the name of the limiting
// parameter so the CLI can report it.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// The spectral parameter sits on a pole of the requested quantity
// (vanishing sin/cos denominator, sin(lambda)=0, ...).
struct SingularParameter : std::runtime_error {
  explicit SingularParameter(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Threading
// ---------------------------------------------------------------------------

// Global cap used by column-parallel matrix builders. 0 = hardware default.
void set_max_threads(int n);
int max_threads();

// Chunked parallel loop over [0, n). Work items must write to disjoint
// locations; results are then independent of the thread count.
void parallel_for(int n, const std::function<void(int)>& body);

// ---------------------------------------------------------------------------
// Small numeric helpers
// ---------------------------------------------------------------------------

inline long long binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline long long catalan(int n) { return binomial(2 * n, n) / (n + 1); }

inline long gcd_long(long a, long b) { return std::gcd(a, b); }

}  // namespace loopalg
