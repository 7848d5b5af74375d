#ifndef CUBIC_BDP_GENERATING_SERIES_HPP
#define CUBIC_BDP_GENERATING_SERIES_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <stdexcept>

#include "cubic_bdp/polynomials.hpp"
#include "cubic_bdp/processes.hpp"
#include "cubic_bdp/truncated_series.hpp"

namespace cubic_bdp {

using ComplexSeries = TruncatedSeries<complex>;

inline constexpr long kDefaultSeriesTerms = 60;
inline constexpr long kMaxSeriesTerms = 200;

/// Reduced generating function t^{-(3c+l)} G_l(zeta, t) (P1) or t^{-(3c+l)} H_l (P2):
///   sum_{n <= N} d_{3n+l}(zeta) t^{3n} / (3n+3c+l)!
/// Only integer powers of t occur; the result has order 3N.
inline ComplexSeries gl_series(int l, complex z, const RateSchedule& s, long N) {
  if (l < 0 || l > 2) {
    throw std::domain_error("gl_series: l must be 0, 1 or 2");
  }
  if (N < 1 || N > kMaxSeriesTerms) {
    throw std::domain_error("gl_series: N must lie in [1, 200]");
  }
  const auto tri = triplet(s, principal_cbrt(z), N);
  ComplexSeries out(static_cast<std::size_t>(3 * N));
  for (long n = 0; n <= N; ++n) {
    out[static_cast<std::size_t>(3 * n)] = tri.scaled[static_cast<std::size_t>(3 * n + l)];
  }
  return out;
}

/// Residuals of the three-equation linear system satisfied by the generating
/// functions, written for the reduced series g_l = t^{-(3c+l)} G_l after
/// clearing the leading power of t from each equation:
///
///  P1: (1-t^3)(3c g0 + t g0') - t^3 g0 + zeta t^3 g2 = 1/(3c-1)!
///      (1-t^3)((3c+1) g1 + t g1') - 2 t^3 g1 + zeta g0 = mu0 / (zeta^2 (3c)!)
///      (3c+2) g2 + t g2' + zeta g1 = 0
///  P2: (1-t^3)(3c h0 + t h0') - 2 t^3 h0 + zeta t^3 h2 = 1/(3c-1)!
///      (3c+1) h1 + t h1' + zeta h0 = 0
///      (1-t^3)((3c+2) h2 + t h2') - t^3 h2 + zeta h1 = -mu0 / (zeta (3c+1)!)
///
/// Returns the largest absolute residual coefficient over all three equations.
inline double ode_residual(Family family, complex z, double c, double mu0, long N) {
  const RateSchedule s(family, c, mu0);
  const complex zeta = principal_cbrt(z);
  std::array<ComplexSeries, 3> g{gl_series(0, z, s, N), gl_series(1, z, s, N),
                                 gl_series(2, z, s, N)};
  const std::size_t order = g[0].order();
  ComplexSeries one_minus_t3(order, {1.0, 0.0, 0.0, -1.0});

  auto weighted = [&](int l) {  // (3c+l) g_l + t g_l'
    return scale(g[l], 3.0 * c + l) + g[l].euler_derivative();
  };
  auto constant = [&](complex v) { return ComplexSeries(order, {v}); };

  ComplexSeries r1(order), r2(order), r3(order);
  const complex rhs1 = 1.0 / real_factorial(3.0 * c - 1.0);
  if (family == Family::P1) {
    const complex rhs2 =
        mu0 == 0.0 ? complex(0.0) : mu0 / (zeta * zeta) / real_factorial(3.0 * c);
    r1 = one_minus_t3 * weighted(0) - g[0].shifted(3) + scale(g[2].shifted(3), zeta) -
         constant(rhs1);
    r2 = one_minus_t3 * weighted(1) - scale(g[1].shifted(3), 2.0) + scale(g[0], zeta) -
         constant(rhs2);
    r3 = weighted(2) + scale(g[1], zeta);
  } else {
    const complex rhs3 = mu0 == 0.0 ? complex(0.0) : -mu0 / zeta / real_factorial(3.0 * c + 1.0);
    r1 = one_minus_t3 * weighted(0) - scale(g[0].shifted(3), 2.0) + scale(g[2].shifted(3), zeta) -
         constant(rhs1);
    r2 = weighted(1) + scale(g[0], zeta);
    r3 = one_minus_t3 * weighted(2) - g[2].shifted(3) + scale(g[1], zeta) - constant(rhs3);
  }
  return std::max({r1.max_abs(), r2.max_abs(), r3.max_abs()});
}

}  // namespace cubic_bdp

#endif  // CUBIC_BDP_GENERATING_SERIES_HPP
