#ifndef CUBIC_BDP_POLYNOMIALS_HPP
#define CUBIC_BDP_POLYNOMIALS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cubic_bdp/extrapolation.hpp"
#include "cubic_bdp/processes.hpp"
#include "cubic_bdp/special_functions.hpp"

namespace cubic_bdp {

/// F_0(z) ... F_N(z) from
///   (lambda_n + mu_n - z) F_n = mu_{n+1} F_{n+1} + lambda_{n-1} F_{n-1},
///   F_0 = 1, F_1 = (lambda_0 + mu_0 - z) / mu_1.
/// For a P2 schedule these are the G_n.
struct PolySequenceResult {
  std::vector<complex> values;
  complex z;
  RateSchedule schedule;
  bool overflow = false;  // values stops at the last finite entry when set
};

inline PolySequenceResult eval_poly_sequence(const RateSchedule& s, complex z, long N) {
  if (N < 0) {
    throw std::domain_error("eval_poly_sequence: N must be non-negative");
  }
  PolySequenceResult r{{}, z, s, false};
  r.values.reserve(static_cast<std::size_t>(N + 1));
  r.values.push_back(1.0);
  if (N == 0) {
    return r;
  }
  complex prev = 1.0;
  complex cur = (s.lambda(0) + s.mu0() - z) / s.mu(1);
  r.values.push_back(cur);
  for (long n = 1; n < N; ++n) {
    const complex next = ((s.lambda(n) + s.mu(n) - z) * cur - s.lambda(n - 1) * prev) / s.mu(n + 1);
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) {
      r.overflow = true;
      return r;
    }
    prev = cur;
    cur = next;
    r.values.push_back(cur);
  }
  return r;
}

/// The d-triplet (P1) or e-triplet (P2) d_{3n+l}(zeta), stored scaled as
///   q_k = d_k / (k + 3c)!
/// which is the coefficient the generating functions need and stays in range
/// where d_k itself would overflow. value(k) reconstructs d_k.
///
/// d-triplet: d_{3n+1} = -zeta d_{3n} + mu_n d_{3n-2}, d_{3n+2} = -zeta d_{3n+1},
///            d_{3n+3} = -zeta d_{3n+2} + lambda_n d_{3n}, with d_{-2} = 1/zeta^2, d_0 = 1.
/// e-triplet: e_{3n+1} = -zeta e_{3n}, e_{3n+2} = -zeta e_{3n+1} + mu_n e_{3n-1},
///            e_{3n+3} = -zeta e_{3n+2} + lambda_n e_{3n}, with e_{-1} = -1/zeta, e_0 = 1.
struct TripletResult {
  Family family;
  double c;
  complex zeta;
  std::vector<complex> scaled;  // q_0 ... q_{3N+2}

  long size() const { return static_cast<long>(scaled.size()); }

  double log_scale(long k) const { return log_real_factorial(static_cast<double>(k) + 3.0 * c); }

  complex value(long k) const {
    return scaled.at(static_cast<std::size_t>(k)) * std::exp(log_scale(k));
  }
};

namespace detail {
inline constexpr double kMinTripletZeta = 1e-4;
}

inline TripletResult triplet(const RateSchedule& s, complex zeta, long N) {
  if (N < 0) {
    throw std::domain_error("triplet: N must be non-negative");
  }
  if (s.mu0() != 0.0 && std::abs(zeta) < detail::kMinTripletZeta) {
    throw std::domain_error("triplet: |zeta| too small for the 1/zeta seed with mu0 > 0");
  }
  const double c3 = 3.0 * s.c();
  TripletResult r{s.family(), s.c(), zeta, {}};
  auto& q = r.scaled;
  q.assign(static_cast<std::size_t>(3 * N + 3), complex(0.0));
  q[0] = 1.0 / real_factorial(c3);
  auto at = [&q](long k) -> complex& { return q[static_cast<std::size_t>(k)]; };

  for (long n = 0; n <= N; ++n) {
    const double k = 3.0 * static_cast<double>(n) + c3;  // so (3n+l+3c)! = (k+l)!
    const double lam = s.lambda(n);
    if (s.family() == Family::P1) {
      complex seed = 0.0;
      if (n == 0) {
        if (s.mu0() != 0.0) {
          seed = s.mu0() / (zeta * zeta) / real_factorial(c3 + 1.0);
        }
      } else {
        seed = s.mu(n) * at(3 * n - 2) / ((k - 1.0) * k * (k + 1.0));
      }
      at(3 * n + 1) = -zeta * at(3 * n) / (k + 1.0) + seed;
      at(3 * n + 2) = -zeta * at(3 * n + 1) / (k + 2.0);
    } else {
      at(3 * n + 1) = -zeta * at(3 * n) / (k + 1.0);
      complex seed = 0.0;
      if (n == 0) {
        if (s.mu0() != 0.0) {
          seed = -s.mu0() / zeta / real_factorial(c3 + 2.0);
        }
      } else {
        seed = s.mu(n) * at(3 * n - 1) / (k * (k + 1.0) * (k + 2.0));
      }
      at(3 * n + 2) = -zeta * at(3 * n + 1) / (k + 2.0) + seed;
    }
    if (n < N) {
      at(3 * n + 3) =
          -zeta * at(3 * n + 2) / (k + 3.0) + lam * at(3 * n) / ((k + 1.0) * (k + 2.0) * (k + 3.0));
    }
    const complex last = at(3 * n + 2);
    if (!std::isfinite(last.real()) || !std::isfinite(last.imag())) {
      throw std::overflow_error("triplet: scaled coefficient overflow");
    }
  }
  return r;
}

/// Principal cube root.
inline complex principal_cbrt(complex z) {
  if (z == complex(0.0)) {
    return 0.0;
  }
  return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0);
}

/// max_{n <= N} |F_n - F_n^{triplet}| / |F_n| where
///   P1: F_n = (3c)! (c+1/3)_n / (c+1)_n * d_{3n} / (3n+3c)!
///   P2: G_n = (3c+1)! (c+2/3)_n / (c+1)_n * e_{3n} / (3n+3c+1)!
/// `zeta` may be any cube root of z; d_{3n} depends on z only.
inline double check_relation(const RateSchedule& s, complex z, long N, complex zeta) {
  const auto poly = eval_poly_sequence(s, z, N);
  if (poly.overflow) {
    throw std::overflow_error("check_relation: polynomial overflow");
  }
  const auto tri = triplet(s, zeta, N);
  const double c = s.c();
  double worst = 0.0;
  for (long n = 0; n <= N; ++n) {
    const complex q = tri.scaled[static_cast<std::size_t>(3 * n)];
    complex rhs;
    if (s.family() == Family::P1) {
      const double ratio =
          std::exp(log_pochhammer(c + 1.0 / 3.0, n) - log_pochhammer(c + 1.0, n));
      rhs = real_factorial(3.0 * c) * ratio * q;
    } else {
      const double ratio =
          std::exp(log_pochhammer(c + 2.0 / 3.0, n) - log_pochhammer(c + 1.0, n));
      rhs = real_factorial(3.0 * c + 1.0) * ratio * q / (3.0 * n + 3.0 * c + 1.0);
    }
    const complex lhs = poly.values[static_cast<std::size_t>(n)];
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
  }
  return worst;
}

inline double check_relation(const RateSchedule& s, complex z, long N) {
  return check_relation(s, z, N, principal_cbrt(z));
}

/// sum_{n>=0} F_n(z) straight from the recurrence. The terms decay like
/// n^{-4/3} (P1) or n^{-5/3} (P2), so partial sums at N_0 2^i are
/// extrapolated in powers of N^{-1/3}.
inline Extrapolated<complex> accelerated_poly_sum(const RateSchedule& s, complex z,
                                                  long n0 = 1024, int levels = 11) {
  if (n0 < 16 || levels < 3) {
    throw std::domain_error("accelerated_poly_sum: need n0 >= 16 and levels >= 3");
  }
  std::vector<complex> partial;
  complex sum = 1.0;
  complex prev = 1.0;
  complex cur = (s.lambda(0) + s.mu0() - z) / s.mu(1);
  long next = n0;
  for (long n = 1; static_cast<int>(partial.size()) < levels; ++n) {
    sum += cur;
    if (n + 1 == next) {
      partial.push_back(sum);
      next *= 2;
    }
    const complex nxt = ((s.lambda(n) + s.mu(n) - z) * cur - s.lambda(n - 1) * prev) / s.mu(n + 1);
    prev = cur;
    cur = nxt;
  }
  return extrapolate_power_tail(partial, third_power_exponents(partial.size() - 1));
}

}  // namespace cubic_bdp

#endif  // CUBIC_BDP_POLYNOMIALS_HPP
