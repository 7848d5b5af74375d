#ifndef CUBIC_BDP_TESTS_ORACLES_HPP
#define CUBIC_BDP_TESTS_ORACLES_HPP

// Reference computations written without the library, used as test oracles.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using cld = std::complex<long double>;

/// Lanczos (g = 7, n = 9) Gamma with reflection for x < 1/2.
inline double gamma(double x) {
  static const double p[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
  }
  x -= 1.0;
  double a = p[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) {
    a += p[i] / (x + i);
  }
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

/// Gauss-Legendre nodes and weights on [0, 1] by Newton iteration on P_n.
inline std::vector<std::pair<double, double>> gauss_legendre(int n) {
  std::vector<std::pair<double, double>> out;
  for (int i = 1; i <= n; ++i) {
    long double x = std::cos(std::numbers::pi_v<long double> * (i - 0.25L) / (n + 0.5L));
    long double dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) {
        break;
      }
    }
    const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    out.push_back({static_cast<double>(0.5L * (1.0L + x)), static_cast<double>(0.5L * w)});
  }
  return out;
}

/// int_0^1 (1-u^3)^{-2/3} du after u = 1 - v^3, which leaves the smooth
/// integrand 3 (1 + u + u^2)^{-2/3}.
inline double theta0_by_substitution(int n = 64) {
  double s = 0.0;
  for (const auto& [v, w] : gauss_legendre(n)) {
    const double u = 1.0 - v * v * v;
    s += w * 3.0 * std::pow(1.0 + u + u * u, -2.0 / 3.0);
  }
  return s;
}

/// sigma_l(u) by the defining series in long double.
inline cld sigma(int l, cld u, int terms = 120) {
  cld term = 1.0L;
  for (int k = 1; k <= l; ++k) {
    term *= u / static_cast<long double>(k);
  }
  cld sum = 0.0L;
  const cld u3 = u * u * u;
  for (int n = 0; n < terms; ++n) {
    sum += term;
    const long double k = 3.0L * n + l;
    term *= -u3 / ((k + 1.0L) * (k + 2.0L) * (k + 3.0L));
  }
  return sum;
}

struct Rates {
  int family;  // 1 or 2
  long double c;
  long double mu0;

  long double lambda(long n) const {
    const long double k = 3.0L * n + 3.0L * c;
    return family == 1 ? (k + 1) * (k + 1) * (k + 2) : (k + 1) * (k + 2) * (k + 2);
  }
  long double mu(long n) const {
    if (n == 0) {
      return mu0;
    }
    const long double k = 3.0L * n + 3.0L * c;
    return family == 1 ? (k - 1) * k * k : k * k * (k + 1);
  }
};

/// F_0..F_N from (lambda_n + mu_n - z) F_n = mu_{n+1} F_{n+1} + lambda_{n-1} F_{n-1}.
inline std::vector<cld> polys(const Rates& r, cld z, long N) {
  std::vector<cld> f(static_cast<std::size_t>(N + 1));
  f[0] = 1.0L;
  if (N >= 1) {
    f[1] = (r.lambda(0) + r.mu0 - z) / r.mu(1);
  }
  for (long n = 1; n < N; ++n) {
    f[static_cast<std::size_t>(n + 1)] =
        ((r.lambda(n) + r.mu(n) - z) * f[static_cast<std::size_t>(n)] -
         r.lambda(n - 1) * f[static_cast<std::size_t>(n - 1)]) /
        r.mu(n + 1);
  }
  return f;
}

/// pi_n by the product lambda_0...lambda_{n-1} / (mu_1...mu_n).
inline long double pi(const Rates& r, long n) {
  long double p = 1.0L;
  for (long k = 1; k <= n; ++k) {
    p *= r.lambda(k - 1) / r.mu(k);
  }
  return p;
}

/// Unscaled triplet t_{-2}..t_{3N}: the d-triplet for family 1 and the
/// e-triplet for family 2. Entry k sits at index k + 2.
inline std::vector<cld> triplet(const Rates& r, cld zeta, long N) {
  std::vector<cld> t(static_cast<std::size_t>(3 * N + 3), 0.0L);
  auto at = [&](long k) -> cld& { return t[static_cast<std::size_t>(k + 2)]; };
  at(0) = 1.0L;
  if (r.family == 1) {
    at(-2) = 1.0L / (zeta * zeta);
  } else {
    at(-1) = -1.0L / zeta;
  }
  for (long n = 0; n < N; ++n) {
    if (r.family == 1) {
      at(3 * n + 1) = -zeta * at(3 * n) + r.mu(n) * at(3 * n - 2);
      at(3 * n + 2) = -zeta * at(3 * n + 1);
    } else {
      at(3 * n + 1) = -zeta * at(3 * n);
      at(3 * n + 2) = -zeta * at(3 * n + 1) + r.mu(n) * at(3 * n - 1);
    }
    at(3 * n + 3) = -zeta * at(3 * n + 2) + r.lambda(n) * at(3 * n);
  }
  return t;
}

inline long double pochhammer(long double a, long n) {
  long double p = 1.0L;
  for (long k = 0; k < n; ++k) {
    p *= a + k;
  }
  return p;
}

/// Gamma(x + 1) for x >= 0 in long double, by upward recurrence from [1, 2).
inline long double factorial(long double x) {
  long double v = 1.0L;
  long double y = x + 1.0L;
  while (y > 2.0L) {
    y -= 1.0L;
    v *= y;
  }
  return v * static_cast<long double>(gamma(static_cast<double>(y)));
}

/// F_n or G_n rebuilt from the triplet at n.
inline cld from_triplet(const Rates& r, long n, const std::vector<cld>& t) {
  const cld tn = t[static_cast<std::size_t>(3 * n + 2)];
  const long double c = r.c;
  if (r.family == 1) {
    return factorial(3 * c) * pochhammer(c + 1.0L / 3, n) / pochhammer(c + 1, n) * tn /
           factorial(3.0L * n + 3 * c);
  }
  return factorial(3 * c + 1) * pochhammer(c + 2.0L / 3, n) / pochhammer(c + 1, n) * tn /
         factorial(3.0L * n + 3 * c + 1);
}

/// Principal cube root in long double.
inline cld cbrt(cld z) {
  if (z == cld(0.0L)) {
    return 0.0L;
  }
  return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0L);
}

/// Deterministic parameter draws.
class Draws {
 public:
  explicit Draws(unsigned seed) : gen_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }
  std::complex<double> disc(double rmin, double rmax) {
    return std::polar(uniform(rmin, rmax), uniform(-std::numbers::pi, std::numbers::pi));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace oracle

#endif  // CUBIC_BDP_TESTS_ORACLES_HPP
