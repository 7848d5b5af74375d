#ifndef CUBIC_BDP_SPECIAL_FUNCTIONS_HPP
#define CUBIC_BDP_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cubic_bdp {

using complex = std::complex<double>;

// Gamma, Beta and Pochhammer on the positive real axis.

inline double gamma_fn(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("gamma_fn: argument must be positive, got " + std::to_string(x));
  }
  return std::tgamma(x);
}

inline double log_gamma_fn(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("log_gamma_fn: argument must be positive, got " + std::to_string(x));
  }
  return std::lgamma(x);
}

/// (alpha)! = Gamma(alpha + 1), defined for alpha > -1.
inline double real_factorial(double alpha) { return gamma_fn(alpha + 1.0); }

inline double log_real_factorial(double alpha) { return log_gamma_fn(alpha + 1.0); }

inline double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("beta_fn: arguments must be positive");
  }
  // tgamma overflows near 171; fall back to logs well before that.
  if (a + b < 150.0) {
    return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
  }
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

inline double log_beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("log_beta_fn: arguments must be positive");
  }
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Rising factorial a(a+1)...(a+n-1); 1 for n == 0.
inline double pochhammer(double a, int n) {
  if (n < 0) {
    throw std::domain_error("pochhammer: n must be non-negative");
  }
  double p = 1.0;
  for (int k = 0; k < n; ++k) {
    p *= a + k;
  }
  return p;
}

/// log((a)_n) for a > 0, via lgamma so that large n does not overflow.
inline double log_pochhammer(double a, double n) {
  if (!(a > 0.0) || n < 0.0) {
    throw std::domain_error("log_pochhammer: need a > 0 and n >= 0");
  }
  return std::lgamma(a + n) - std::lgamma(a);
}

// Trigonometric functions of order 3:
//   sigma_l(u) = sum_n (-1)^n u^{3n+l} / (3n+l)!,  l = 0, 1, 2.
// Closed form: sigma_l(u) = (1/3) sum_m kappa_{l,m} exp(omega_m u) with
// omega = (-1, j, conj(j)), j = exp(i pi/3).

namespace detail {

inline constexpr double kSqrt3 = 1.7320508075688772935274463415058723;

inline const complex& omega(int m) {
  static const complex w[3] = {complex(-1.0, 0.0), complex(0.5, 0.5 * kSqrt3),
                               complex(0.5, -0.5 * kSqrt3)};
  return w[m];
}

inline const complex& sigma_weight(int l, int m) {
  static const complex j(0.5, 0.5 * kSqrt3);
  static const complex jb(0.5, -0.5 * kSqrt3);
  static const complex k[3][3] = {{1.0, 1.0, 1.0}, {-1.0, jb, j}, {1.0, -j, -jb}};
  return k[l][m];
}

inline void check_sigma_index(int l) {
  if (l < 0 || l > 2) {
    throw std::domain_error("sigma: index must be 0, 1 or 2");
  }
}

}  // namespace detail

/// Exponential closed form of sigma_l. Loses relative accuracy for |u| << 1
/// when l > 0 (the three exponentials cancel); use sigma() there.
inline complex sigma_closed(int l, complex u) {
  detail::check_sigma_index(l);
  complex s = 0.0;
  for (int m = 0; m < 3; ++m) {
    s += detail::sigma_weight(l, m) * std::exp(detail::omega(m) * u);
  }
  return s / 3.0;
}

/// Power series of sigma_l with compensated (Kahan) summation.
inline complex sigma_series(int l, complex u, int terms = 60) {
  detail::check_sigma_index(l);
  const complex u3 = u * u * u;
  complex term = 1.0;
  for (int k = 1; k <= l; ++k) {
    term *= u / static_cast<double>(k);
  }
  complex sum = 0.0;
  complex carry = 0.0;
  for (int n = 0; n < terms; ++n) {
    const complex y = term - carry;
    const complex t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    const double k = 3.0 * n + l;
    term *= -u3 / ((k + 1.0) * (k + 2.0) * (k + 3.0));
  }
  return sum;
}

/// sigma_l(u): series near the origin, closed form elsewhere.
inline complex sigma(int l, complex u) {
  detail::check_sigma_index(l);
  if (std::abs(u) <= 2.0) {
    return sigma_series(l, u, 40);
  }
  return sigma_closed(l, u);
}

// theta(t) = int_0^t (1-u^3)^{-2/3} du,  theta_hat = theta0 - theta.

struct ThetaConstants {
  double theta0;
};

/// theta0 = Gamma(1/3)^3 / (2 pi sqrt 3) = B(1/3, 1/3) / 3.
inline double theta0() {
  static const double value = [] {
    const double g = std::tgamma(1.0 / 3.0);
    return g * g * g / (2.0 * std::numbers::pi * detail::kSqrt3);
  }();
  return value;
}

inline ThetaConstants theta_constants() { return ThetaConstants{theta0()}; }

/// sum_k (2/3)_k t^{3k+1} / (k! (3k+1)); converges for t < 1.
inline double theta_series(double t) {
  const double t3 = t * t * t;
  double coef = 1.0;  // (2/3)_k / k!
  double power = t;
  double sum = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double term = coef * power / (3.0 * k + 1.0);
    sum += term;
    if (term < 1e-18 * sum) {
      break;
    }
    coef *= (k + 2.0 / 3.0) / (k + 1.0);
    power *= t3;
  }
  return sum;
}

/// theta_hat expressed through its complement x = 1 - t^3:
///   (1/3) int_0^x v^{-2/3} (1-v)^{-2/3} dv = x^{1/3} sum_k (2/3)_k x^k / (3 k! (k+1/3)).
/// Passing x directly keeps full relative accuracy as t -> 1.
inline double theta_hat_from_complement(double x) {
  if (x < 0.0 || x > 1.0) {
    throw std::domain_error("theta_hat_from_complement: x must lie in [0, 1]");
  }
  if (x == 0.0) {
    return 0.0;
  }
  if (x > 0.9) {
    // Series in x degrades near x = 1; t = (1-x)^{1/3} is small there.
    return theta0() - theta_series(std::cbrt(1.0 - x));
  }
  double coef = 1.0;
  double power = 1.0;
  double sum = 0.0;
  for (int k = 0; k < 5000; ++k) {
    const double term = coef * power / (k + 1.0 / 3.0);
    sum += term;
    if (term < 1e-18 * sum) {
      break;
    }
    coef *= (k + 2.0 / 3.0) / (k + 1.0);
    power *= x;
  }
  return std::cbrt(x) * sum / 3.0;
}

namespace detail {
inline constexpr double kThetaSwitch = 0.8;

inline void check_unit_interval(double t, const char* who) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error(std::string(who) + ": argument must lie in [0, 1]");
  }
}
}  // namespace detail

inline double theta(double t) {
  detail::check_unit_interval(t, "theta");
  if (t <= detail::kThetaSwitch) {
    return theta_series(t);
  }
  return theta0() - theta_hat_from_complement(1.0 - t * t * t);
}

inline double theta_hat(double t) {
  detail::check_unit_interval(t, "theta_hat");
  if (t > detail::kThetaSwitch) {
    return theta_hat_from_complement((1.0 - t) * (1.0 + t + t * t));
  }
  return theta0() - theta_series(t);
}

/// Theta(t, u) = theta(t) - theta(u), for 0 <= u <= t <= 1.
inline double theta_diff(double t, double u) {
  detail::check_unit_interval(t, "theta_diff");
  detail::check_unit_interval(u, "theta_diff");
  if (u > t) {
    throw std::domain_error("theta_diff: requires u <= t");
  }
  if (u == t) {
    return 0.0;
  }
  return theta_hat(u) - theta_hat(t);
}

}  // namespace cubic_bdp

#endif  // CUBIC_BDP_SPECIAL_FUNCTIONS_HPP
