#ifndef CUBIC_BDP_NEVANLINNA_HPP
#define CUBIC_BDP_NEVANLINNA_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "cubic_bdp/extrapolation.hpp"
#include "cubic_bdp/polynomials.hpp"
#include "cubic_bdp/processes.hpp"
#include "cubic_bdp/quadrature.hpp"
#include "cubic_bdp/special_functions.hpp"

namespace cubic_bdp {

/// E_l(z, w) = sum_n (-1)^n w^{3n+l} z^n / (3n+l)!.
/// For l <= 2 this is sigma_l(zeta w) / zeta^l; l = 3 is (1 - sigma_0(zeta w)) / z,
/// the kernel with the removable singularity at z = 0 already divided out.
/// The value does not depend on which cube root zeta of z is used.
inline complex entire_kernel(int l, complex z, double w) {
  if (l < 0 || l > 3) {
    throw std::domain_error("entire_kernel: l must be in 0..3");
  }
  if (w < 0.0) {
    throw std::domain_error("entire_kernel: w must be non-negative");
  }
  const double w3 = w * w * w;
  if (std::abs(z) * w3 <= 64.0) {
    complex term = 1.0;
    for (int k = 1; k <= l; ++k) {
      term *= w / static_cast<double>(k);
    }
    complex sum = term;
    const complex step = -z * w3;
    for (int n = 0; n < 200; ++n) {
      const double k = 3.0 * n + l;
      term *= step / ((k + 1.0) * (k + 2.0) * (k + 3.0));
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) {
        break;
      }
    }
    return sum;
  }
  const complex zeta = principal_cbrt(z);
  if (l == 3) {
    return (1.0 - sigma_closed(0, zeta * w)) / z;
  }
  complex v = sigma_closed(l, zeta * w);
  for (int k = 0; k < l; ++k) {
    v /= zeta;
  }
  return v;
}

namespace detail {

inline constexpr double kThird = 1.0 / 3.0;

template <class Kernel>
complex kernel_integral(double a, double b, Kernel&& k, double tol) {
  return integrate(SingularWeight(a, b), std::forward<Kernel>(k), tol).value;
}

inline complex kernel_integral_l(double a, double b, int l, complex z, double tol) {
  return kernel_integral(
      a, b, [&](const QuadraturePoint& p) { return entire_kernel(l, z, p.theta_hat); }, tol);
}

}  // namespace detail

/// cal F(z; c, mu0) = sum_n F_n(z; c, mu0) as the two-integral formula
///   3/B(c+1/3, 2/3) { 3c int u^{3c-1}(1-u^3)^{-2/3} E_1 du + mu0 int u^{3c}(1-u^3)^{-1/3} E_3 du }.
inline complex cal_F(complex z, double c, double mu0, double tol = kDefaultQuadTol) {
  if (!(c > 0.0) || !(mu0 >= 0.0)) {
    throw std::domain_error("cal_F: need c > 0 and mu0 >= 0");
  }
  const double pref = 3.0 / beta_fn(c + detail::kThird, 2.0 * detail::kThird);
  complex v = 3.0 * c * detail::kernel_integral_l(3.0 * c - 1.0, -2.0 / 3.0, 1, z, tol);
  if (mu0 != 0.0) {
    v += mu0 * detail::kernel_integral_l(3.0 * c, -1.0 / 3.0, 3, z, tol);
  }
  return pref * v;
}

/// 1 - (z/mu0) cal F(z; c, mu0) by the sigma_0-only formula (valid for c > 1).
inline complex cal_F_complement(complex z, double c, double mu0, double tol = kDefaultQuadTol) {
  if (!(c > 1.0) || !(mu0 > 0.0)) {
    throw std::domain_error("cal_F_complement: need c > 1 and mu0 > 0");
  }
  const double k = (3.0 * c - 1.0) * 9.0 * c * c;
  const complex i1 = detail::kernel_integral_l(3.0 * c - 3.0, -1.0 / 3.0, 0, z, tol);
  const complex i2 = detail::kernel_integral_l(3.0 * c, -1.0 / 3.0, 0, z, tol);
  return 3.0 / beta_fn(c - 2.0 / 3.0, 2.0 / 3.0) * (k / mu0) * i1 +
         (mu0 - k) / mu0 * 3.0 / beta_fn(c + 1.0 / 3.0, 2.0 / 3.0) * i2;
}

/// cal G(z; c, mu0) = sum_n G_n(z; c, mu0):
///   3/B(c+2/3, 1/3) { 3c(3c+1) int u^{3c-1}(1-u^3)^{-1/3} E_2 du + mu0 int u^{3c+1}(1-u^3)^{-2/3} E_3 du }.
inline complex cal_G(complex z, double c, double mu0, double tol = kDefaultQuadTol) {
  if (!(c > 0.0) || !(mu0 >= 0.0)) {
    throw std::domain_error("cal_G: need c > 0 and mu0 >= 0");
  }
  const double pref = 3.0 / beta_fn(c + 2.0 * detail::kThird, detail::kThird);
  complex v = 3.0 * c * (3.0 * c + 1.0) *
              detail::kernel_integral_l(3.0 * c - 1.0, -1.0 / 3.0, 2, z, tol);
  if (mu0 != 0.0) {
    v += mu0 * detail::kernel_integral_l(3.0 * c + 1.0, -2.0 / 3.0, 3, z, tol);
  }
  return pref * v;
}

/// 1 - (z/mu0) cal G(z; c, mu0) by the sigma_0-only formula (valid for c > 1/3).
inline complex cal_G_complement(complex z, double c, double mu0, double tol = kDefaultQuadTol) {
  if (!(c > 1.0 / 3.0) || !(mu0 > 0.0)) {
    throw std::domain_error("cal_G_complement: need c > 1/3 and mu0 > 0");
  }
  const double k = 9.0 * c * c * (3.0 * c + 1.0);
  const complex i1 = detail::kernel_integral_l(3.0 * c - 2.0, -2.0 / 3.0, 0, z, tol);
  const complex i2 = detail::kernel_integral_l(3.0 * c + 1.0, -2.0 / 3.0, 0, z, tol);
  return 3.0 / beta_fn(c - 1.0 / 3.0, 1.0 / 3.0) * (k / mu0) * i1 +
         3.0 / beta_fn(c + 2.0 / 3.0, 1.0 / 3.0) * (mu0 - k) / mu0 * i2;
}

/// Elements of the modified Nevanlinna matrix: A~, B~, C, D.
enum class Element { A, B, C, D };

inline constexpr std::array<Element, 4> kAllElements{Element::A, Element::B, Element::C,
                                                     Element::D};

inline std::string_view to_string(Element e) {
  switch (e) {
    case Element::A:
      return "A";
    case Element::B:
      return "B";
    case Element::C:
      return "C";
    case Element::D:
      return "D";
  }
  return "?";
}

inline Element element_from_string(std::string_view s) {
  if (s == "A" || s == "a") return Element::A;
  if (s == "B" || s == "b") return Element::B;
  if (s == "C" || s == "c") return Element::C;
  if (s == "D" || s == "d") return Element::D;
  throw std::invalid_argument("unknown matrix element '" + std::string(s) + "'");
}

/// One matrix element as prefactor * z^{z_factor} * int f(u) E_l(z, u) du.
struct EntireKernelSpec {
  int l;
  SingularWeight weight;
  double prefactor;
  bool z_factor;
};

struct MatrixValues {
  complex A, B, C, D;

  complex determinant() const { return A * D - B * C; }
  complex operator[](Element e) const {
    switch (e) {
      case Element::A:
        return A;
      case Element::B:
        return B;
      case Element::C:
        return C;
      case Element::D:
        return D;
    }
    return 0.0;
  }
};

/// alpha from -1/alpha = sum_{n>=1} 1/(mu_n pi_n), tail extrapolated in powers
/// of N^{-1/3} (the terms decay like n^{-5/3} for P1 and n^{-4/3} for P2).
inline Extrapolated<double> alpha_series(Family family, double c) {
  const RateSchedule s(family, c, 0.0);
  constexpr long kN0 = 512;
  constexpr int kLevels = 11;
  std::vector<double> partial;
  double pi = 1.0;
  double sum = 0.0;
  long next = kN0;
  for (long n = 1; static_cast<int>(partial.size()) < kLevels; ++n) {
    pi *= s.lambda(n - 1) / s.mu(n);
    sum += 1.0 / (s.mu(n) * pi);
    if (n == next) {
      partial.push_back(sum);
      next *= 2;
    }
  }
  auto r = extrapolate_power_tail(partial, third_power_exponents(kLevels - 1));
  const double inv = r.value;  // -1/alpha
  return {-1.0 / inv, r.error / (inv * inv)};
}

/// Modified Nevanlinna matrix (A~, B~, C, D) of P1 or P2 for a given c > 0.
/// Every element is an integral of f(u) E_l(z, u) against a weight
/// u^a (1-u^3)^b; D carries an extra factor z.
class NevanlinnaMatrix {
 public:
  NevanlinnaMatrix(Family family, double c) : family_(family), c_(c) {
    if (!(c > 0.0)) {
      throw std::domain_error("NevanlinnaMatrix: c must be positive");
    }
    const double t = detail::kThird;
    if (family == Family::P1) {
      const double bc = 3.0 / beta_fn(c + 1.0, t);
      const double bf = 3.0 / beta_fn(c + t, 2.0 * t);
      specs_ = {EntireKernelSpec{2, SingularWeight(3 * c, -t), bc / (3 * c + 1), false},
                EntireKernelSpec{0, SingularWeight(3 * c - 1, -2 * t), -bc * 3 * c / (3 * c + 1), false},
                EntireKernelSpec{0, SingularWeight(3 * c, -t), bf, false},
                EntireKernelSpec{1, SingularWeight(3 * c - 1, -2 * t), bf * 3 * c, true}};
    } else {
      const double bc = 3.0 / beta_fn(c + 1.0, 2.0 * t);
      const double bg = 3.0 / beta_fn(c + 2.0 * t, t);
      specs_ = {EntireKernelSpec{2, SingularWeight(3 * c, 0.0), bc / (3 * c + 2), false},
                EntireKernelSpec{0, SingularWeight(3 * c - 1, -t), -bc * 3 * c / (3 * c + 2), false},
                EntireKernelSpec{1, SingularWeight(3 * c, 0.0), bg * (3 * c + 1), false},
                EntireKernelSpec{2, SingularWeight(3 * c - 1, -t), bg * 3 * c * (3 * c + 1), true}};
    }
    alpha_ = alpha_series(family, c).value;
  }

  Family family() const { return family_; }
  double c() const { return c_; }
  double alpha() const { return alpha_; }

  const EntireKernelSpec& spec(Element e) const { return specs_[static_cast<std::size_t>(e)]; }

  /// Direct quadrature of the element; intended for moderate |z| (up to a few
  /// hundred). Use log_evaluate beyond that.
  complex evaluate(Element e, complex z, double tol = kDefaultQuadTol) const {
    const auto& s = spec(e);
    const complex integral = integrate(
        s.weight, [&](const QuadraturePoint& p) { return entire_kernel(s.l, z, p.theta_hat); }, tol)
                                 .value;
    return s.prefactor * (s.z_factor ? z : complex(1.0)) * integral;
  }

  MatrixValues evaluate_all(complex z, double tol = kDefaultQuadTol) const {
    return {evaluate(Element::A, z, tol), evaluate(Element::B, z, tol),
            evaluate(Element::C, z, tol), evaluate(Element::D, z, tol)};
  }

  complex determinant(complex z) const { return evaluate_all(z).determinant(); }

  /// Plain matrix: A = A~ + C/alpha, B = B~ + D/alpha.
  MatrixValues to_plain(const MatrixValues& m) const {
    return {m.A + m.C / alpha_, m.B + m.D / alpha_, m.C, m.D};
  }

  /// Natural log of the element value (complex: log|N| + i arg N), evaluated
  /// through sigma_l = (1/3) sum_m kappa_{l,m} exp(omega_m w). Each exponential
  /// with Re(omega_m zeta) > 0 is rewritten as exp(s theta0) int f exp(-s theta(u)) du,
  /// so nothing overflows for |z| up to ~1e15.
  complex log_evaluate(Element e, complex z, double tol = 1e-10) const {
    if (z == complex(0.0)) {
      throw std::domain_error("log_evaluate: z must be non-zero");
    }
    const auto& s = spec(e);
    return std::log(std::abs(s.prefactor)) + (s.prefactor < 0 ? complex(0.0, M_PI) : complex(0.0)) +
           (s.z_factor ? std::log(z) : complex(0.0)) + log_kernel_integral(s, z, tol);
  }

  /// log int f(u) sigma_l(zeta theta_hat(u)) / zeta^l du, with zeta = |z|^{1/3} e^{i arg(z)/3}.
  static complex log_kernel_integral(const EntireKernelSpec& s, complex z, double tol = 1e-10) {
    const complex zeta = principal_cbrt(z);
    const double t0 = theta0();
    const double log_mass = std::log(s.weight.total_mass());
    std::array<int, 3> order{0, 1, 2};
    std::array<complex, 3> rate{};
    for (int m = 0; m < 3; ++m) {
      rate[m] = detail::omega(m) * zeta;
    }
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return rate[x].real() > rate[y].real(); });
    std::array<complex, 3> logs{};
    std::array<bool, 3> used{false, false, false};
    double lead = -std::numeric_limits<double>::infinity();
    for (int m : order) {
      const complex r = rate[m];
      const double bound = std::max(r.real(), 0.0) * t0 + log_mass;
      if (bound < lead - 45.0) {
        continue;
      }
      complex value;
      if (r.real() > 0.0) {
        const complex integral =
            integrate(s.weight, [&](const QuadraturePoint& p) { return std::exp(-r * p.theta); }, tol)
                .value;
        value = r * t0 + std::log(integral);
      } else {
        const complex integral =
            integrate(s.weight, [&](const QuadraturePoint& p) { return std::exp(r * p.theta_hat); },
                      tol)
                .value;
        value = std::log(integral);
      }
      logs[m] = value;
      used[m] = true;
      lead = std::max(lead, value.real());
    }
    complex sum = 0.0;
    for (int m = 0; m < 3; ++m) {
      if (used[m]) {
        sum += detail::sigma_weight(s.l, m) * std::exp(logs[m] - lead);
      }
    }
    complex result = lead + std::log(sum / 3.0);
    result -= static_cast<double>(s.l) * std::log(zeta);
    return result;
  }

  /// Taylor coefficients xi_0 .. xi_{n_max} in sign/log form:
  ///   xi_n = prefactor (-1)^n / (3n+l)! int f theta_hat^{3n+l} du,
  /// shifted by one index for D.
  std::vector<ScaledCoefficient> coefficients(Element e, long n_max) const {
    if (n_max < 0 || n_max > 5000) {
      throw std::domain_error("coefficients: n_max must lie in [0, 5000]");
    }
    const auto& s = spec(e);
    const long count = s.z_factor ? n_max : n_max + 1;
    std::vector<double> powers;
    powers.reserve(static_cast<std::size_t>(std::max(count, 0L)));
    for (long n = 0; n < count; ++n) {
      powers.push_back(3.0 * static_cast<double>(n) + s.l);
    }
    const auto moments = theta_hat_moments(s.weight, powers);
    std::vector<ScaledCoefficient> out;
    out.reserve(static_cast<std::size_t>(n_max + 1));
    if (s.z_factor) {
      out.push_back(ScaledCoefficient{0, -std::numeric_limits<double>::infinity()});
    }
    const double lp = std::log(std::abs(s.prefactor));
    const int ps = s.prefactor < 0 ? -1 : 1;
    for (long n = 0; n < count; ++n) {
      const auto& m = moments[static_cast<std::size_t>(n)];
      ScaledCoefficient xi;
      xi.sign = ps * (n % 2 == 0 ? 1 : -1);
      xi.log_magnitude = lp - std::lgamma(powers[static_cast<std::size_t>(n)] + 1.0) + m.log_magnitude;
      out.push_back(xi);
    }
    return out;
  }

 private:
  Family family_;
  double c_;
  double alpha_ = 0.0;
  std::array<EntireKernelSpec, 4> specs_{
      EntireKernelSpec{0, SingularWeight(0, 0), 0, false}, EntireKernelSpec{0, SingularWeight(0, 0), 0, false},
      EntireKernelSpec{0, SingularWeight(0, 0), 0, false}, EntireKernelSpec{0, SingularWeight(0, 0), 0, false}};
};

inline double alpha(Family family, double c) { return alpha_series(family, c).value; }

/// sum_n xi_n z^n from sign/log coefficients (terms below 1e-18 of the running
/// maximum are dropped).
inline complex coefficient_series_value(const std::vector<ScaledCoefficient>& xi, complex z) {
  complex sum = 0.0;
  complex zn = 1.0;
  const double lz = z == complex(0.0) ? -std::numeric_limits<double>::infinity() : std::log(std::abs(z));
  const double arg = std::arg(z);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < xi.size(); ++n) {
    if (xi[n].sign == 0) {
      continue;
    }
    if (n == 0) {
      sum += static_cast<double>(xi[n].sign) * std::exp(xi[n].log_magnitude);
      peak = std::max(peak, xi[n].log_magnitude);
      continue;
    }
    const double lm = xi[n].log_magnitude + static_cast<double>(n) * lz;
    peak = std::max(peak, lm);
    if (lm < peak - 41.5) {
      if (lm < peak - 60.0) {
        break;
      }
      continue;
    }
    zn = std::polar(1.0, static_cast<double>(n) * arg);
    sum += static_cast<double>(xi[n].sign) * std::exp(lm) * zn;
  }
  return sum;
}

/// B~_1 and D_1 after integration by parts (c > 1/3):
///   B~_1 = -3/B(c+1, 1/3) * 3c(3c-1)/(3c+1) int u^{3c-2} sigma_1(zeta th^)/zeta du
///   D_1  =  3/B(c+1/3, 2/3) * 3c(3c-1) int u^{3c-2} zeta sigma_2(zeta th^) du
inline std::pair<complex, complex> simplified_elements(double c, complex z,
                                                       double tol = kDefaultQuadTol) {
  if (!(c > 1.0 / 3.0)) {
    throw std::domain_error("simplified_elements: requires c > 1/3");
  }
  const double k = 3.0 * c * (3.0 * c - 1.0);
  const complex b = -3.0 / beta_fn(c + 1.0, 1.0 / 3.0) * k / (3.0 * c + 1.0) *
                    detail::kernel_integral_l(3.0 * c - 2.0, 0.0, 1, z, tol);
  const complex d = 3.0 / beta_fn(c + 1.0 / 3.0, 2.0 / 3.0) * k * z *
                    detail::kernel_integral_l(3.0 * c - 2.0, 0.0, 2, z, tol);
  return {b, d};
}

/// The modified matrix assembled from the generating functions:
///   P1: A~ = G(c+1/3, l0)/l0 - G(c+4/3, l1)/l1,  B~ = -1 + z G(c+1/3, l0)/l0,
///       C  = 1 - z F(c+1, m1)/m1,                D  = z F(c, 0)
///   P2: the same with F and G exchanged and shifts c+2/3, c+5/3.
/// l0, l1, m1 are lambda_0, lambda_1, mu_1 of the pure process at c.
inline complex assembled_element(Family family, double c, Element e, complex z,
                                 double tol = kDefaultQuadTol) {
  const RateSchedule s(family, c);
  const double l0 = s.lambda(0), l1 = s.lambda(1), m1 = s.mu(1);
  const bool p1 = family == Family::P1;
  auto dual = [&](double cc, double m0) { return p1 ? cal_G(z, cc, m0, tol) : cal_F(z, cc, m0, tol); };
  auto same = [&](double cc, double m0) { return p1 ? cal_F(z, cc, m0, tol) : cal_G(z, cc, m0, tol); };
  const double shift0 = p1 ? 1.0 / 3.0 : 2.0 / 3.0;
  switch (e) {
    case Element::A:
      return dual(c + shift0, l0) / l0 - dual(c + shift0 + 1.0, l1) / l1;
    case Element::B:
      return -1.0 + z / l0 * dual(c + shift0, l0);
    case Element::C:
      return 1.0 - z / m1 * same(c + 1.0, m1);
    case Element::D:
      return z * same(c, 0.0);
  }
  return 0.0;
}

}  // namespace cubic_bdp

#endif  // CUBIC_BDP_NEVANLINNA_HPP
