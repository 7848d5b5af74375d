#ifndef CUBIC_BDP_QUADRATURE_HPP
#define CUBIC_BDP_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "cubic_bdp/special_functions.hpp"

namespace cubic_bdp {

class quadrature_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// f(u) = u^a (1 - u^3)^b with a > -1 and b >= -2/3 (integrable on [0, 1]).
struct SingularWeight {
  double a;
  double b;

  SingularWeight(double a_, double b_) : a(a_), b(b_) {
    if (!(a > -1.0) || !(b >= -2.0 / 3.0 - 1e-15)) {
      throw std::domain_error("SingularWeight: need a > -1 and b >= -2/3");
    }
  }

  /// log f at a node, with 1 - u^3 supplied separately for accuracy near u = 1.
  double log_value(double u, double one_minus_u3) const {
    double v = 0.0;
    if (a != 0.0) {
      v += a * std::log(u);
    }
    if (b != 0.0) {
      v += b * std::log(one_minus_u3);
    }
    return v;
  }

  /// int_0^1 f(u) du = B((a+1)/3, b+1) / 3.
  double total_mass() const { return beta_fn((a + 1.0) / 3.0, b + 1.0) / 3.0; }
};

/// One abscissa of the tanh-sinh rule on [0, 1] with the quantities every
/// integrand in this library needs precomputed.
struct QuadraturePoint {
  double u;
  double one_minus_u;
  double one_minus_u3;
  double theta;
  double theta_hat;
  double jacobian;  // du/dx
};

/// Nested tanh-sinh abscissae u(x) = (1 + tanh(pi/2 sinh x)) / 2 on x in
/// [-kRange, kRange]. Level L uses step 2^-L; level 0 holds the integer
/// abscissae and level L > 0 only the new odd multiples of 2^-L.
class TanhSinhNodes {
 public:
  static constexpr int kMaxLevel = 10;
  static constexpr double kRange = 6.0;

  static const TanhSinhNodes& instance() {
    static const TanhSinhNodes nodes;
    return nodes;
  }

  const std::vector<QuadraturePoint>& level(int l) const { return levels_.at(static_cast<std::size_t>(l)); }

  static double step(int l) { return std::ldexp(1.0, -l); }

  /// Smallest abscissa; the rule ignores [0, u_min).
  double u_min() const { return u_min_; }

 private:
  TanhSinhNodes() {
    levels_.resize(kMaxLevel + 1);
    for (int l = 0; l <= kMaxLevel; ++l) {
      const double h = step(l);
      const long kmax = static_cast<long>(std::floor(kRange / h));
      for (long k = -kmax; k <= kmax; ++k) {
        if (l > 0 && (k % 2 == 0)) {
          continue;
        }
        levels_[static_cast<std::size_t>(l)].push_back(make_point(static_cast<double>(k) * h));
      }
    }
    u_min_ = make_point(-kRange).u;
  }

  static QuadraturePoint make_point(double x) {
    const double s = 0.5 * std::numbers::pi * std::sinh(x);
    QuadraturePoint p{};
    // u = 1/(1+e^{-2s}), 1-u = 1/(1+e^{2s}); each computed without cancellation.
    p.u = 1.0 / (1.0 + std::exp(-2.0 * s));
    p.one_minus_u = 1.0 / (1.0 + std::exp(2.0 * s));
    p.jacobian = std::numbers::pi * std::cosh(x) * p.u * p.one_minus_u;
    p.one_minus_u3 = p.one_minus_u * (1.0 + p.u + p.u * p.u);
    if (p.u <= 0.8) {
      p.theta = theta_series(p.u);
      p.theta_hat = theta0() - p.theta;
    } else {
      p.theta_hat = theta_hat_from_complement(p.one_minus_u3);
      p.theta = theta0() - p.theta_hat;
    }
    return p;
  }

  std::vector<std::vector<QuadraturePoint>> levels_;
  double u_min_ = 0.0;
};

template <class T>
struct QuadratureResult {
  T value;
  double error;  // successive-level difference
  double l1;     // approximation of int |f g|
  int level;
};

inline constexpr double kDefaultQuadTol = 1e-12;
inline constexpr double kMinQuadTol = 1e-13;

/// int_0^1 u^a (1-u^3)^b g(p) du, where g receives the QuadraturePoint at u.
/// Converged when the change between successive levels is below
/// tol * int |f g|, which stays meaningful when the integral cancels.
template <class G>
auto integrate(const SingularWeight& w, G&& g, double tol = kDefaultQuadTol,
               int max_level = TanhSinhNodes::kMaxLevel) {
  using T = std::decay_t<decltype(g(std::declval<const QuadraturePoint&>()))>;
  if (!(tol >= kMinQuadTol)) {
    tol = kMinQuadTol;
  }
  const auto& nodes = TanhSinhNodes::instance();
  T raw = T(0);
  double raw_abs = 0.0;
  T previous = T(0);
  bool have_previous = false;
  constexpr int kMinLevel = 3;

  // Mass on [0, u_min): f ~ u^a there and g ~ g(u_min).
  T tail = T(0);
  for (int l = 0; l <= max_level; ++l) {
    for (const QuadraturePoint& p : nodes.level(l)) {
      const double fw = std::exp(w.log_value(p.u, p.one_minus_u3)) * p.jacobian;
      if (fw == 0.0) {
        continue;
      }
      const T gv = g(p);
      raw += fw * gv;
      raw_abs += fw * std::abs(gv);
      if (l == 0 && p.u == nodes.u_min()) {
        tail = gv * (std::pow(p.u, w.a + 1.0) / (w.a + 1.0));
      }
    }
    const double h = TanhSinhNodes::step(l);
    const T current = h * raw + tail;
    const double l1 = h * raw_abs;
    if (l >= kMinLevel && have_previous) {
      const double diff = std::abs(current - previous);
      if (diff <= tol * l1 || diff == 0.0) {
        return QuadratureResult<T>{current, diff, l1, l};
      }
      if (l == max_level) {
        throw quadrature_error("integrate: no convergence (difference " + std::to_string(diff) +
                               ", scale " + std::to_string(l1) + ")");
      }
    }
    previous = current;
    have_previous = true;
  }
  throw quadrature_error("integrate: no convergence");
}

template <class G>
auto integrate_value(const SingularWeight& w, G&& g, double tol = kDefaultQuadTol) {
  return integrate(w, std::forward<G>(g), tol).value;
}

/// Sign and natural-log magnitude of a real number that may lie far outside
/// the double range.
struct ScaledCoefficient {
  int sign = 0;
  double log_magnitude = -std::numeric_limits<double>::infinity();

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }
};

/// I_m = int_0^1 f(u) theta_hat(u)^m du for every m in `powers`, in log form.
/// The integrand is handled as f (theta_hat/theta0)^m with log-sum-exp
/// accumulation, and log theta0^m is added back unless `scale_by_theta0` is
/// false (then the result is int f (theta_hat/theta0)^m du itself).
inline std::vector<ScaledCoefficient> theta_hat_moments(const SingularWeight& w,
                                                        const std::vector<double>& powers,
                                                        bool scale_by_theta0 = true,
                                                        double tol = 1e-10) {
  const auto& nodes = TanhSinhNodes::instance();
  const double lt0 = std::log(theta0());
  const std::size_t count = powers.size();
  // Running sums are kept as (shift, sum) with value = exp(shift) * sum.
  std::vector<double> shift(count, -std::numeric_limits<double>::infinity());
  std::vector<double> sum(count, 0.0);
  std::vector<double> previous(count, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> current(count, 0.0);
  std::vector<ScaledCoefficient> out(count);

  for (int l = 0; l <= TanhSinhNodes::kMaxLevel; ++l) {
    for (const QuadraturePoint& p : nodes.level(l)) {
      const double base = w.log_value(p.u, p.one_minus_u3) + std::log(p.jacobian);
      const double lr = std::log(p.theta_hat) - lt0;
      if (!std::isfinite(base) || !std::isfinite(lr)) {
        continue;
      }
      for (std::size_t i = 0; i < count; ++i) {
        const double term = base + powers[i] * lr;
        if (term > shift[i]) {
          sum[i] = sum[i] * std::exp(shift[i] - term) + 1.0;
          shift[i] = term;
        } else {
          sum[i] += std::exp(term - shift[i]);
        }
      }
    }
    const double lh = std::log(TanhSinhNodes::step(l));
    bool all_converged = l >= 4;
    for (std::size_t i = 0; i < count; ++i) {
      current[i] = shift[i] + std::log(sum[i]) + lh;
      if (!(std::abs(current[i] - previous[i]) <= tol)) {
        all_converged = false;
      }
    }
    if (all_converged) {
      for (std::size_t i = 0; i < count; ++i) {
        out[i].sign = 1;
        out[i].log_magnitude = current[i] + (scale_by_theta0 ? powers[i] * lt0 : 0.0);
      }
      return out;
    }
    previous = current;
  }
  throw quadrature_error("theta_hat_moments: no convergence");
}

/// I_{l,n} = int_0^1 f(u) theta_hat(u)^{3n+l} du in sign/log form.
inline ScaledCoefficient coefficient_integral(const SingularWeight& w, int l, long n,
                                              bool scale_by_theta0 = true) {
  if (n < 0 || n > 5000 || l < 0 || l > 3) {
    throw std::domain_error("coefficient_integral: need 0 <= n <= 5000 and 0 <= l <= 3");
  }
  return theta_hat_moments(w, {3.0 * static_cast<double>(n) + l}, scale_by_theta0).front();
}

}  // namespace cubic_bdp

#endif  // CUBIC_BDP_QUADRATURE_HPP
