#ifndef CUBIC_BDP_ASYMPTOTICS_HPP
#define CUBIC_BDP_ASYMPTOTICS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cubic_bdp/nevanlinna.hpp"
#include "cubic_bdp/parallel.hpp"
#include "cubic_bdp/quadrature.hpp"
#include "cubic_bdp/special_functions.hpp"

namespace cubic_bdp {

struct GrowthReport {
  double order_estimate = 0.0;
  double type_estimate = 0.0;
  std::vector<std::pair<double, double>> indicator_samples;  // (phi, h(phi))
};

namespace detail {

struct TailSample {
  double n;
  double log_abs;
};

inline std::vector<TailSample> tail_window(const std::vector<ScaledCoefficient>& xi) {
  if (xi.size() < 500) {
    throw std::domain_error("growth estimate: need at least 500 coefficients");
  }
  const std::size_t last = xi.size() - 1;
  std::vector<TailSample> out;
  for (std::size_t n = last / 2; n <= last; ++n) {
    if (xi[n].sign != 0 && std::isfinite(xi[n].log_magnitude)) {
      out.push_back({static_cast<double>(n), xi[n].log_magnitude});
    }
  }
  if (out.size() < 10) {
    throw std::domain_error("growth estimate: coefficients vanish on the tail window");
  }
  return out;
}

}  // namespace detail

/// Raw limsup proxy: max over n in [N/2, N] of n ln n / |ln|xi_n||.
/// Converges like 1/ln N, so it is only a rough indication.
inline double order_proxy(const std::vector<ScaledCoefficient>& xi) {
  double best = 0.0;
  for (const auto& s : detail::tail_window(xi)) {
    if (s.log_abs != 0.0) {
      best = std::max(best, s.n * std::log(s.n) / std::abs(s.log_abs));
    }
  }
  return best;
}

/// Order from a least-squares fit of -ln|xi_n| = n ln n / rho + b n + c ln n + d
/// over the tail window, which absorbs the Stirling corrections that make the
/// raw proxy converge slowly.
inline double order_estimate(const std::vector<ScaledCoefficient>& xi) {
  const auto tail = detail::tail_window(xi);
  const auto rows = static_cast<Eigen::Index>(tail.size());
  Eigen::MatrixXd a(rows, 4);
  Eigen::VectorXd y(rows);
  const double scale = tail.back().n;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double n = tail[static_cast<std::size_t>(i)].n;
    a(i, 0) = n * std::log(n) / scale;
    a(i, 1) = n / scale;
    a(i, 2) = std::log(n);
    a(i, 3) = 1.0;
    y(i) = -tail[static_cast<std::size_t>(i)].log_abs / scale;
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  if (!(coef(0) > 0.0)) {
    throw std::domain_error("order_estimate: coefficients do not decay super-exponentially");
  }
  return 1.0 / coef(0);
}

/// (1/(e rho)) max over the tail of n |xi_n|^{rho/n}.
inline double type_estimate(const std::vector<ScaledCoefficient>& xi, double rho) {
  if (!(rho > 0.0)) {
    throw std::domain_error("type_estimate: rho must be positive");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : detail::tail_window(xi)) {
    best = std::max(best, std::log(s.n) + rho * s.log_abs / s.n);
  }
  return std::exp(best) / (std::numbers::e * rho);
}

/// theta0 cos((phi - pi)/3).
inline double indicator_reference(double phi) {
  if (phi < 0.0 || phi > 2.0 * std::numbers::pi) {
    throw std::domain_error("indicator_reference: phi must lie in [0, 2 pi]");
  }
  return theta0() * std::cos((phi - std::numbers::pi) / 3.0);
}

struct IndicatorEstimate {
  double phi = 0.0;
  double estimate = 0.0;  // h from h_r = h + b ln(rho)/rho + c/rho (3+ rungs), else raw
  double raw = 0.0;       // h_r at the largest r
  std::vector<double> rungs;  // windowed ln|N| / r^{1/3} per ladder entry
  bool trend_ok = true;       // successive rung changes do not grow
};

/// Period in r^{1/3} of the beat between two exponentials of equal growth.
inline double indicator_beat_period() { return 2.0 * std::numbers::pi / (std::sqrt(3.0) * theta0()); }

inline constexpr int kIndicatorWindow = 16;

/// h_r = ln|N(r e^{i phi})| / r^{1/3} for each r in the ladder. At each rung the
/// maximum is taken over one beat period of r^{1/3}, so zeros of N near the
/// sampled ray (on the real axis, for instance) do not spoil the estimate.
/// h_r carries a slowly decaying ln(r)/r^{1/3} term from the algebraic prefactor
/// of the dominant exponential; the ladder fit removes it.
inline IndicatorEstimate indicator_estimate(const NevanlinnaMatrix& m, Element e, double phi,
                                            const std::vector<double>& r_ladder) {
  if (phi < 0.0 || phi > 2.0 * std::numbers::pi) {
    throw std::domain_error("indicator_estimate: phi must lie in [0, 2 pi]");
  }
  if (r_ladder.empty() || r_ladder.back() > 1e12 || !(r_ladder.front() > 0.0) ||
      !std::is_sorted(r_ladder.begin(), r_ladder.end())) {
    throw std::domain_error("indicator_estimate: ladder must be increasing, positive and <= 1e12");
  }
  IndicatorEstimate out;
  out.phi = phi;
  const double step = indicator_beat_period() / kIndicatorWindow;
  for (double r : r_ladder) {
    const double rho0 = std::cbrt(r);
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < kIndicatorWindow; ++k) {
      // the window sits just below r so that the largest rung never exceeds it
      const double rho = rho0 - k * step;
      if (!(rho > 0.0)) {
        break;
      }
      const complex z = std::polar(rho * rho * rho, phi);
      best = std::max(best, m.log_evaluate(e, z).real() / rho);
    }
    out.rungs.push_back(best);
  }
  out.raw = out.rungs.back();
  out.estimate = out.raw;
  for (std::size_t i = 2; i < out.rungs.size(); ++i) {
    const double d1 = std::abs(out.rungs[i - 1] - out.rungs[i - 2]);
    const double d2 = std::abs(out.rungs[i] - out.rungs[i - 1]);
    if (d2 > d1 + 1e-6) {
      out.trend_ok = false;
    }
  }
  if (out.rungs.size() >= 3) {
    const auto n = static_cast<Eigen::Index>(out.rungs.size());
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double rho = std::cbrt(r_ladder[static_cast<std::size_t>(i)]);
      a(i, 0) = 1.0;
      a(i, 1) = std::log(rho) / rho;
      a(i, 2) = 1.0 / rho;
      y(i) = out.rungs[static_cast<std::size_t>(i)];
    }
    out.estimate = a.colPivHouseholderQr().solve(y)(0);
  }
  return out;
}

/// I(t) = int u^a (1-u^3)^b exp(-t e^{i phi} theta(u)) du, phi in (-pi/2, pi/2).
inline complex lemma1_integral(const SingularWeight& w, double t, double phi,
                               double tol = 1e-10) {
  if (!(std::abs(phi) < std::numbers::pi / 2.0) || !(t > 0.0)) {
    throw std::domain_error("lemma1_integral: need t > 0 and |phi| < pi/2");
  }
  const complex s = std::polar(t, phi);
  return integrate(w, [&](const QuadraturePoint& p) { return std::exp(-s * p.theta); }, tol).value;
}

/// Leading term Gamma(a+1) t^{-(a+1)} e^{-i(a+1) phi}.
inline complex lemma1_leading(double a, double t, double phi) {
  return gamma_fn(a + 1.0) * std::pow(t, -(a + 1.0)) * std::polar(1.0, -(a + 1.0) * phi);
}

inline std::vector<double> default_phi_grid(int points = 24) {
  std::vector<double> phis;
  for (int k = 0; k <= points; ++k) {
    phis.push_back(2.0 * std::numbers::pi * k / points);
  }
  return phis;
}

inline std::vector<double> default_r_ladder() { return {1e6, 1e7, 1e8, 1e9}; }

/// Order (fitted), type at rho = 1/3, and the indicator on the given grid.
inline GrowthReport growth_report(const NevanlinnaMatrix& m, Element e, long n_max,
                                  const std::vector<double>& phis,
                                  const std::vector<double>& r_ladder) {
  GrowthReport g;
  const auto xi = m.coefficients(e, n_max);
  g.order_estimate = order_estimate(xi);
  g.type_estimate = type_estimate(xi, 1.0 / 3.0);
  g.indicator_samples.resize(phis.size());
  parallel_for(phis.size(), [&](std::size_t i) {
    g.indicator_samples[i] = {phis[i], indicator_estimate(m, e, phis[i], r_ladder).estimate};
  });
  return g;
}

}  // namespace cubic_bdp

#endif  // CUBIC_BDP_ASYMPTOTICS_HPP
