#ifndef CUBIC_BDP_SPECTRAL_HPP
#define CUBIC_BDP_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cubic_bdp/extrapolation.hpp"
#include "cubic_bdp/nevanlinna.hpp"
#include "cubic_bdp/parallel.hpp"
#include "cubic_bdp/processes.hpp"

namespace cubic_bdp {

class spectral_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Support of an N-extremal measure: zeros of D, or zeros of B~ + tau D.
enum class ZeroMode { D, Combination };

struct MassPointResult {
  std::vector<double> points;      // increasing
  std::vector<double> unresolved;  // bracket midpoints where refinement stalled
};

/// Asymptotic spacing of consecutive x_k^{1/3}: 2 pi / (sqrt(3) theta0).
inline double mass_point_spacing() { return 2.0 * std::numbers::pi / (std::sqrt(3.0) * theta0()); }

namespace detail {

inline constexpr double kDirectLimit = 2e4;

/// A real number proportional to (B~ + tau D)(x) or D(x) with a positive,
/// x-dependent factor; only its sign and zeros matter.
inline double combo_sign_value(const NevanlinnaMatrix& m, ZeroMode mode, double tau, double x) {
  if (x <= kDirectLimit) {
    const double d = m.evaluate(Element::D, x).real();
    if (mode == ZeroMode::D) {
      return d;
    }
    return m.evaluate(Element::B, x).real() + tau * d;
  }
  const complex ld = m.log_evaluate(Element::D, x);
  if (mode == ZeroMode::D) {
    return std::cos(ld.imag());
  }
  const complex lb = m.log_evaluate(Element::B, x);
  const double shift = std::max(lb.real(), ld.real());
  return (std::exp(lb - shift)).real() + tau * (std::exp(ld - shift)).real();
}

}  // namespace detail

/// Zeros in (0, x_max] (at most max_count of them), bracketed on a grid uniform
/// in x^{1/3} with an eighth of the asymptotic spacing, then bisected to
/// relative width 1e-10. In D mode the trivial zero x = 0 is not listed.
inline MassPointResult find_mass_points(const NevanlinnaMatrix& m, ZeroMode mode, double tau,
                                        double x_max, std::size_t max_count = 0) {
  if (!(x_max > 0.0)) {
    throw std::domain_error("find_mass_points: x_max must be positive");
  }
  const double step = mass_point_spacing() / 8.0;
  const double top = std::cbrt(x_max);
  auto f = [&](double x) { return detail::combo_sign_value(m, mode, tau, x); };

  std::vector<double> grid;
  for (double r = step / 4.0; r < top; r += step) {
    grid.push_back(r);
  }
  grid.push_back(top);
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { values[i] = f(grid[i] * grid[i] * grid[i]); });

  std::vector<std::pair<double, double>> brackets;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if ((values[i - 1] < 0.0) != (values[i] < 0.0)) {
      brackets.push_back({grid[i - 1], grid[i]});
      if (max_count != 0 && brackets.size() == max_count) {
        break;
      }
    }
  }

  MassPointResult out;
  std::vector<std::optional<double>> roots(brackets.size());
  parallel_for(brackets.size(), [&](std::size_t i) {
    double lo = std::pow(brackets[i].first, 3.0);
    double hi = std::pow(brackets[i].second, 3.0);
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (!std::isfinite(fm)) {
        return;
      }
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    if (hi - lo <= 1e-10 * hi) {
      roots[i] = 0.5 * (lo + hi);
    }
  });
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (roots[i]) {
      out.points.push_back(*roots[i]);
    } else {
      out.unresolved.push_back(std::pow(0.5 * (brackets[i].first + brackets[i].second), 3.0));
    }
  }
  return out;
}

/// Points and weights of a discrete measure; weight_errors are the
/// extrapolation error estimates of the weights.
struct DiscreteMeasure {
  std::vector<double> points;
  std::vector<double> weights;
  std::vector<double> weight_errors;

  std::size_t size() const { return points.size(); }
  double total_mass() const {
    double s = 0.0;
    for (double w : weights) {
      s += w;
    }
    return s;
  }
};

namespace detail {

/// F_0(x) ... F_N(x) in extended precision (F_n(x) grows like exp(c x^{1/3})
/// before settling).
inline std::vector<long double> poly_values_ld(const RateSchedule& s, double x, long N) {
  std::vector<long double> f(static_cast<std::size_t>(N + 1));
  f[0] = 1.0L;
  if (N == 0) {
    return f;
  }
  const long double xl = x;
  f[1] = (static_cast<long double>(s.lambda(0)) + s.mu0() - xl) / s.mu(1);
  for (long n = 1; n < N; ++n) {
    const auto i = static_cast<std::size_t>(n);
    f[i + 1] = ((static_cast<long double>(s.lambda(n)) + s.mu(n) - xl) * f[i] -
                static_cast<long double>(s.lambda(n - 1)) * f[i - 1]) /
               s.mu(n + 1);
  }
  return f;
}

}  // namespace detail

struct WeightSeries {
  double weight;
  double error;
  long terms;
};

/// rho = 1 / sum_n F_n(x)^2 / pi_n. The summand decays like a power of n, so
/// partial sums at N_i = N_0 2^i are extrapolated in powers of N^{-1/3}; the
/// levels stop once the estimate is below tail_tol relative or at about 4e6
/// terms. The best estimate seen is kept.
inline WeightSeries weight_series(const RateSchedule& s, double x, double tail_tol = 1e-12) {
  if (!(tail_tol > 0.0)) {
    throw std::domain_error("weight_series: tail_tol must be positive");
  }
  const long n0 = std::max<long>(512, static_cast<long>(16.0 * std::cbrt(std::max(x, 1.0))));
  constexpr int kMaxLevels = 15;
  constexpr long kMaxTerms = 1L << 22;
  long double sum = 0.0L;
  long double prev = 1.0L, cur = 0.0L;
  long double pi = 1.0L;
  std::vector<double> partial;
  Extrapolated<double> best{0.0, std::numeric_limits<double>::infinity()};
  long next = n0;
  const long double xl = x;
  for (long n = 0;; ++n) {
    long double fn;
    if (n == 0) {
      fn = 1.0L;
    } else if (n == 1) {
      fn = (static_cast<long double>(s.lambda(0)) + s.mu0() - xl) / s.mu(1);
      pi = static_cast<long double>(s.lambda(0)) / s.mu(1);
    } else {
      fn = ((static_cast<long double>(s.lambda(n - 1)) + s.mu(n - 1) - xl) * cur -
            static_cast<long double>(s.lambda(n - 2)) * prev) /
           s.mu(n);
      pi *= static_cast<long double>(s.lambda(n - 1)) / s.mu(n);
    }
    if (n >= 1) {
      prev = cur;
    }
    cur = fn;
    sum += fn * fn / pi;
    if (!std::isfinite(static_cast<double>(sum))) {
      throw spectral_error("weight_series: overflow at x = " + std::to_string(x));
    }
    if (n + 1 == next) {
      partial.push_back(static_cast<double>(sum));
      next *= 2;
      if (partial.size() >= 4) {
        const auto e = extrapolate_power_tail(partial, third_power_exponents(partial.size() - 1));
        if (e.error <= best.error) {
          best = e;
        }
        if (e.error <= tail_tol * std::abs(e.value)) {
          break;
        }
      }
      if (static_cast<int>(partial.size()) == kMaxLevels || next > kMaxTerms) {
        break;
      }
    }
  }
  if (!(best.error <= 0.1 * std::abs(best.value)) || !(best.value > 0.0)) {
    throw spectral_error("weight_series: partial sums do not settle at x = " + std::to_string(x));
  }
  return {1.0 / best.value, best.error / (best.value * best.value), next / 2};
}

/// Weights for the given support points.
inline DiscreteMeasure masses(const std::vector<double>& points, const RateSchedule& s,
                              double tail_tol = 1e-12) {
  if (!std::is_sorted(points.begin(), points.end())) {
    throw std::domain_error("masses: points must be increasing");
  }
  DiscreteMeasure mu;
  mu.points = points;
  mu.weights.resize(points.size());
  mu.weight_errors.resize(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const auto w = weight_series(s, points[i], tail_tol);
    mu.weights[i] = w.weight;
    mu.weight_errors[i] = w.error;
  });
  return mu;
}

/// The N-extremal measure generated by D (tau = infinity, including x = 0)
/// or by B~ + tau D, on (0, x_max] or its first max_count points.
inline DiscreteMeasure n_extremal_measure(const NevanlinnaMatrix& m, ZeroMode mode, double tau,
                                          double x_max, std::size_t max_count = 0,
                                          double tail_tol = 1e-12) {
  auto found = find_mass_points(m, mode, tau, x_max, max_count);
  if (!found.unresolved.empty()) {
    throw spectral_error("n_extremal_measure: " + std::to_string(found.unresolved.size()) +
                         " unresolved brackets");
  }
  std::vector<double> pts;
  if (mode == ZeroMode::D) {
    pts.push_back(0.0);
  }
  pts.insert(pts.end(), found.points.begin(), found.points.end());
  return masses(pts, RateSchedule(m.family(), m.c()), tail_tol);
}

/// Weight at a zero x of B~ + tau D from the matrix alone:
///   rho = 1 / (D(x) (B~ + tau D)'(x)), and -1 / (B~(x) D'(x)) at zeros of D.
/// The derivative uses a complex step, Richardson-corrected.
inline double christoffel_weight(const NevanlinnaMatrix& m, ZeroMode mode, double tau, double x) {
  auto combo = [&](complex z) {
    if (mode == ZeroMode::D) {
      return m.evaluate(Element::D, z);
    }
    return m.evaluate(Element::B, z) + tau * m.evaluate(Element::D, z);
  };
  const double h = 1e-3 * std::pow(1.0 + x, 2.0 / 3.0);
  const double d1 = combo(complex(x, h)).imag() / h;
  const double d2 = combo(complex(x, h / 2.0)).imag() / (h / 2.0);
  const double deriv = (4.0 * d2 - d1) / 3.0;
  if (mode == ZeroMode::D) {
    return -1.0 / (m.evaluate(Element::B, x).real() * deriv);
  }
  return 1.0 / (m.evaluate(Element::D, x).real() * deriv);
}

/// Query for P_{m,n}(t).
struct TransitionQuery {
  long m;
  long n;
  double t;
};

/// P_{m,n}(t) = (1/pi_m) sum_k rho_k exp(-x_k t) F_m(x_k) F_n(x_k).
/// Throws when the last terms of the sum are not negligible (the measure
/// does not reach far enough for this t).
inline double transition_probability(const TransitionQuery& q, const DiscreteMeasure& mu,
                                     const RateSchedule& s) {
  if (q.m < 0 || q.n < 0 || !(q.t >= 0.0)) {
    throw std::domain_error("transition_probability: need m, n >= 0 and t >= 0");
  }
  const long top = std::max(q.m, q.n);
  long double sum = 0.0L;
  long double last = 0.0L;
  long double scale = 0.0L;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const auto f = detail::poly_values_ld(s, mu.points[k], top);
    const long double term = static_cast<long double>(mu.weights[k]) *
                             std::exp(-static_cast<long double>(mu.points[k]) * q.t) *
                             f[static_cast<std::size_t>(q.m)] * f[static_cast<std::size_t>(q.n)];
    sum += term;
    scale = std::max(scale, std::abs(term));
    last = std::abs(term);
  }
  const double pm = pi_n(s, q.m);
  if (mu.size() > 1 && last > 1e-14L * std::max<long double>(scale, pm)) {
    throw spectral_error("transition_probability: measure does not cover t = " +
                         std::to_string(q.t));
  }
  return static_cast<double>(sum / pm);
}

/// sum_n P_{m,n}(t), using sum_n F_n(x) = cal F(x; c, 0) (P1) or cal G (P2).
inline double row_sum(long m, double t, const DiscreteMeasure& mu, const RateSchedule& s) {
  long double sum = 0.0L;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const double x = mu.points[k];
    const complex g = s.family() == Family::P1 ? cal_F(x, s.c(), s.mu0()) : cal_G(x, s.c(), s.mu0());
    const auto f = detail::poly_values_ld(s, x, m);
    sum += static_cast<long double>(mu.weights[k]) * std::exp(-static_cast<long double>(x) * t) *
           f[static_cast<std::size_t>(m)] * g.real();
  }
  return static_cast<double>(sum / pi_n(s, m));
}

/// Row m of exp(t Q) for the generator truncated to states 0..truncN, by
/// uniformization with rate Lambda = max (lambda_k + mu_k). Poisson weights
/// are formed in log space.
struct GeneratorRow {
  std::vector<double> values;  // states 0..truncN
  double lost_mass;            // 1 - sum of the row: probability of leaving the truncation
  long iterations;
};

inline GeneratorRow generator_row(const RateSchedule& s, long m, double t, long truncN) {
  if (truncN < 1 || m < 0 || m > truncN || !(t >= 0.0)) {
    throw std::domain_error("generator_row: need 0 <= m <= truncN and t >= 0");
  }
  const auto size = static_cast<std::size_t>(truncN + 1);
  GeneratorRow out{std::vector<double>(size, 0.0), 0.0, 0};
  if (t == 0.0) {
    out.values[static_cast<std::size_t>(m)] = 1.0;
    return out;
  }
  std::vector<double> lam(size), mu(size);
  double rate = 0.0;
  for (std::size_t k = 0; k < size; ++k) {
    lam[k] = s.lambda(static_cast<long>(k));
    mu[k] = s.mu(static_cast<long>(k));
    rate = std::max(rate, lam[k] + mu[k]);
  }
  const double mean = rate * t;
  const double sd = std::sqrt(mean);
  const long kmax = static_cast<long>(std::ceil(mean + 12.0 * sd + 40.0));
  const long kmin = std::max(0L, static_cast<long>(std::floor(mean - 12.0 * sd - 40.0)));
  std::vector<double> v(size, 0.0), w(size, 0.0);
  v[static_cast<std::size_t>(m)] = 1.0;
  double collected = 0.0;
  for (long k = 0; k <= kmax; ++k) {
    if (k >= kmin) {
      const double lw = static_cast<double>(k) * std::log(mean) - mean - std::lgamma(k + 1.0);
      const double pk = std::exp(lw);
      collected += pk;
      for (std::size_t j = 0; j < size; ++j) {
        out.values[j] += pk * v[j];
      }
    }
    // v <- v P with P = I + Q / rate; mass pushed past truncN is dropped.
    for (std::size_t j = 0; j < size; ++j) {
      double acc = v[j] * (1.0 - (lam[j] + mu[j]) / rate);
      if (j > 0) {
        acc += v[j - 1] * lam[j - 1] / rate;
      }
      if (j + 1 < size) {
        acc += v[j + 1] * mu[j + 1] / rate;
      }
      w[j] = acc;
    }
    std::swap(v, w);
  }
  out.iterations = kmax + 1;
  double total = 0.0;
  for (double x : out.values) {
    total += x;
  }
  // what the Poisson window missed is not truncation loss
  out.lost_mass = std::max(0.0, collected - total);
  return out;
}

struct GeneratorCheck {
  double spectral;
  double generator;
  double difference;
  double lost_mass;
};

/// |spectral P_{m,n}(t) - (exp(t Q_truncN))_{m,n}|; refuses t where more than
/// 1e-8 of the mass leaves the truncated state space.
inline GeneratorCheck generator_cross_check(long m, long n, double t, long truncN,
                                            const RateSchedule& s, const DiscreteMeasure& mu) {
  if (truncN < 200) {
    throw std::domain_error("generator_cross_check: truncN must be at least 200");
  }
  if (n > truncN) {
    throw std::domain_error("generator_cross_check: n beyond the truncation");
  }
  const auto row = generator_row(s, m, t, truncN);
  if (row.lost_mass > 1e-8) {
    throw spectral_error("generator_cross_check: truncation loses " + std::to_string(row.lost_mass));
  }
  const double g = row.values[static_cast<std::size_t>(n)];
  const double p = transition_probability({m, n, t}, mu, s);
  return {p, g, std::abs(p - g), row.lost_mass};
}

/// dP_{m,n}/dt (five-point difference of the spectral sum) minus the right side
/// of the forward equation lambda_{n-1} P_{m,n-1} + mu_{n+1} P_{m,n+1} - (lambda_n + mu_n) P_{m,n}.
inline double kolmogorov_residual(long m, long n, double t, const DiscreteMeasure& mu,
                                  const RateSchedule& s, double h = 1e-5) {
  if (!(t > 2.0 * h)) {
    throw std::domain_error("kolmogorov_residual: need t > 2h");
  }
  auto p = [&](long j, double tt) { return transition_probability({m, j, tt}, mu, s); };
  const double deriv = (p(n, t - 2 * h) - 8 * p(n, t - h) + 8 * p(n, t + h) - p(n, t + 2 * h)) / (12 * h);
  double rhs = -(s.lambda(n) + s.mu(n)) * p(n, t) + s.mu(n + 1) * p(n + 1, t);
  if (n > 0) {
    rhs += s.lambda(n - 1) * p(n - 1, t);
  }
  return std::abs(deriv - rhs);
}

/// |P_{m,n}(t+u) - sum_j P_{m,j}(t) P_{j,n}(u)|, with the j-sum extrapolated
/// from cut-offs J_0 2^i (its tail decays like a power of J).
inline double chapman_kolmogorov_defect(long m, long n, double t, double u, const DiscreteMeasure& mu,
                                        const RateSchedule& s) {
  constexpr long kJ0 = 256;
  constexpr int kLevels = 7;
  const long jmax = kJ0 << (kLevels - 1);
  std::vector<std::vector<long double>> f(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) {
    f[k] = detail::poly_values_ld(s, mu.points[k], jmax);
  }
  const auto pis = pi_sequence_by_product(s, jmax);
  auto p_from = [&](long a, long b, double tt) {
    long double acc = 0.0L;
    for (std::size_t k = 0; k < mu.size(); ++k) {
      acc += static_cast<long double>(mu.weights[k]) * std::exp(-static_cast<long double>(mu.points[k]) * tt) *
             f[k][static_cast<std::size_t>(a)] * f[k][static_cast<std::size_t>(b)];
    }
    return static_cast<double>(acc / pis[static_cast<std::size_t>(a)]);
  };
  std::vector<double> partial;
  long double sum = 0.0L;
  long next = kJ0;
  for (long j = 0; j <= jmax; ++j) {
    sum += static_cast<long double>(p_from(m, j, t)) * p_from(j, n, u);
    if (j + 1 == next) {
      partial.push_back(static_cast<double>(sum));
      next *= 2;
    }
  }
  const auto e = extrapolate_power_tail(partial, third_power_exponents(partial.size() - 1));
  return std::abs(p_from(m, n, t + u) - e.value);
}

/// Least-squares fit of x_k^{1/3} = a k + b over the upper half of the points
/// (k counted from 1); a^3 is the coefficient in front of k^3.
struct CubicFit {
  double slope;
  double intercept;
  double cubic_coefficient;
  double reference;  // (2 pi / (sqrt(3) theta0))^3
};

inline CubicFit cubic_coefficient_fit(const std::vector<double>& positive_points) {
  if (positive_points.size() < 4) {
    throw std::domain_error("cubic_coefficient_fit: need at least 4 points");
  }
  const std::size_t first = positive_points.size() / 2;
  const auto rows = static_cast<Eigen::Index>(positive_points.size() - first);
  Eigen::MatrixXd a(rows, 2);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::size_t k = first + static_cast<std::size_t>(i);
    a(i, 0) = static_cast<double>(k + 1);
    a(i, 1) = 1.0;
    y(i) = std::cbrt(positive_points[k]);
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  const double ref = std::pow(mass_point_spacing(), 3.0);
  return {coef(0), coef(1), std::pow(coef(0), 3.0), ref};
}

}  // namespace cubic_bdp

#endif  // CUBIC_BDP_SPECTRAL_HPP
