#ifndef CUBIC_BDP_PROCESSES_HPP
#define CUBIC_BDP_PROCESSES_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cubic_bdp/special_functions.hpp"

namespace cubic_bdp {

enum class Family { P1, P2 };

inline std::string_view to_string(Family f) { return f == Family::P1 ? "p1" : "p2"; }

inline Family family_from_string(std::string_view s) {
  if (s == "p1" || s == "P1") {
    return Family::P1;
  }
  if (s == "p2" || s == "P2") {
    return Family::P2;
  }
  throw std::invalid_argument("unknown process family '" + std::string(s) + "'");
}

/// Cubic birth and death rates with a free death rate mu0 at state 0.
///
///   P1: lambda_n = (3n+3c+1)^2 (3n+3c+2),  mu_n = (3n+3c-1)(3n+3c)^2   (n >= 1)
///   P2: lambda_n = (3n+3c+1)(3n+3c+2)^2,   mu_n = (3n+3c)^2 (3n+3c+1)   (n >= 1)
///
/// mu0 = 0 gives the pure process.
class RateSchedule {
 public:
  RateSchedule(Family family, double c, double mu0 = 0.0) : family_(family), c_(c), mu0_(mu0) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw std::domain_error("RateSchedule: c must be positive and finite");
    }
    if (!(mu0 >= 0.0) || !std::isfinite(mu0)) {
      throw std::domain_error("RateSchedule: mu0 must be non-negative and finite");
    }
  }

  Family family() const { return family_; }
  double c() const { return c_; }
  double mu0() const { return mu0_; }
  bool is_pure() const { return mu0_ == 0.0; }

  double lambda(long n) const {
    const double k = 3.0 * static_cast<double>(n) + 3.0 * c_;
    if (family_ == Family::P1) {
      return (k + 1.0) * (k + 1.0) * (k + 2.0);
    }
    return (k + 1.0) * (k + 2.0) * (k + 2.0);
  }

  double mu(long n) const {
    if (n == 0) {
      return mu0_;
    }
    const double k = 3.0 * static_cast<double>(n) + 3.0 * c_;
    if (family_ == Family::P1) {
      return (k - 1.0) * k * k;
    }
    return k * k * (k + 1.0);
  }

  /// The value mu_0 would take if the n >= 1 formula were extended to n = 0.
  double mu_formula_at_zero() const {
    const double k = 3.0 * c_;
    return family_ == Family::P1 ? (k - 1.0) * k * k : k * k * (k + 1.0);
  }

  bool operator==(const RateSchedule&) const = default;

 private:
  Family family_;
  double c_;
  double mu0_;
};

inline double lambda_n(const RateSchedule& s, long n) { return s.lambda(n); }
inline double mu_n(const RateSchedule& s, long n) { return s.mu(n); }

/// log pi_n from the Pochhammer closed forms (independent of mu0).
///   P1: pi_n = ((c+1/3)_n / (c+1)_n)^2
///   P2: pi_n = (c+1/3)_n ((c+2/3)_n)^2 / (((c+1)_n)^2 (c+4/3)_n)
inline double log_pi_n(const RateSchedule& s, long n) {
  if (n < 0) {
    throw std::domain_error("pi_n: n must be non-negative");
  }
  if (n == 0) {
    return 0.0;
  }
  const double c = s.c();
  const double m = static_cast<double>(n);
  if (s.family() == Family::P1) {
    return 2.0 * (log_pochhammer(c + 1.0 / 3.0, m) - log_pochhammer(c + 1.0, m));
  }
  return log_pochhammer(c + 1.0 / 3.0, m) + 2.0 * log_pochhammer(c + 2.0 / 3.0, m) -
         2.0 * log_pochhammer(c + 1.0, m) - log_pochhammer(c + 4.0 / 3.0, m);
}

inline double pi_n(const RateSchedule& s, long n) { return std::exp(log_pi_n(s, n)); }

/// pi_0 .. pi_N by the product lambda_0...lambda_{n-1} / (mu_1...mu_n), accumulated in logs.
inline std::vector<double> pi_sequence_by_product(const RateSchedule& s, long N) {
  std::vector<double> out(static_cast<std::size_t>(N + 1));
  double log_pi = 0.0;
  out[0] = 1.0;
  for (long n = 1; n <= N; ++n) {
    log_pi += std::log(s.lambda(n - 1)) - std::log(s.mu(n));
    out[static_cast<std::size_t>(n)] = std::exp(log_pi);
  }
  return out;
}

struct StieltjesReport {
  double sum_pi;     // sum_{n=0}^{N} pi_n
  double sum_recip;  // sum_{n=1}^{N} 1 / (lambda_n pi_n)
  double slope_pi;
  double slope_recip;
};

/// Partial sums of the two Stieltjes series and their log-log tail slopes,
/// fitted by least squares on n in [N/2, N].
inline StieltjesReport stieltjes_check(const RateSchedule& s, long N) {
  if (N < 100) {
    throw std::domain_error("stieltjes_check: N must be at least 100");
  }
  StieltjesReport r{1.0, 0.0, 0.0, 0.0};
  double sx = 0, sy1 = 0, sy2 = 0, sxx = 0, sxy1 = 0, sxy2 = 0;
  long count = 0;
  for (long n = 1; n <= N; ++n) {
    const double lp = log_pi_n(s, n);
    const double lr = -std::log(s.lambda(n)) - lp;
    r.sum_pi += std::exp(lp);
    r.sum_recip += std::exp(lr);
    if (2 * n >= N) {
      const double x = std::log(static_cast<double>(n));
      sx += x;
      sxx += x * x;
      sy1 += lp;
      sy2 += lr;
      sxy1 += x * lp;
      sxy2 += x * lr;
      ++count;
    }
  }
  const double cnt = static_cast<double>(count);
  const double denom = cnt * sxx - sx * sx;
  r.slope_pi = (cnt * sxy1 - sx * sy1) / denom;
  r.slope_recip = (cnt * sxy2 - sx * sy2) / denom;
  return r;
}

/// Karlin-McGregor dual: lambda~_n = mu_{n+1}, mu~_n = lambda_n.
/// P1 at c maps onto P2 at c + 1/3, and P2 at c onto P1 at c + 2/3, each with
/// mu~_0 = lambda_0.
inline RateSchedule kmg_dual(const RateSchedule& s) {
  if (!s.is_pure()) {
    throw std::domain_error("kmg_dual: only defined here for pure processes (mu0 = 0)");
  }
  if (s.family() == Family::P1) {
    return RateSchedule(Family::P2, s.c() + 1.0 / 3.0, s.lambda(0));
  }
  return RateSchedule(Family::P1, s.c() + 2.0 / 3.0, s.lambda(0));
}

}  // namespace cubic_bdp

#endif  // CUBIC_BDP_PROCESSES_HPP
