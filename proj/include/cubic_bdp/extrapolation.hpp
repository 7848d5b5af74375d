#ifndef CUBIC_BDP_EXTRAPOLATION_HPP
#define CUBIC_BDP_EXTRAPOLATION_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace cubic_bdp {

/// Limit of partial sums S(N) whose tail has the form
///   S - S(N) = sum_k b_k N^{-e_k},
/// sampled at N_i = N_0 * 2^i. Used for the series sum pi_n, sum 1/(mu_n pi_n),
/// sum F_n(z) and sum p_n(x)^2, whose tails are power series in N^{-1/3}.
template <class T>
struct Extrapolated {
  T value;
  double error;  // |difference| between the two highest-order extrapolants
};

namespace detail {

template <class T>
T extrapolate_last(const std::vector<T>& partial, std::size_t first, std::size_t count,
                   const std::vector<double>& exponents) {
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix a(count, count);
  Vector rhs(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double ratio = std::ldexp(1.0, static_cast<int>(first + i));
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = T(1.0);
    for (std::size_t k = 1; k < count; ++k) {
      a(r, static_cast<Eigen::Index>(k)) = T(std::pow(ratio, -exponents[k - 1]));
    }
    rhs(r) = partial[first + i];
  }
  return a.partialPivLu().solve(rhs)(0);
}

}  // namespace detail

/// `partial[i]` is S(N_0 2^i). `exponents` are the tail exponents e_1 < e_2 < ...
/// Uses every sample; the error estimate compares against the extrapolant that
/// drops the first sample (and the last exponent).
template <class T>
Extrapolated<T> extrapolate_power_tail(const std::vector<T>& partial,
                                       const std::vector<double>& exponents) {
  const std::size_t m = partial.size();
  if (m < 3 || exponents.size() + 1 < m) {
    throw std::invalid_argument("extrapolate_power_tail: need >= 3 samples and enough exponents");
  }
  const T best = detail::extrapolate_last(partial, 0, m, exponents);
  const T prev = detail::extrapolate_last(partial, 1, m - 1, exponents);
  return {best, std::abs(best - prev)};
}

/// Exponents k/3, k = 1..count.
inline std::vector<double> third_power_exponents(std::size_t count) {
  std::vector<double> e(count);
  for (std::size_t k = 0; k < count; ++k) {
    e[k] = static_cast<double>(k + 1) / 3.0;
  }
  return e;
}

}  // namespace cubic_bdp

#endif  // CUBIC_BDP_EXTRAPOLATION_HPP
