#ifndef CUBIC_BDP_TRUNCATED_SERIES_HPP
#define CUBIC_BDP_TRUNCATED_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace cubic_bdp {

/// c_0 + c_1 t + ... + c_N t^N, with every operation truncated at t^N.
template <class T>
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::size_t order) : coeffs_(order + 1, T(0)) {}

  TruncatedSeries(std::size_t order, std::initializer_list<T> leading) : TruncatedSeries(order) {
    std::size_t i = 0;
    for (const T& v : leading) {
      if (i > order) {
        break;
      }
      coeffs_[i++] = v;
    }
  }

  std::size_t order() const { return coeffs_.size() - 1; }

  const T& operator[](std::size_t i) const { return coeffs_.at(i); }
  T& operator[](std::size_t i) { return coeffs_.at(i); }

  const std::vector<T>& coefficients() const { return coeffs_; }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    require_same_order(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      coeffs_[i] += o.coeffs_[i];
    }
    return *this;
  }

  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    require_same_order(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      coeffs_[i] -= o.coeffs_[i];
    }
    return *this;
  }

  template <class S>
  TruncatedSeries& operator*=(const S& k) {
    for (auto& v : coeffs_) {
      v *= k;
    }
    return *this;
  }

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }

  template <class S>
  friend TruncatedSeries scale(TruncatedSeries a, const S& k) {
    return a *= k;
  }

  /// Cauchy product truncated at the common order.
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    a.require_same_order(b);
    const std::size_t n = a.order();
    TruncatedSeries out(n);
    for (std::size_t i = 0; i <= n; ++i) {
      if (a.coeffs_[i] == T(0)) {
        continue;
      }
      for (std::size_t j = 0; i + j <= n; ++j) {
        out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return out;
  }

  /// Term-wise derivative; the result has order N - 1.
  TruncatedSeries differentiate() const {
    if (order() < 1) {
      throw std::invalid_argument("TruncatedSeries::differentiate: order must be >= 1");
    }
    TruncatedSeries out(order() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
      out.coeffs_[i - 1] = static_cast<double>(i) * coeffs_[i];
    }
    return out;
  }

  /// t^k times the series, truncated at the same order.
  TruncatedSeries shifted(std::size_t k) const {
    TruncatedSeries out(order());
    for (std::size_t i = 0; i + k <= order(); ++i) {
      out.coeffs_[i + k] = coeffs_[i];
    }
    return out;
  }

  /// t d/dt, which keeps the order.
  TruncatedSeries euler_derivative() const {
    TruncatedSeries out(order());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      out.coeffs_[i] = static_cast<double>(i) * coeffs_[i];
    }
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : coeffs_) {
      m = std::max(m, static_cast<double>(std::abs(v)));
    }
    return m;
  }

 private:
  void require_same_order(const TruncatedSeries& o) const {
    if (o.order() != order()) {
      throw std::invalid_argument("TruncatedSeries: truncation orders differ");
    }
  }

  std::vector<T> coeffs_;
};

}  // namespace cubic_bdp

#endif  // CUBIC_BDP_TRUNCATED_SERIES_HPP
