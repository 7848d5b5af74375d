#include <gtest/gtest.h>

#include <cmath>

#include "cubic_bdp/quadrature.hpp"
#include "oracles.hpp"

using namespace cubic_bdp;

namespace {

double one(const QuadraturePoint&) { return 1.0; }

/// Beta(p, q) from the Lanczos oracle.
double beta_oracle(double p, double q) { return oracle::gamma(p) * oracle::gamma(q) / oracle::gamma(p + q); }

}  // namespace

TEST(Integrate, Examples) {
  EXPECT_NEAR(integrate_value(SingularWeight(3.0, -1.0 / 3.0), one), beta_oracle(4.0 / 3.0, 2.0 / 3.0) / 3.0,
              1e-12);
  EXPECT_NEAR(integrate_value(SingularWeight(0.0, -2.0 / 3.0), one), oracle::theta0_by_substitution(), 1e-12);
  EXPECT_NEAR(integrate_value(SingularWeight(1.0, 0.0), one), 0.5, 1e-14);
}

TEST(Integrate, BetaReductionGrid) {
  for (double a : {-0.9, -0.5, 0.0, 0.3, 1.0, 2.5, 7.0}) {
    for (double b : {-2.0 / 3.0, -1.0 / 3.0, 0.0, 0.5, 2.0}) {
      const double ref = beta_oracle((a + 1.0) / 3.0, b + 1.0) / 3.0;
      EXPECT_NEAR(integrate_value(SingularWeight(a, b), one), ref, 1e-11 * ref) << a << " " << b;
      EXPECT_NEAR(SingularWeight(a, b).total_mass(), ref, 1e-12 * ref);
    }
  }
}

TEST(Integrate, AgainstGaussLegendreForSmoothIntegrand) {
  const auto gl = oracle::gauss_legendre(40);
  double ref = 0.0;
  for (const auto& [u, w] : gl) {
    ref += w * u * u * std::cos(3.0 * u);
  }
  const double v = integrate_value(SingularWeight(2.0, 0.0), [](const QuadraturePoint& p) { return std::cos(3.0 * p.u); });
  EXPECT_NEAR(v, ref, 1e-13);
}

TEST(Integrate, ComplexIntegrandAndErrorEstimate) {
  const auto r = integrate(SingularWeight(0.5, -1.0 / 3.0), [](const QuadraturePoint& p) {
    return std::exp(complex(0.0, 4.0) * p.theta_hat);
  });
  const auto coarse = integrate(SingularWeight(0.5, -1.0 / 3.0),
                                [](const QuadraturePoint& p) { return std::exp(complex(0.0, 4.0) * p.theta_hat); },
                                1e-6);
  EXPECT_LE(std::abs(r.value - coarse.value), std::max(coarse.error * 10.0, 1e-12));
  EXPECT_LE(r.error, 1e-12 * r.l1 + 1e-300);
}

TEST(Integrate, NodesCarryTheta) {
  integrate(SingularWeight(0.0, 0.0), [](const QuadraturePoint& p) {
    EXPECT_NEAR(p.theta + p.theta_hat, theta0(), 1e-14);
    return 1.0;
  });
}

TEST(Integrate, Deterministic) {
  auto g = [](const QuadraturePoint& p) { return std::sin(10.0 * p.u) * p.theta_hat; };
  const double a = integrate_value(SingularWeight(0.2, -2.0 / 3.0), g);
  const double b = integrate_value(SingularWeight(0.2, -2.0 / 3.0), g);
  EXPECT_EQ(a, b);
}

TEST(SingularWeight, Validation) {
  EXPECT_THROW(SingularWeight(-1.0, 0.0), std::domain_error);
  EXPECT_THROW(SingularWeight(0.0, -0.9), std::domain_error);
}

TEST(CoefficientIntegral, TrivialCases) {
  const auto c0 = coefficient_integral(SingularWeight(0.0, 0.0), 0, 0);
  EXPECT_EQ(c0.sign, 1);
  EXPECT_NEAR(c0.value(), 1.0, 1e-13);
}

TEST(CoefficientIntegral, MatchesDirectQuadrature) {
  const SingularWeight w(0.0, 0.0);
  const double direct = integrate_value(w, [](const QuadraturePoint& p) { return std::pow(p.theta_hat, 3.0); });
  EXPECT_NEAR(coefficient_integral(w, 0, 1).value(), direct, 1e-11 * direct);
  const SingularWeight v(2.0, -1.0 / 3.0);
  for (int l = 0; l < 3; ++l) {
    for (long n : {2L, 5L, 9L}) {
      const double k = 3.0 * n + l;
      const double d = integrate_value(v, [&](const QuadraturePoint& p) { return std::pow(p.theta_hat, k); });
      EXPECT_NEAR(coefficient_integral(v, l, n).value(), d, 1e-9 * d);
    }
  }
}

TEST(CoefficientIntegral, BoundsAndMonotonicity) {
  // theta_hat is concave with theta_hat(1) = 0, so theta0 (1-u) <= theta_hat <= theta0; b < 0 gives (1-u^3)^b >= 1
  const double a = 0.5, b = -1.0 / 3.0;
  const SingularWeight w(a, b);
  const double lt0 = std::log(theta0());
  for (int l = 0; l < 3; ++l) {
    double prev = coefficient_integral(w, l, 0).log_magnitude;
    for (long n = 0; n <= 100; ++n) {
      const double k = 3.0 * n + l;
      const double li = coefficient_integral(w, l, n).log_magnitude;
      {
        const double lower = k * lt0 + std::lgamma(a + 1.0) + std::lgamma(k + 1.0) - std::lgamma(a + k + 2.0);
        const double upper = k * lt0 + std::log(w.total_mass());
        EXPECT_GE(li, lower - 1e-9) << l << " " << n;
        EXPECT_LE(li, upper + 1e-9) << l << " " << n;
      }
      if (n > 0) {
        EXPECT_LE(li, prev + 3.0 * lt0 + 1e-12);
      }
      prev = li;
    }
  }
}

TEST(CoefficientIntegral, ReachesLargeIndex) {
  const auto c = coefficient_integral(SingularWeight(1.0, -2.0 / 3.0), 2, 5000);
  EXPECT_EQ(c.sign, 1);
  EXPECT_TRUE(std::isfinite(c.log_magnitude));
  EXPECT_THROW(coefficient_integral(SingularWeight(1.0, 0.0), 0, 5001), std::domain_error);
}
