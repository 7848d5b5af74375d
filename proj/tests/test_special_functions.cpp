#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cubic_bdp/special_functions.hpp"
#include "oracles.hpp"

using namespace cubic_bdp;

namespace {

double mixed(complex a, complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

const complex kOmega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

}  // namespace

TEST(GammaFn, SmallIntegers) {
  EXPECT_DOUBLE_EQ(gamma_fn(1.0), 1.0);
  EXPECT_NEAR(gamma_fn(4.0), 6.0, 6.0 * 1e-14);
}

TEST(GammaFn, OneThirdAgainstLanczosAndReflection) {
  const double g13 = gamma_fn(1.0 / 3.0);
  EXPECT_NEAR(g13, 2.678938534707747633, 1e-13 * g13);
  EXPECT_NEAR(g13, oracle::gamma(1.0 / 3.0), 1e-13 * g13);
  EXPECT_NEAR(g13 * gamma_fn(2.0 / 3.0), 2.0 * std::numbers::pi / std::sqrt(3.0), 1e-13);
}

TEST(GammaFn, MatchesLanczosOnGrid) {
  for (double x = 0.05; x < 30.0; x *= 1.37) {
    EXPECT_NEAR(gamma_fn(x), oracle::gamma(x), 1e-13 * oracle::gamma(x)) << x;
  }
}

TEST(GammaFn, RejectsNonPositive) {
  EXPECT_THROW(gamma_fn(0.0), std::domain_error);
  EXPECT_THROW(gamma_fn(-1.5), std::domain_error);
}

TEST(BetaFn, Examples) {
  EXPECT_NEAR(beta_fn(1.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(beta_fn(2.0, 3.0), 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(beta_fn(1.0 / 3.0, 1.0 / 3.0), 3.0 * oracle::theta0_by_substitution(), 1e-12 * 5.3);
  EXPECT_THROW(beta_fn(0.0, 1.0), std::domain_error);
}

TEST(Pochhammer, Examples) {
  EXPECT_EQ(pochhammer(4.0 / 3.0, 0), 1.0);
  EXPECT_DOUBLE_EQ(pochhammer(4.0 / 3.0, 1), 4.0 / 3.0);
  EXPECT_NEAR(pochhammer(1.0 / 3.0, 3), 28.0 / 27.0, 1e-15);
  EXPECT_NEAR(std::exp(log_pochhammer(1.0 / 3.0, 3.0)), 28.0 / 27.0, 1e-14);
}

TEST(Sigma, InitialValues) {
  EXPECT_EQ(sigma(0, 0.0), complex(1.0));
  EXPECT_EQ(sigma(1, 0.0), complex(0.0));
  EXPECT_EQ(sigma(2, 0.0), complex(0.0));
}

TEST(Sigma, ClosedFormAtOne) {
  const double ref = (std::exp(-1.0) + 2.0 * std::cos(std::sqrt(3.0) / 2.0) * std::exp(0.5)) / 3.0;
  EXPECT_NEAR(sigma(0, 1.0).real(), ref, 1e-15);
  EXPECT_NEAR(sigma_closed(0, 1.0).real(), ref, 1e-15);
}

TEST(Sigma, SeriesAgreesWithClosedForm) {
  for (double r : {0.01, 0.5, 2.0, 5.0, 12.0, 20.0}) {
    for (int k = 0; k < 24; ++k) {
      const complex u = std::polar(r, 2.0 * std::numbers::pi * k / 24.0);
      for (int l = 0; l < 3; ++l) {
        EXPECT_LE(mixed(sigma_series(l, u), sigma_closed(l, u)), 1e-10) << l << " " << u;
        const auto ref = oracle::sigma(l, oracle::cld(u.real(), u.imag()));
        EXPECT_LE(mixed(sigma(l, u), complex(double(ref.real()), double(ref.imag()))), 1e-12);
      }
    }
  }
}

TEST(Sigma, DerivativeRelations) {
  const double h = 1e-3;
  auto d = [&](int l, complex u) {
    return (-sigma(l, u + 2.0 * h) + 8.0 * sigma(l, u + h) - 8.0 * sigma(l, u - h) + sigma(l, u - 2.0 * h)) /
           (12.0 * h);
  };
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    EXPECT_LE(mixed(d(1, x), sigma(0, x)), 1e-7);
    EXPECT_LE(mixed(d(2, x), sigma(1, x)), 1e-7);
    EXPECT_LE(mixed(d(0, x), -sigma(2, x)), 1e-7);
  }
  const double c = (sigma(1, 0.7 + 1e-5) - sigma(1, 0.7 - 1e-5)).real() / 2e-5;
  EXPECT_NEAR(c, sigma(0, 0.7).real(), 1e-8);
}

TEST(Sigma, ThirdOrderEquationOnSeriesCoefficients) {
  // sigma_l = sum a_k u^k with a_{k+3} (k+1)(k+2)(k+3) = -a_k
  for (int l = 0; l < 3; ++l) {
    std::vector<double> a(40, 0.0);
    a[static_cast<std::size_t>(l)] = 1.0 / std::tgamma(l + 1.0);
    for (std::size_t k = static_cast<std::size_t>(l); k + 3 < a.size(); k += 3) {
      a[k + 3] = -a[k] / ((k + 1.0) * (k + 2.0) * (k + 3.0));
    }
    const complex u(0.8, -0.3);
    complex s = 0.0;
    for (std::size_t k = a.size(); k-- > 0;) {
      s = s * u + a[k];
    }
    EXPECT_LE(std::abs(s - sigma(l, u)), 1e-14);
  }
}

TEST(Sigma, Homogeneity) {
  for (complex u : {complex(1.0, 0.5), complex(-3.0, 2.0), complex(7.0, -1.0)}) {
    for (int l = 0; l < 3; ++l) {
      EXPECT_LE(mixed(sigma(l, kOmega * u), std::pow(kOmega, l) * sigma(l, u)), 1e-12);
    }
  }
}

TEST(Sigma, RejectsBadIndex) { EXPECT_THROW(sigma(3, 1.0), std::domain_error); }

TEST(Theta, Theta0MatchesGammaFormulaAndQuadrature) {
  const double g = oracle::gamma(1.0 / 3.0);
  const double ref = g * g * g / (2.0 * std::numbers::pi * std::sqrt(3.0));
  EXPECT_NEAR(theta0(), ref, 1e-13 * ref);
  EXPECT_NEAR(theta0(), oracle::theta0_by_substitution(), 1e-13 * ref);
  EXPECT_NEAR(theta0(), 1.76664, 1e-5);
}

TEST(Theta, EndpointsAndSum) {
  EXPECT_EQ(theta(0.0), 0.0);
  EXPECT_EQ(theta_hat(1.0), 0.0);
  for (double t = 0.0; t <= 1.0; t += 0.05) {
    EXPECT_NEAR(theta(t) + theta_hat(t), theta0(), 1e-14);
  }
}

TEST(Theta, AgreesWithGaussLegendre) {
  const auto gl = oracle::gauss_legendre(60);
  for (double t : {0.1, 0.3, 0.5, 0.7, 0.85}) {
    double s = 0.0;
    for (const auto& [x, w] : gl) {
      const double u = t * x;
      s += t * w * std::pow(1.0 - u * u * u, -2.0 / 3.0);
    }
    EXPECT_NEAR(theta(t), s, 1e-13) << t;
  }
}

TEST(Theta, HatMatchesSubstitutedIntegralNearOne) {
  // theta_hat(t) = int_t^1 (1-u^3)^{-2/3} du, with u = 1 - v^3 on v in [0, (1-t)^{1/3}]
  const auto gl = oracle::gauss_legendre(60);
  for (double t : {0.9, 0.99, 0.999999}) {
    const double top = std::cbrt(1.0 - t);
    double s = 0.0;
    for (const auto& [x, w] : gl) {
      const double v = top * x;
      const double u = 1.0 - v * v * v;
      s += top * w * 3.0 * std::pow(1.0 + u + u * u, -2.0 / 3.0);
    }
    EXPECT_NEAR(theta_hat(t), s, 1e-13 * s) << t;
  }
}

TEST(Theta, Bounds) {
  for (double t = 0.1; t < 0.95; t += 0.1) {
    const double r = theta_hat(t) / theta0();
    EXPECT_LE(1.0 - t, r);
    EXPECT_LE(r, 1.0);
  }
}

TEST(Theta, HatDecreasingAndConcave) {
  double prev = theta_hat(0.0);
  double prev_slope = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double t = k / 200.0;
    const double v = theta_hat(t);
    const double slope = v - prev;
    EXPECT_LT(v, prev);
    if (k > 1) {
      EXPECT_LE(slope, prev_slope + 1e-15);
    }
    prev = v;
    prev_slope = slope;
  }
}

TEST(Theta, Domain) {
  EXPECT_THROW(theta(-0.1), std::domain_error);
  EXPECT_THROW(theta_hat(1.1), std::domain_error);
  EXPECT_THROW(theta_diff(0.2, 0.5), std::domain_error);
}

TEST(Theta, Difference) {
  EXPECT_EQ(theta_diff(0.4, 0.4), 0.0);
  EXPECT_NEAR(theta_diff(1.0, 0.0), theta0(), 1e-15);
  EXPECT_NEAR(theta_diff(0.8, 0.3), theta(0.8) - theta(0.3), 1e-15);
  EXPECT_GE(theta_diff(0.9, 0.1), 0.0);
}
