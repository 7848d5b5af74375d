#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cubic_bdp/asymptotics.hpp"
#include "oracles.hpp"

using namespace cubic_bdp;

namespace {

/// xi_n = base^{k n} / (k n)! in log form.
std::vector<ScaledCoefficient> model(double base, int k, long count) {
  std::vector<ScaledCoefficient> out;
  for (long n = 0; n < count; ++n) {
    const double m = static_cast<double>(k * n);
    out.push_back({1, m * std::log(base) - std::lgamma(m + 1.0)});
  }
  return out;
}

}  // namespace

TEST(Order, SyntheticSeries) {
  EXPECT_NEAR(order_estimate(model(1.0, 3, 2000)), 1.0 / 3.0, 0.01 / 3.0);
  EXPECT_NEAR(order_estimate(model(1.0, 1, 2000)), 1.0, 0.01);
  EXPECT_NEAR(order_proxy(model(1.0, 3, 2000)), 1.0 / 3.0, 0.1);
}

TEST(Order, NeedsEnoughCoefficients) {
  EXPECT_THROW(order_estimate(model(1.0, 3, 100)), std::domain_error);
  std::vector<ScaledCoefficient> zeros(1000);
  EXPECT_THROW(order_estimate(zeros), std::domain_error);
}

TEST(Type, SyntheticSeries) {
  EXPECT_NEAR(type_estimate(model(theta0(), 3, 2000), 1.0 / 3.0), theta0(), 0.02 * theta0());
  EXPECT_NEAR(type_estimate(model(1.0, 3, 2000), 1.0 / 3.0), 1.0, 0.02);
  EXPECT_THROW(type_estimate(model(1.0, 3, 2000), 0.0), std::domain_error);
}

TEST(Growth, OrderAndTypeOfAllElements) {
  for (Family f : {Family::P1, Family::P2}) {
    const NevanlinnaMatrix m(f, 1.0);
    for (Element e : kAllElements) {
      const auto xi = m.coefficients(e, 2000);
      const double rho = order_estimate(xi);
      EXPECT_GE(rho, 0.33);
      EXPECT_LE(rho, 0.337);
      const double sigma = type_estimate(xi, 1.0 / 3.0);
      EXPECT_GE(sigma, 0.98 * theta0());
      EXPECT_LE(sigma, 1.02 * theta0());
    }
  }
}

TEST(Indicator, Reference) {
  EXPECT_NEAR(indicator_reference(std::numbers::pi), theta0(), 1e-15);
  EXPECT_NEAR(indicator_reference(std::numbers::pi / 2), theta0() * std::sqrt(3.0) / 2.0, 1e-15);
  double lowest = 1e9;
  for (double phi : default_phi_grid(240)) {
    lowest = std::min(lowest, indicator_reference(phi));
  }
  EXPECT_NEAR(lowest, theta0() / 2.0, 1e-15);
  EXPECT_NEAR(indicator_reference(0.0), theta0() / 2.0, 1e-15);
  EXPECT_THROW(indicator_reference(7.0), std::domain_error);
}

TEST(Indicator, DirectionsAndSymmetry) {
  const NevanlinnaMatrix m(Family::P1, 1.0);
  const auto ladder = default_r_ladder();
  const auto at_pi = indicator_estimate(m, Element::D, std::numbers::pi, ladder);
  EXPECT_NEAR(at_pi.estimate, theta0(), 0.02 * theta0());
  const auto at_0 = indicator_estimate(m, Element::C, 0.0, ladder);
  EXPECT_NEAR(at_0.estimate, theta0() / 2.0, 0.02 * theta0());
  for (double phi : {0.4, 1.2, 2.5}) {
    const double a = indicator_estimate(m, Element::A, phi, ladder).estimate;
    const double b = indicator_estimate(m, Element::A, 2.0 * std::numbers::pi - phi, ladder).estimate;
    EXPECT_NEAR(a, b, 1e-3);
  }
}

TEST(Indicator, LadderValidation) {
  const NevanlinnaMatrix m(Family::P1, 1.0);
  EXPECT_THROW(indicator_estimate(m, Element::D, 1.0, {1e8, 1e7}), std::domain_error);
  EXPECT_THROW(indicator_estimate(m, Element::D, 1.0, {1e13}), std::domain_error);
  EXPECT_THROW(indicator_estimate(m, Element::D, -0.1, {1e6}), std::domain_error);
}

TEST(Indicator, IndependentOfC) {
  const auto ladder = default_r_ladder();
  for (double phi : {0.0, 1.0, std::numbers::pi, 4.0}) {
    std::vector<double> h;
    for (double c : {0.2, 1.0, 2.5}) {
      h.push_back(indicator_estimate(NevanlinnaMatrix(Family::P2, c), Element::B, phi, ladder).estimate);
    }
    EXPECT_NEAR(h[0], h[1], 0.02 * theta0());
    EXPECT_NEAR(h[1], h[2], 0.02 * theta0());
  }
}

TEST(GrowthReport, CoversGrid) {
  const NevanlinnaMatrix m(Family::P2, 0.5);
  const auto g = growth_report(m, Element::C, 1000, default_phi_grid(8), default_r_ladder());
  ASSERT_EQ(g.indicator_samples.size(), 9u);
  EXPECT_EQ(g.indicator_samples.front().first, 0.0);
  EXPECT_NEAR(g.indicator_samples.back().first, 2.0 * std::numbers::pi, 1e-15);
  EXPECT_GT(g.order_estimate, 0.0);
}

TEST(LemmaOne, LeadingTermDecay) {
  for (double a : {0.0, 1.5}) {
    const SingularWeight w(a, -1.0 / 3.0);
    for (double phi : {0.0, 0.5, 1.0, -1.2}) {
      double last = 0.0;
      for (double t : {10.0, 100.0, 1000.0, 10000.0}) {
        const complex ratio = lemma1_integral(w, t, phi) / lemma1_leading(a, t, phi);
        last = std::abs(ratio - 1.0);
      }
      EXPECT_LE(last, 0.01) << a << " " << phi;
    }
  }
  EXPECT_THROW(lemma1_integral(SingularWeight(0.0, 0.0), 10.0, 2.0), std::domain_error);
}
