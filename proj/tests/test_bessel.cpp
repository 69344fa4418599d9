#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include "farsplit/bessel.hpp"

using namespace farsplit;

// High-precision reference values.
struct RefValue {
  int n;
  double x;
  double j;
};
constexpr RefValue kReference[] = {
    {0, 1.0, 0.7651976865579665514},
    {5, 3.0, 0.04302843487704758392},
    {50, 100.0, -0.03869833972852538347},
    {10, 20.0, 0.1864825580239450832},
    {200, 500.0, 0.03120219815372784709},
    {7, 123.456, 0.02437112019090264055},
    {0, 500.0, -0.03410055688073199827},
    {120, 37.5, 4.543664279483505088e-48},
};

TEST(BesselJ, TrivialValues) {
  EXPECT_EQ(bessel_j(0, 0.0), 1.0);
  EXPECT_EQ(bessel_j(3, 0.0), 0.0);
  EXPECT_EQ(bessel_j(-3, 0.0), 0.0);
}

TEST(BesselJ, ReferenceValues) {
  for (const auto& r : kReference) EXPECT_NEAR(bessel_j(r.n, r.x), r.j, 1e-14) << r.n << " " << r.x;
  EXPECT_NEAR(bessel_j(120, 37.5) / 4.543664279483505088e-48, 1.0, 1e-10);
}

TEST(BesselJ, TableMatchesSingleValues) {
  const auto t = bessel_j_table(60, 42.0);
  for (int n = 0; n <= 60; ++n) EXPECT_NEAR(t[n], bessel_j(n, 42.0), 1e-15);
}

TEST(BesselJ, AgreesWithIndependentImplementation) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> nd(0, 200);
  std::uniform_real_distribution<double> xd(0.0, 500.0);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const int n = nd(rng);
    const double x = xd(rng);
    worst = std::max(worst, std::abs(bessel_j(n, x) - boost::math::cyl_bessel_j(n, x)));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(BesselJ, LargeArgumentsStayAccurate) {
  for (double x : {1000.0, 2500.0, 5000.0})
    for (int n : {0, 1, 17, 999, 1500, 4000})
      EXPECT_NEAR(bessel_j(n, x), boost::math::cyl_bessel_j(n, x), 1e-13) << n << " " << x;
}

TEST(BesselJ, NegativeOrderSymmetry) {
  for (int n = 0; n < 30; ++n)
    for (double x : {0.3, 2.0, 17.5, 80.0})
      EXPECT_EQ(bessel_j(-n, x), (n % 2 ? -1.0 : 1.0) * bessel_j(n, x));
}

TEST(BesselJ, Recurrence) {
  for (double x : {1e-3, 0.5, 3.0, 25.0, 150.0, 400.0})
    for (int n = 1; n < 250; ++n) {
      const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
      const double rhs = 2.0 * n / x * bessel_j(n, x);
      EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(std::abs(rhs), 1e-300) + 1e-15)
          << n << " " << x;
    }
}

TEST(BesselJ, SquareSumIsOne) {
  for (double x : {0.5, 7.0, 60.0, 333.0}) {
    const int K = static_cast<int>(std::ceil(x)) + 40;
    const auto t = bessel_j_table(K, x);
    double s = t[0] * t[0];
    for (int n = 1; n <= K; ++n) s += 2.0 * t[n] * t[n];
    EXPECT_NEAR(s, 1.0, 1e-10) << x;
  }
}

TEST(BesselJ, LandauBounds) {
  // |J_n(x)| <= 0.674886 n^(-1/3) and |J_n(x)| <= 0.785747 x^(-1/3); the
  // second implies sup_n |J_n(x)| < x^(-1/3).
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xd(1e-3, 400.0);
  for (int i = 0; i < 5000; ++i) {
    const double x = xd(rng);
    const auto t = bessel_j_table(200, x);
    const double bx = 0.785747 * std::pow(x, -1.0 / 3.0);
    for (int n = 0; n <= 200; ++n) {
      ASSERT_LE(std::abs(t[n]), bx) << n << " " << x;
      if (n > 0) ASSERT_LE(std::abs(t[n]), 0.674886 * std::pow(n, -1.0 / 3.0)) << n << " " << x;
    }
  }
}

TEST(BesselJ, SmallerConstantFailsInArgument) {
  // 0.6749 x^(-1/3) is exceeded near the turning point.
  EXPECT_GT(std::abs(bessel_j(36, 38.537875248029842)),
            0.6749 * std::pow(38.537875248029842, -1.0 / 3.0));
}

TEST(BesselJ, DomainErrors) {
  EXPECT_THROW(bessel_j(0, -1.0), std::domain_error);
  EXPECT_THROW(bessel_j(kMaxBesselOrder + 1, 1.0), std::domain_error);
  EXPECT_THROW(bessel_j(0, std::nan("")), std::domain_error);
}

TEST(BesselJPrime, Values) {
  for (double x : {0.2, 3.0, 44.0}) EXPECT_EQ(bessel_j_prime(0, x), -bessel_j(1, x));
  EXPECT_DOUBLE_EQ(bessel_j_prime(1, 0.0), 0.5);
  EXPECT_NEAR(bessel_j_prime(2, 1.0), 0.2102436158811325550, 1e-14);
  const double h = 1e-5;
  const double fd = (bessel_j(2, 1.0 + h) - bessel_j(2, 1.0 - h)) / (2 * h);
  EXPECT_NEAR(bessel_j_prime(2, 1.0), fd, 1e-6);
  EXPECT_NEAR(bessel_j_prime(-3, 5.0), -bessel_j_prime(3, 5.0), 1e-16);
}

TEST(BesselAsymptotic, OrderZeroIsClassicalForm) {
  const double R = 37.0;
  const auto a = bessel_asymptotic(0, R);
  EXPECT_NEAR(a.j, std::sqrt(2.0 / (std::numbers::pi * R)) * std::cos(R - 0.25 * std::numbers::pi),
              1e-15);
}

TEST(BesselAsymptotic, ErrorIsOrderOneOverR) {
  const auto a = bessel_asymptotic(50, 100.0);
  EXPECT_LE(std::abs(a.j - bessel_j(50, 100.0)), 1.0 / 100.0);
  EXPECT_LE(std::abs(a.jprime - bessel_j_prime(50, 100.0)), 1.0 / 100.0);

  // Error relative to the envelope sqrt(2/(pi R sin a)), maximized over a
  // window of arguments, drops by about 100 from R = 20 to R = 2000.
  auto err = [](int n, double R) {
    double e = 0.0;
    for (int s = 0; s < 40; ++s) {
      const double r = R + 0.25 * s;
      const double c = n / r;
      const double env = std::sqrt(2.0 / (std::numbers::pi * r * std::sqrt(1.0 - c * c)));
      e = std::max(e, std::abs(bessel_asymptotic(n, r).j - bessel_j(n, r)) / env);
    }
    return e;
  };
  const double ratio = err(10, 20.0) / err(10, 2000.0);
  EXPECT_GT(ratio, 50.0);
  EXPECT_LT(ratio, 200.0);
}

TEST(BesselAsymptotic, RejectsTurningPoint) {
  EXPECT_THROW(bessel_asymptotic(10, 10.0), std::invalid_argument);
  EXPECT_THROW(bessel_asymptotic(-1, 10.0), std::invalid_argument);
}
