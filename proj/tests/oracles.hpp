#pragma once

// Independent reference computations shared by the test suites.

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

namespace oracle {

/// 2 pi int_0^R J_n(r)^2 r dr by adaptive Gauss-Kronrod on unit panels.
inline double squared_singular_value_quad(int n, double R) {
  auto f = [n](double r) {
    const double j = boost::math::cyl_bessel_j(n, r);
    return j * j * r;
  };
  const int panels = std::max(1, static_cast<int>(std::ceil(R)));
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = R * p / panels, b = R * (p + 1) / panels;
    s += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
  }
  return 2.0 * std::numbers::pi * s;
}

}  // namespace oracle
