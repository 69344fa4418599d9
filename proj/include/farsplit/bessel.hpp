#pragma once

// Integer-order Bessel functions of the first kind for real nonnegative
// arguments, evaluated by Miller's backward recurrence normalized with
// the Neumann identity J_0^2 + 2 sum_k J_k^2 = 1.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace farsplit {

inline constexpr int kMaxBesselOrder = 1'000'000;

namespace detail {

inline void check_bessel_args(int n, double x) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::domain_error("bessel_j: argument must be finite and >= 0, got " +
                            std::to_string(x));
  if (n > kMaxBesselOrder || n < -kMaxBesselOrder)
    throw std::domain_error("bessel_j: |n| exceeds " +
                            std::to_string(kMaxBesselOrder));
}

// Arguments at or below this use the ascending series.
inline constexpr double kSeriesLimit = 1.0;

inline double series_j(int n, double x) {
  // J_n(x) = (x/2)^n / n! * sum_m (-x^2/4)^m / (m! (n+1)_m)
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const double log_pref = n * std::log(0.5 * x) - std::lgamma(n + 1.0);
  if (log_pref < -745.0) return 0.0;
  const double q = -0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 60; ++m) {
    term *= q / (static_cast<double>(m) * (n + m));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return std::exp(log_pref) * sum;
}

// Starting order for the backward sweep. The margin grows like x^(1/3),
// the width of the turning-point layer of J_n(x) around n = x.
inline int miller_start(int nmax, double x) {
  const double top = std::max(static_cast<double>(nmax), std::ceil(x));
  const double margin = std::max(40.0, std::ceil(12.0 * std::cbrt(x)));
  return static_cast<int>(top + margin);
}

// Backward recurrence from the start order down to 0. Values for orders
// lo..hi are written to out[0..hi-lo]; everything is normalized at the end.
inline void miller_sweep(int lo, int hi, double x, double* out) {
  constexpr double kBig = 1e100;
  constexpr double kSmall = 1e-100;
  const int start = miller_start(hi, x);
  double above = 0.0;  // J_{k+1}
  double cur = 1.0;    // J_k, unnormalized
  double sumsq = 2.0 * cur * cur;
  double even = (start % 2 == 0) ? 2.0 * cur : 0.0;
  if (start >= lo && start <= hi) out[start - lo] = cur;
  for (int k = start; k >= 1; --k) {
    const double below = (2.0 * k / x) * cur - above;
    above = cur;
    cur = below;
    const int idx = k - 1;
    if (std::abs(cur) > kBig) {
      cur *= kSmall;
      above *= kSmall;
      sumsq *= kSmall * kSmall;
      even *= kSmall;
      for (int j = std::max(idx + 1, lo); j <= hi; ++j) out[j - lo] *= kSmall;
    }
    if (idx >= lo && idx <= hi) out[idx - lo] = cur;
    if (idx == 0) {
      sumsq += cur * cur;
      even += cur;
    } else {
      sumsq += 2.0 * cur * cur;
      if (idx % 2 == 0) even += 2.0 * cur;
    }
  }
  const double scale = std::copysign(std::sqrt(sumsq), even);
  for (int j = lo; j <= hi; ++j) out[j - lo] /= scale;
}

inline double parity_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

}  // namespace detail

/// J_0(x), ..., J_nmax(x) from a single backward sweep.
inline std::vector<double> bessel_j_table(int nmax, double x) {
  detail::check_bessel_args(nmax, x);
  if (nmax < 0) throw std::invalid_argument("bessel_j_table: nmax must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (x <= detail::kSeriesLimit) {
    for (int n = 0; n <= nmax; ++n) out[n] = detail::series_j(n, x);
    return out;
  }
  detail::miller_sweep(0, nmax, x, out.data());
  return out;
}

/// J_n(x) for integer n and x >= 0. Absolute accuracy about 1e-14 for
/// |n| <= 200 and x <= 500.
inline double bessel_j(int n, double x) {
  detail::check_bessel_args(n, x);
  const int m = n < 0 ? -n : n;
  const double sign = n < 0 ? detail::parity_sign(m) : 1.0;
  if (x <= detail::kSeriesLimit) return sign * detail::series_j(m, x);
  double value = 0.0;
  detail::miller_sweep(m, m, x, &value);
  return sign * value;
}

/// J_n'(x) = (J_{n-1}(x) - J_{n+1}(x)) / 2.
inline double bessel_j_prime(int n, double x) {
  detail::check_bessel_args(n, x);
  if (n < 0) return detail::parity_sign(-n) * bessel_j_prime(-n, x);
  if (n == 0) return -bessel_j(1, x);
  if (x <= detail::kSeriesLimit)
    return 0.5 * (detail::series_j(n - 1, x) - detail::series_j(n + 1, x));
  double v[3];
  detail::miller_sweep(n - 1, n + 1, x, v);
  return 0.5 * (v[0] - v[2]);
}

struct BesselAsymptotic {
  double j;
  double jprime;
};

/// Stationary-phase approximations of J_n(R) and J_n'(R) in the
/// oscillatory region 0 <= n < R. Error is O(1/R) for n/R bounded away
/// from 1. Used as a test oracle only.
inline BesselAsymptotic bessel_asymptotic(int n, double R) {
  if (n < 0 || !(R > n))
    throw std::invalid_argument("bessel_asymptotic: requires 0 <= n < R");
  const double cos_a = n / R;
  const double sin_a = std::sqrt(1.0 - cos_a * cos_a);
  const double a = std::acos(cos_a);
  const double amp = std::sqrt(2.0 / (std::numbers::pi * R * sin_a));
  const double phase = R * (sin_a - a * cos_a) - 0.25 * std::numbers::pi;
  return {amp * std::cos(phase), -amp * sin_a * std::sin(phase)};
}

}  // namespace farsplit
