#pragma once

// Squared singular values s_n^2(R) of the restricted far field operator on
// B_R(0) (wave number 1), their decay bound, and the power threshold that
// delimits the non-evanescent modes.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "farsplit/bessel.hpp"

namespace farsplit {

namespace detail {
inline void check_radius(double R) {
  if (!(R > 0.0) || !std::isfinite(R))
    throw std::invalid_argument("radius must be finite and > 0");
}

// s_n^2 from J_{n-1}, J_n, J_{n+1} at R.
inline double sn2_from_triplet(int n, double R, double jm, double j, double jp) {
  const double rjp = 0.5 * R * (jm - jp);
  return std::numbers::pi * (rjp * rjp + (R * R - double(n) * n) * j * j);
}
}  // namespace detail

/// s_n^2(R) = 2 pi int_0^R J_n(r)^2 r dr, evaluated in closed form as
/// pi [ (R J_n'(R))^2 + (R^2 - n^2) J_n(R)^2 ].
inline double squared_singular_value(int n, double R) {
  detail::check_radius(R);
  const int m = n < 0 ? -n : n;
  if (m == 0) {
    const auto t = bessel_j_table(1, R);
    return detail::sn2_from_triplet(0, R, -t[1], t[0], t[1]);
  }
  const double jm = bessel_j(m - 1, R);
  const double j = bessel_j(m, R);
  const double jp = bessel_j(m + 1, R);
  return detail::sn2_from_triplet(m, R, jm, j, jp);
}

/// Upper bound for s_n^2(R), valid for |n| >= R.
inline double decay_bound(int n, double R) {
  detail::check_radius(R);
  const double m = std::abs(static_cast<double>(n));
  if (m < R) throw std::invalid_argument("decay_bound: requires |n| >= R");
  const double g = std::tgamma(2.0 / 3.0);
  const double log_c = std::log(std::numbers::pi) + (2.0 / 3.0) * std::log(2.0) -
                       (4.0 / 3.0) * std::log(3.0) - 2.0 * std::log(g);
  const double q = (R * R) / (m * m);
  const double log_b = log_c + (2.0 / 3.0) * std::log(m) +
                       (m + 1.0) * std::log1p(0.5 / m) +
                       m * (std::log(q) + 1.0 - q) + std::log(q);
  return std::exp(log_b);
}

struct PicardSpectrum {
  double R = 0.0;
  std::vector<double> values;  // s_n^2(R), n = 0..n_max
  double tail_bound = 0.0;     // bound on sum_{n > n_max} s_n^2(R)

  int n_max() const { return static_cast<int>(values.size()) - 1; }
  double at(int n) const { return values.at(static_cast<std::size_t>(n < 0 ? -n : n)); }

  /// s_0^2 + 2 sum_{n=1}^{n_max} s_n^2
  double two_sided_sum() const {
    double s = 0.0;
    for (std::size_t n = values.size(); n-- > 1;) s += values[n];
    return values.empty() ? 0.0 : values[0] + 2.0 * s;
  }
};

/// Default truncation order for spectra and sum checks.
inline int default_spectrum_order(double R) {
  return static_cast<int>(std::ceil(3.0 * R)) + 50;
}

inline PicardSpectrum spectrum(double R, int n_max) {
  detail::check_radius(R);
  if (n_max < static_cast<int>(std::ceil(R)))
    throw std::invalid_argument("spectrum: n_max must be >= ceil(R)");
  const auto j = bessel_j_table(n_max + 1, R);
  PicardSpectrum out;
  out.R = R;
  out.values.resize(static_cast<std::size_t>(n_max) + 1);
  out.values[0] = detail::sn2_from_triplet(0, R, -j[1], j[0], j[1]);
  for (int n = 1; n <= n_max; ++n)
    out.values[n] = detail::sn2_from_triplet(n, R, j[n - 1], j[n], j[n + 1]);
  // Two-sided tail, summed until the terms stop mattering.
  double tail = 0.0;
  for (int n = n_max + 1; n < n_max + 100000; ++n) {
    const double b = decay_bound(n, R);
    tail += 2.0 * b;
    if (b < 1e-300 || b < 1e-20 * tail) break;
  }
  out.tail_bound = tail;
  return out;
}

inline PicardSpectrum spectrum(double R) { return spectrum(R, default_spectrum_order(R)); }

/// Pointwise limit of s^2_{ceil(nu R)}(R) / (2R) as R grows.
inline double asymptote(double nu) {
  if (!(nu >= 0.0)) throw std::invalid_argument("asymptote: nu must be >= 0");
  return nu <= 1.0 ? std::sqrt(1.0 - nu * nu) : 0.0;
}

struct PowerBudget {
  double source_power;     // P
  double receiver_power;   // p

  double ratio() const { return receiver_power / source_power; }
};

/// Largest n >= 0 with s_n^2(R) >= 2 pi p / P, or nullopt when no mode
/// reaches the threshold. Even and odd orders are each non-increasing,
/// so the scan stops once two consecutive orders fall below it.
inline std::optional<int> picard_threshold(double R, const PowerBudget& budget) {
  detail::check_radius(R);
  if (!(budget.source_power > 0.0) || !(budget.receiver_power > 0.0))
    throw std::invalid_argument("picard_threshold: P and p must be > 0");
  const double level = 2.0 * std::numbers::pi * budget.ratio();
  std::optional<int> best;
  int chunk = static_cast<int>(std::ceil(2.0 * R)) + 16;
  int lo = 0;
  while (true) {
    const auto j = bessel_j_table(lo + chunk + 1, R);
    for (int n = lo; n <= lo + chunk; ++n) {
      const double jm = n == 0 ? -j[1] : j[n - 1];
      const double s = detail::sn2_from_triplet(n, R, jm, j[n], j[n + 1]);
      if (s >= level) {
        best = n;
      } else if (n >= 1 && (!best || *best < n - 1)) {
        // n and n-1 both below the level: every higher order is too.
        return best;
      }
    }
    lo += chunk + 1;
    chunk *= 2;
  }
}

/// Truncation order used when only the radius of a component is known.
inline int default_order(double R, double k = 1.0) {
  if (!(R >= 0.0)) throw std::invalid_argument("default_order: R must be >= 0");
  return static_cast<int>(std::ceil(0.5 * std::numbers::e * k * R));
}

}  // namespace farsplit
