#pragma once

// Far fields on the unit circle sampled on an equispaced grid, with their
// Fourier coefficients, norms, supports, arc masks and the translation
// operator T_c alpha = exp(i k c.theta) alpha.
//
// Conventions: t_j = 2 pi j / M, theta_j = (cos t_j, sin t_j),
//   alpha(theta) = sum_n alpha_n e^{i n t} / sqrt(2 pi),
//   alpha_n      = (1/sqrt(2 pi)) int alpha(t) e^{-i n t} dt,
// with the integral replaced by the trapezoid rule on the grid. Coefficient
// indices run over the symmetric window [-M/2 + 1, M/2].

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "farsplit/bessel.hpp"

namespace farsplit {

using cplx = std::complex<double>;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  double angle() const { return std::atan2(y, x); }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

class AngularGrid {
 public:
  explicit AngularGrid(int size = 512) : size_(size) {
    if (size < 4 || size % 2 != 0)
      throw std::invalid_argument("AngularGrid: size must be even and >= 4, got " +
                                  std::to_string(size));
  }

  int size() const { return size_; }
  double angle(int j) const { return kTwoPi * j / size_; }
  /// Trapezoid weight 2 pi / M.
  double weight() const { return kTwoPi / size_; }
  int min_index() const { return -size_ / 2 + 1; }
  int max_index() const { return size_ / 2; }

  /// Position of coefficient n in FFT order.
  int fft_slot(int n) const { return ((n % size_) + size_) % size_; }
  /// Index in the symmetric window represented by FFT slot p.
  int wrap_index(int n) const {
    int p = fft_slot(n);
    return p > size_ / 2 ? p - size_ : p;
  }

  friend bool operator==(AngularGrid, AngularGrid) = default;

 private:
  int size_;
};

/// Coefficients alpha_n, n ascending over [min_index, max_index].
inline std::vector<cplx> coeffs_from_samples(std::span<const cplx> samples,
                                             const AngularGrid& grid) {
  const int M = grid.size();
  if (static_cast<int>(samples.size()) != M)
    throw std::invalid_argument("coeffs_from_samples: length does not match grid");
  std::vector<cplx> in(samples.begin(), samples.end()), spec;
  Eigen::FFT<double> fft;
  fft.fwd(spec, in);
  const double scale = std::sqrt(kTwoPi) / M;
  std::vector<cplx> out(static_cast<std::size_t>(M));
  for (int n = grid.min_index(); n <= grid.max_index(); ++n)
    out[n - grid.min_index()] = scale * spec[grid.fft_slot(n)];
  return out;
}

inline std::vector<cplx> samples_from_coeffs(std::span<const cplx> coeffs,
                                             const AngularGrid& grid) {
  const int M = grid.size();
  if (static_cast<int>(coeffs.size()) != M)
    throw std::invalid_argument("samples_from_coeffs: length does not match grid");
  std::vector<cplx> spec(static_cast<std::size_t>(M)), out;
  for (int n = grid.min_index(); n <= grid.max_index(); ++n)
    spec[grid.fft_slot(n)] = coeffs[n - grid.min_index()];
  Eigen::FFT<double> fft;
  fft.inv(out, spec);  // includes the 1/M factor
  const double scale = M / std::sqrt(kTwoPi);
  for (auto& v : out) v *= scale;
  return out;
}

/// Immutable far field holding both representations.
class FarField {
 public:
  FarField() : FarField(AngularGrid{}) {}
  explicit FarField(AngularGrid grid)
      : grid_(grid),
        samples_(static_cast<std::size_t>(grid.size())),
        coeffs_(static_cast<std::size_t>(grid.size())) {}

  static FarField from_samples(AngularGrid grid, std::vector<cplx> samples) {
    FarField f(grid);
    f.coeffs_ = coeffs_from_samples(samples, grid);
    f.samples_ = std::move(samples);
    return f;
  }

  /// Coefficients ascending over the grid window.
  static FarField from_coeffs(AngularGrid grid, std::vector<cplx> coeffs) {
    FarField f(grid);
    f.samples_ = samples_from_coeffs(coeffs, grid);
    f.coeffs_ = std::move(coeffs);
    return f;
  }

  const AngularGrid& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  const std::vector<cplx>& samples() const { return samples_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }

  /// alpha_n, zero outside the grid window.
  cplx coeff(int n) const {
    if (n < grid_.min_index() || n > grid_.max_index()) return {};
    return coeffs_[n - grid_.min_index()];
  }

  friend FarField operator+(const FarField& a, const FarField& b) {
    return combine(a, b, 1.0);
  }
  friend FarField operator-(const FarField& a, const FarField& b) {
    return combine(a, b, -1.0);
  }
  friend FarField operator*(cplx s, const FarField& a) {
    FarField f(a.grid_);
    for (std::size_t j = 0; j < a.samples_.size(); ++j) {
      f.samples_[j] = s * a.samples_[j];
      f.coeffs_[j] = s * a.coeffs_[j];
    }
    return f;
  }

 private:
  static FarField combine(const FarField& a, const FarField& b, double sign) {
    if (!(a.grid_ == b.grid_)) throw std::invalid_argument("FarField: grid mismatch");
    FarField f(a.grid_);
    for (std::size_t j = 0; j < a.samples_.size(); ++j) {
      f.samples_[j] = a.samples_[j] + sign * b.samples_[j];
      f.coeffs_[j] = a.coeffs_[j] + sign * b.coeffs_[j];
    }
    return f;
  }

  AngularGrid grid_;
  std::vector<cplx> samples_;
  std::vector<cplx> coeffs_;
};

/// <a, b> = sum_n a_n conj(b_n), evaluated by quadrature on the samples.
inline cplx inner(const FarField& a, const FarField& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("inner: grid mismatch");
  cplx s = 0.0;
  for (std::size_t j = 0; j < a.samples().size(); ++j)
    s += a.samples()[j] * std::conj(b.samples()[j]);
  return a.grid().weight() * s;
}

inline double norm2(const FarField& a) {
  double s = 0.0;
  for (const auto& v : a.samples()) s += std::norm(v);
  return std::sqrt(a.grid().weight() * s);
}

/// Coefficients of length 2N+1 indexed n = -N..N.
struct CoeffWindow {
  int N = 0;
  std::vector<cplx> values = std::vector<cplx>(1);

  CoeffWindow() = default;
  explicit CoeffWindow(int order)
      : N(order), values(static_cast<std::size_t>(2 * order + 1)) {
    if (order < 0) throw std::invalid_argument("CoeffWindow: N must be >= 0");
  }
  CoeffWindow(int order, std::vector<cplx> v) : N(order), values(std::move(v)) {
    if (order < 0 || values.size() != static_cast<std::size_t>(2 * order + 1))
      throw std::invalid_argument("CoeffWindow: expected 2N+1 values");
  }

  cplx& at(int n) { return values.at(static_cast<std::size_t>(n + N)); }
  cplx at(int n) const {
    return (n < -N || n > N) ? cplx{} : values[static_cast<std::size_t>(n + N)];
  }

  double norm2() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return std::sqrt(s);
  }

  /// Truncation of a far field's coefficients to |n| <= N.
  static CoeffWindow from_farfield(const FarField& f, int order) {
    CoeffWindow w(order);
    for (int n = -order; n <= order; ++n) w.at(n) = f.coeff(n);
    return w;
  }

  FarField to_farfield(const AngularGrid& grid) const {
    if (N > grid.max_index() - 1)
      throw std::invalid_argument("CoeffWindow: window does not fit the grid");
    std::vector<cplx> c(static_cast<std::size_t>(grid.size()));
    for (int n = -N; n <= N; ++n) c[n - grid.min_index()] = at(n);
    return FarField::from_coeffs(grid, std::move(c));
  }
};

inline CoeffWindow operator-(const CoeffWindow& a, const CoeffWindow& b) {
  CoeffWindow d(std::max(a.N, b.N));
  for (int n = -d.N; n <= d.N; ++n) d.at(n) = a.at(n) - b.at(n);
  return d;
}

/// Samples of exp(i k c.theta_j); conj gives the adjoint translation.
inline std::vector<cplx> translation_phases(const AngularGrid& grid, Vec2 c, double k) {
  std::vector<cplx> ph(static_cast<std::size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) {
    const double t = grid.angle(j);
    ph[j] = std::polar(1.0, k * (c.x * std::cos(t) + c.y * std::sin(t)));
  }
  return ph;
}

/// T_c alpha by pointwise multiplication with exp(i k c.theta).
inline FarField translate(const FarField& alpha, Vec2 c, double k = 1.0) {
  const auto ph = translation_phases(alpha.grid(), c, k);
  std::vector<cplx> s(alpha.samples());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] *= ph[j];
  return FarField::from_samples(alpha.grid(), std::move(s));
}

/// T_c^* alpha = T_{-c} alpha.
inline FarField translate_adjoint(const FarField& alpha, Vec2 c, double k = 1.0) {
  return translate(alpha, -c, k);
}

/// Kernel i^n J_n(k|c|) e^{-i n phi_c}, |n| <= K, with K the last order
/// where |J_n| is still above 1e-16. Returned as (K, values for n=-K..K).
inline std::pair<int, std::vector<cplx>> translation_kernel(Vec2 c, double k) {
  const double x = k * c.norm();
  const double phi = c.angle();
  const int kmax = static_cast<int>(std::ceil(x) + 30 + std::ceil(10.0 * std::cbrt(x)));
  const auto j = bessel_j_table(kmax, x);
  int K = 0;
  for (int n = kmax; n >= 0; --n)
    if (std::abs(j[n]) >= 1e-16) { K = n; break; }
  std::vector<cplx> ker(static_cast<std::size_t>(2 * K + 1));
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int n = -K; n <= K; ++n) {
    const int m = n < 0 ? -n : n;
    const double jn = (n < 0 && (m % 2)) ? -j[m] : j[m];
    ker[n + K] = kIPow[((n % 4) + 4) % 4] * jn * std::polar(1.0, -n * phi);
  }
  return {K, std::move(ker)};
}

/// T_c alpha as a convolution of the coefficient sequence with the
/// translation kernel (wrapped onto the grid window, which is exactly the
/// aliasing of pointwise multiplication on the grid).
inline FarField translate_by_convolution(const FarField& alpha, Vec2 c, double k = 1.0) {
  const auto& grid = alpha.grid();
  const auto [K, ker] = translation_kernel(c, k);
  std::vector<cplx> out(static_cast<std::size_t>(grid.size()));
  for (int m = grid.min_index(); m <= grid.max_index(); ++m) {
    const cplx a = alpha.coeff(m);
    if (a == cplx{}) continue;
    for (int n = -K; n <= K; ++n)
      out[grid.wrap_index(m + n) - grid.min_index()] += a * ker[n + K];
  }
  return FarField::from_coeffs(grid, std::move(out));
}

enum class Representation { samples, coeffs };

inline constexpr double kDefaultSupportTol = 1e-8;

/// L^p norm (samples, trapezoid rule) or l^p norm (coefficients).
/// p = infinity gives the max norm; p = 0 gives the support size: the
/// count of significant coefficients or the measure of the sample support.
inline double lp_norm(const FarField& alpha, double p, Representation rep,
                      double tol = kDefaultSupportTol) {
  const auto& v = rep == Representation::samples ? alpha.samples() : alpha.coeffs();
  const double w = rep == Representation::samples ? alpha.grid().weight() : 1.0;
  if (p == 0.0) {
    double mx = 0.0;
    for (const auto& z : v) mx = std::max(mx, std::abs(z));
    double cnt = 0.0;
    for (const auto& z : v)
      if (mx > 0.0 && std::abs(z) > tol * mx) cnt += 1.0;
    return w * cnt;
  }
  if (std::isinf(p)) {
    double mx = 0.0;
    for (const auto& z : v) mx = std::max(mx, std::abs(z));
    return mx;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be 0, >= 1 or inf");
  double s = 0.0;
  for (const auto& z : v) s += std::pow(std::abs(z), p);
  return std::pow(w * s, 1.0 / p);
}

/// Indices n with |alpha_n| > tol * max |alpha_m|.
inline std::vector<int> l0_support(const FarField& alpha, double tol = kDefaultSupportTol) {
  double mx = 0.0;
  for (const auto& z : alpha.coeffs()) mx = std::max(mx, std::abs(z));
  std::vector<int> idx;
  if (mx == 0.0) return idx;
  for (int n = alpha.grid().min_index(); n <= alpha.grid().max_index(); ++n)
    if (std::abs(alpha.coeff(n)) > tol * mx) idx.push_back(n);
  return idx;
}

/// Finite union of half-open arcs [start, end) on [0, 2 pi).
class ArcMask {
 public:
  struct Arc {
    double start;
    double end;
  };

  ArcMask() = default;

  /// Arcs are given as (start, end) with start < end and end - start < 2 pi;
  /// they are reduced mod 2 pi, split at 0 and merged.
  explicit ArcMask(const std::vector<std::pair<double, double>>& arcs) {
    std::vector<Arc> pieces;
    for (auto [a, b] : arcs) {
      if (!(b > a) || !(b - a < kTwoPi))
        throw std::invalid_argument("ArcMask: arcs need start < end < start + 2 pi");
      double s = std::fmod(a, kTwoPi);
      if (s < 0) s += kTwoPi;
      const double e = s + (b - a);
      if (e <= kTwoPi) {
        pieces.push_back({s, e});
      } else {
        pieces.push_back({s, kTwoPi});
        pieces.push_back({0.0, e - kTwoPi});
      }
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const Arc& l, const Arc& r) { return l.start < r.start; });
    for (const auto& p : pieces) {
      if (!arcs_.empty() && p.start <= arcs_.back().end)
        arcs_.back().end = std::max(arcs_.back().end, p.end);
      else
        arcs_.push_back(p);
    }
    if (measure() >= kTwoPi) throw std::invalid_argument("ArcMask: arcs cover the circle");
  }

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool empty() const { return arcs_.empty(); }

  double measure() const {
    double m = 0.0;
    for (const auto& a : arcs_) m += a.end - a.start;
    return m;
  }

  bool contains(double t) const {
    t = std::fmod(t, kTwoPi);
    if (t < 0) t += kTwoPi;
    for (const auto& a : arcs_)
      if (t >= a.start && t < a.end) return true;
    return false;
  }

  std::vector<int> grid_indices(const AngularGrid& grid) const {
    std::vector<int> idx;
    for (int j = 0; j < grid.size(); ++j)
      if (contains(grid.angle(j))) idx.push_back(j);
    return idx;
  }

  /// Measure seen by the grid: (2 pi / M) times the number of grid points in
  /// the mask.
  double grid_measure(const AngularGrid& grid) const {
    return grid.weight() * static_cast<double>(grid_indices(grid).size());
  }

 private:
  std::vector<Arc> arcs_;
};

enum class Region { inside, outside };

/// Keeps samples in the requested region of the mask and zeroes the rest.
inline FarField mask(const FarField& alpha, const ArcMask& omega, Region keep) {
  std::vector<cplx> s(alpha.samples());
  for (int j = 0; j < alpha.size(); ++j) {
    const bool in = omega.contains(alpha.grid().angle(j));
    if (in != (keep == Region::inside)) s[j] = 0.0;
  }
  return FarField::from_samples(alpha.grid(), std::move(s));
}

}  // namespace farsplit
