#pragma once

// Analytic forward models: modal (Fourier-Bessel) sources in balls, point
// sources, single layer strips, multi-component scenes with an unobserved
// arc and additive noise.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "farsplit/farfield.hpp"
#include "farsplit/picard.hpp"

namespace farsplit {

/// Source i^n J_n(k|x-c|) e^{i n phi} weighted by a_n, |n| <= N.
struct ModalGenerator {
  std::vector<cplx> coefficients;  // a_{-N..N}; empty means random
  double taper = 0.0;              // random a_n are damped by exp(-taper |n|)
};
struct PointGenerator {
  cplx amplitude = 1.0;
};
/// Single layer W^{-1/2} on a segment of half width W through the center,
/// rotated by `orientation` from the x axis.
struct StripGenerator {
  double width = 1.0;
  double orientation = 0.0;
};
using Generator = std::variant<ModalGenerator, PointGenerator, StripGenerator>;

struct SourceComponent {
  Vec2 center;
  double radius = 0.0;
  std::optional<int> order;  // N; defaulted from the radius when absent
  Generator generator = ModalGenerator{};

  /// Truncation order used for the component at wave number k.
  int resolved_order(double k) const {
    if (std::holds_alternative<PointGenerator>(generator)) return 0;
    return order ? *order : default_order(radius, k);
  }
};

struct NoiseModel {
  double level = 0.0;
  std::uint64_t seed = 0;
};

struct Scene {
  double k = 1.0;
  AngularGrid grid{512};
  std::vector<SourceComponent> components;
  ArcMask omega;
  NoiseModel noise;
};

namespace detail {

inline void check_wavenumber(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("wave number must be > 0");
}

// sin(W u) / u, with its Taylor series near u = 0.
inline double sinc_scaled(double W, double u) {
  const double x = W * u;
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return W * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
  }
  return std::sin(x) / u;
}

}  // namespace detail

/// Far field of a modal source centered at the origin: coefficients
/// a_n s_n^2(kR), |n| <= N.
inline CoeffWindow modal_coefficients(const std::vector<cplx>& a, double R, double k) {
  detail::check_wavenumber(k);
  if (a.size() % 2 != 1) throw std::invalid_argument("modal coefficients need odd length 2N+1");
  const int N = static_cast<int>(a.size() / 2);
  CoeffWindow w(N, a);
  if (N == 0 && R == 0.0) return w;
  for (int n = -N; n <= N; ++n) w.at(n) *= squared_singular_value(n, k * R);
  return w;
}

/// Far field of a modal or point component, translated to its center.
inline FarField modal_farfield(const SourceComponent& comp, double k, const AngularGrid& grid) {
  detail::check_wavenumber(k);
  CoeffWindow w;
  if (const auto* p = std::get_if<PointGenerator>(&comp.generator)) {
    w = CoeffWindow(0, {p->amplitude});
  } else if (const auto* m = std::get_if<ModalGenerator>(&comp.generator)) {
    if (m->coefficients.empty())
      throw std::invalid_argument("modal_farfield: coefficients not set");
    if (!(comp.radius > 0.0)) throw std::invalid_argument("modal_farfield: radius must be > 0");
    w = modal_coefficients(m->coefficients, comp.radius, k);
  } else {
    throw std::invalid_argument("modal_farfield: component is not modal or point");
  }
  return translate_adjoint(w.to_farfield(grid), comp.center, k);
}

/// Power of the minimal power source in B_R(0) radiating alpha (k = 1):
/// (1/2 pi) sum |alpha_n|^2 / s_n^2(R). Coefficients below 1e-12 of the
/// largest are treated as numerical zeros. Returns +inf when a retained
/// term exceeds 1e16 ||alpha||^2.
inline double minimal_power(const FarField& alpha, double R) {
  detail::check_radius(R);
  double mx = 0.0, total = 0.0;
  for (const auto& z : alpha.coeffs()) {
    mx = std::max(mx, std::abs(z));
    total += std::norm(z);
  }
  if (mx == 0.0) return 0.0;
  const auto& grid = alpha.grid();
  const int top = std::max(grid.max_index(), static_cast<int>(std::ceil(R)));
  const auto sp = spectrum(R, top);
  double s = 0.0;
  for (int n = grid.min_index(); n <= grid.max_index(); ++n) {
    const double a2 = std::norm(alpha.coeff(n));
    if (std::sqrt(a2) <= 1e-12 * mx) continue;
    const double term = a2 / sp.at(n);
    if (!(term <= 1e16 * total)) return std::numeric_limits<double>::infinity();
    s += term;
  }
  return s / (2.0 * std::numbers::pi);
}

/// 2 sin(W cos t) / (sqrt(W) cos t) e^{-i d sin t}: the strip far field at
/// the origin (d = 0) or shifted by (0, d).
inline FarField strip_farfield(double W, double d, const AngularGrid& grid) {
  if (!(W > 0.0)) throw std::invalid_argument("strip_farfield: W must be > 0");
  std::vector<cplx> s(static_cast<std::size_t>(grid.size()));
  const double scale = 2.0 / std::sqrt(W);
  for (int j = 0; j < grid.size(); ++j) {
    const double t = grid.angle(j);
    const double v = scale * detail::sinc_scaled(W, std::cos(t));
    s[j] = d == 0.0 ? cplx(v) : v * std::polar(1.0, -d * std::sin(t));
  }
  return FarField::from_samples(grid, std::move(s));
}

/// Strip component at wave number k, rotated and translated to its center.
inline FarField strip_component_farfield(const SourceComponent& comp, double k,
                                         const AngularGrid& grid) {
  detail::check_wavenumber(k);
  const auto* st = std::get_if<StripGenerator>(&comp.generator);
  if (!st) throw std::invalid_argument("strip_component_farfield: not a strip");
  if (!(st->width > 0.0)) throw std::invalid_argument("strip: width must be > 0");
  const double W = k * st->width;
  std::vector<cplx> s(static_cast<std::size_t>(grid.size()));
  const double scale = 2.0 / std::sqrt(W);
  for (int j = 0; j < grid.size(); ++j)
    s[j] = scale * detail::sinc_scaled(W, std::cos(grid.angle(j) - st->orientation));
  return translate_adjoint(FarField::from_samples(grid, std::move(s)), comp.center, k);
}

/// Component far field in the global frame.
inline FarField component_farfield(const SourceComponent& comp, double k, const AngularGrid& grid) {
  if (std::holds_alternative<StripGenerator>(comp.generator))
    return strip_component_farfield(comp, k, grid);
  return modal_farfield(comp, k, grid);
}

/// Component-frame coefficient window of width N (the quantity the splitting
/// solvers estimate).
inline CoeffWindow component_truth(const SourceComponent& comp, double k, const AngularGrid& grid) {
  const int N = comp.resolved_order(k);
  const auto f = component_farfield(comp, k, grid);
  return CoeffWindow::from_farfield(translate(f, comp.center, k), N);
}

/// Standard complex Gaussian samples from a seeded generator.
inline std::vector<cplx> complex_gaussian(std::size_t count, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::vector<cplx> v(count);
  for (auto& z : v) {
    const double re = g(rng);
    z = {re, g(rng)};
  }
  return v;
}

/// Random modal coefficients, damped by exp(-taper |n|) and scaled so that
/// the radiated far field has unit L^2 norm.
inline std::vector<cplx> random_modal_coefficients(int N, double R, double k, std::mt19937_64& rng,
                                                   double taper = 0.0) {
  if (!(taper >= 0.0)) throw std::invalid_argument("taper must be >= 0");
  auto a = complex_gaussian(static_cast<std::size_t>(2 * N + 1), rng);
  for (int n = -N; n <= N; ++n) a[n + N] *= std::exp(-taper * std::abs(n));
  double p = 0.0;
  for (int n = -N; n <= N; ++n) p += std::norm(a[n + N] * squared_singular_value(n, k * R));
  const double s = 1.0 / std::sqrt(p);
  for (auto& z : a) z *= s;
  return a;
}

/// Modal components without coefficients receive random ones drawn from the
/// scene seed, in component order.
inline Scene with_resolved_coefficients(Scene scene) {
  std::mt19937_64 rng(scene.noise.seed ^ 0x9e3779b97f4a7c15ULL);
  for (auto& comp : scene.components) {
    auto* m = std::get_if<ModalGenerator>(&comp.generator);
    if (!m || !m->coefficients.empty()) continue;
    m->coefficients =
        random_modal_coefficients(comp.resolved_order(scene.k), comp.radius, scene.k, rng, m->taper);
  }
  return scene;
}

struct SceneData {
  FarField gamma;                  // observed data, zero on the arc
  FarField clean;                  // noiseless full-circle field
  std::vector<CoeffWindow> truth;  // component-frame windows
  FarField beta_truth;             // -clean restricted to the arc
  std::vector<int> orders;
};

inline void validate_scene(const Scene& scene) {
  detail::check_wavenumber(scene.k);
  if (scene.components.empty()) throw std::invalid_argument("scene: no components");
  if (!(scene.noise.level >= 0.0)) throw std::invalid_argument("scene: noise level must be >= 0");
  for (std::size_t i = 0; i < scene.components.size(); ++i)
    for (std::size_t j = i + 1; j < scene.components.size(); ++j)
      if (scene.components[i].center == scene.components[j].center)
        throw std::invalid_argument("scene: components " + std::to_string(i) + " and " +
                                    std::to_string(j) + " share a center");
}

/// Superposes the components, adds noise of exact relative level and
/// removes the data on the arc.
inline SceneData scene_farfield(const Scene& input) {
  validate_scene(input);
  const Scene scene = with_resolved_coefficients(input);
  const auto& grid = scene.grid;
  SceneData out{FarField(grid), FarField(grid), {}, FarField(grid), {}};
  for (const auto& comp : scene.components) {
    out.clean = out.clean + component_farfield(comp, scene.k, grid);
    out.truth.push_back(component_truth(comp, scene.k, grid));
    out.orders.push_back(comp.resolved_order(scene.k));
  }
  FarField noisy = out.clean;
  if (scene.noise.level > 0.0) {
    std::mt19937_64 rng(scene.noise.seed);
    auto e = complex_gaussian(static_cast<std::size_t>(grid.size()), rng);
    auto ef = FarField::from_samples(grid, std::move(e));
    const double scale = scene.noise.level * norm2(out.clean) / norm2(ef);
    noisy = out.clean + cplx(scale) * ef;
  }
  out.gamma = mask(noisy, scene.omega, Region::outside);
  out.beta_truth = cplx(-1.0) * mask(out.clean, scene.omega, Region::inside);
  return out;
}

}  // namespace farsplit
