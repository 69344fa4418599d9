#pragma once

// Basis pursuit splitting and completion: minimizes
//   ||P_{S^1 \ Omega}(gamma - sum_i T_{c_i}^* alpha_i)||^2 + mu sum_i a_i ||alpha_i||_1
// by monotone FISTA with backtracking.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "farsplit/farfield.hpp"
#include "farsplit/split_ls.hpp"

namespace farsplit {

enum class WeightMode { uniform, pairwise, triangle, explicit_list };

struct L1Config {
  double mu = 1e-3;
  int max_iters = 1000;
  double tol = 1e-10;
  WeightMode weights = WeightMode::uniform;
  std::vector<double> explicit_weights;
  std::optional<double> step;  // default 1/(2I)
  /// Coefficient window |n| <= window for every component; default M/4.
  /// When `use_orders` is set the geometry's N_i are used instead.
  std::optional<int> window;
  bool use_orders = false;
};

inline cplx soft_threshold(cplx v, double tau) {
  if (tau < 0.0) throw std::invalid_argument("soft_threshold: tau must be >= 0");
  const double a = std::abs(v);
  if (a <= tau || a == 0.0) return {};
  return v * (1.0 - tau / a);
}

/// Weights a_i^2 = max_j (2/(k|c_i-c_j|))^p (pairwise) or
/// max_{j,l} (1/(k|c_i-c_j|) + 1/(k|c_i-c_l|))^p over distinct j, l != i
/// (triangle, needs three or more components). Returns a_i.
inline std::vector<double> separation_weights(const std::vector<Vec2>& centers, double k,
                                              WeightMode mode, double p = 1.0 / 3.0) {
  const int I = static_cast<int>(centers.size());
  std::vector<double> a(static_cast<std::size_t>(I), 1.0);
  if (mode == WeightMode::uniform) return a;
  if (mode == WeightMode::triangle && I < 3)
    throw std::invalid_argument("triangle weights need at least three components");
  if (I < 2) throw std::invalid_argument("separation weights need at least two components");
  for (int i = 0; i < I; ++i) {
    double best = 0.0;
    for (int j = 0; j < I; ++j) {
      if (j == i) continue;
      const double dij = k * (centers[i] - centers[j]).norm();
      if (mode == WeightMode::pairwise) {
        best = std::max(best, std::pow(2.0 / dij, p));
        continue;
      }
      for (int l = 0; l < I; ++l) {
        if (l == i || l == j) continue;
        const double dil = k * (centers[i] - centers[l]).norm();
        best = std::max(best, std::pow(1.0 / dij + 1.0 / dil, p));
      }
    }
    a[i] = std::sqrt(best);
  }
  return a;
}

struct TracePoint {
  int iter;
  double objective;
  double residual;
};

struct L1Result {
  SplitSolution solution;
  std::vector<TracePoint> trace;
  std::vector<double> weights;
};

/// Linear map from stacked component windows to observed samples.
class ObservationOperator {
 public:
  ObservationOperator(const SplitGeometry& g, std::vector<int> windows)
      : geometry_(g), windows_(std::move(windows)) {
    const auto& grid = g.grid;
    for (int i = 0; i < g.components(); ++i) {
      if (windows_[i] < 0 || windows_[i] > grid.max_index() - 1)
        throw GeometryError("coefficient window does not fit the grid");
      phases_.push_back(translation_phases(grid, g.centers[i], g.k));
    }
    observed_.assign(static_cast<std::size_t>(grid.size()), 1.0);
    for (int j : g.omega.grid_indices(grid)) observed_[j] = 0.0;
  }

  int components() const { return geometry_.components(); }
  int window(int i) const { return windows_[i]; }
  const SplitGeometry& geometry() const { return geometry_; }

  /// sum_i T_{c_i}^* alpha_i on the whole circle (samples).
  std::vector<cplx> synthesize(const std::vector<CoeffWindow>& alphas) const {
    const auto& grid = geometry_.grid;
    const int M = grid.size();
    std::vector<cplx> total(static_cast<std::size_t>(M)), spec(static_cast<std::size_t>(M)), s;
    const double scale = M / std::sqrt(kTwoPi);
    for (int i = 0; i < components(); ++i) {
      std::fill(spec.begin(), spec.end(), cplx{});
      for (int n = -windows_[i]; n <= windows_[i]; ++n) spec[grid.fft_slot(n)] = alphas[i].at(n);
      fft_.inv(s, spec);
      for (int j = 0; j < M; ++j) total[j] += scale * std::conj(phases_[i][j]) * s[j];
    }
    return total;
  }

  /// Observed part of the synthesis.
  std::vector<cplx> apply(const std::vector<CoeffWindow>& alphas) const {
    auto v = synthesize(alphas);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] *= observed_[j];
    return v;
  }

  /// Adjoint: windows of T_{c_i} P r.
  std::vector<CoeffWindow> adjoint(const std::vector<cplx>& r) const {
    const auto& grid = geometry_.grid;
    const int M = grid.size();
    const double scale = std::sqrt(kTwoPi) / M;
    std::vector<cplx> in(static_cast<std::size_t>(M)), spec;
    std::vector<CoeffWindow> out;
    for (int i = 0; i < components(); ++i) {
      for (int j = 0; j < M; ++j) in[j] = observed_[j] * phases_[i][j] * r[j];
      fft_.fwd(spec, in);
      CoeffWindow w(windows_[i]);
      for (int n = -windows_[i]; n <= windows_[i]; ++n) w.at(n) = scale * spec[grid.fft_slot(n)];
      out.push_back(std::move(w));
    }
    return out;
  }

  /// ||v||^2 with the grid quadrature.
  double norm_sq(const std::vector<cplx>& v) const {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return geometry_.grid.weight() * s;
  }

  /// Observed data (gamma restricted off Omega).
  std::vector<cplx> observed(const FarField& gamma) const {
    auto v = gamma.samples();
    for (std::size_t j = 0; j < v.size(); ++j) v[j] *= observed_[j];
    return v;
  }

 private:
  SplitGeometry geometry_;
  std::vector<int> windows_;
  std::vector<std::vector<cplx>> phases_;
  std::vector<double> observed_;
  mutable Eigen::FFT<double> fft_;
};

namespace detail {

inline std::vector<int> l1_windows(const SplitGeometry& g, const L1Config& cfg) {
  if (cfg.use_orders) {
    if (g.orders.size() != g.centers.size()) throw GeometryError("need one order per component");
    return g.orders;
  }
  return std::vector<int>(g.centers.size(), cfg.window.value_or(g.grid.size() / 4));
}

inline std::vector<double> l1_weights(const SplitGeometry& g, const L1Config& cfg) {
  if (cfg.weights == WeightMode::explicit_list) {
    if (cfg.explicit_weights.size() != g.centers.size())
      throw std::invalid_argument("need one weight per component");
    for (double a : cfg.explicit_weights)
      if (!(a > 0.0)) throw std::invalid_argument("weights must be > 0");
    return cfg.explicit_weights;
  }
  return separation_weights(g.centers, g.k, cfg.weights);
}

inline double l1_penalty(const std::vector<CoeffWindow>& x, const std::vector<double>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (const auto& z : x[i].values) s += a[i] * std::abs(z);
  return s;
}

inline double diff_norm_sq(const std::vector<CoeffWindow>& x, const std::vector<CoeffWindow>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t q = 0; q < x[i].values.size(); ++q) s += std::norm(x[i].values[q] - y[i].values[q]);
  return s;
}

inline double norm_sq(const std::vector<CoeffWindow>& x) {
  double s = 0.0;
  for (const auto& w : x) s += w.norm2() * w.norm2();
  return s;
}

}  // namespace detail

/// Value of the penalized functional at the given windows.
inline double l1_objective(const std::vector<CoeffWindow>& alphas, const FarField& gamma,
                           const SplitGeometry& geometry, const L1Config& config) {
  validate_geometry(geometry, false);
  std::vector<int> win;
  for (const auto& a : alphas) win.push_back(a.N);
  ObservationOperator A(geometry, win);
  auto r = A.apply(alphas);
  const auto g = A.observed(gamma);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = g[j] - r[j];
  return A.norm_sq(r) + config.mu * detail::l1_penalty(alphas, detail::l1_weights(geometry, config));
}

/// ||x - prox(x - s grad f(x))|| with s = 1/(2I): zero exactly at minimizers.
inline double stationarity_residual(const std::vector<CoeffWindow>& x, const FarField& gamma,
                                    const SplitGeometry& geometry, const L1Config& config) {
  std::vector<int> win;
  for (const auto& a : x) win.push_back(a.N);
  ObservationOperator A(geometry, win);
  const auto a = detail::l1_weights(geometry, config);
  const double s = config.step.value_or(1.0 / (2.0 * geometry.components()));
  auto r = A.apply(x);
  const auto g = A.observed(gamma);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] -= g[j];
  const auto grad = A.adjoint(r);
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t q = 0; q < x[i].values.size(); ++q) {
      const cplx p = soft_threshold(x[i].values[q] - 2.0 * s * grad[i].values[q], s * config.mu * a[i]);
      d += std::norm(x[i].values[q] - p);
    }
  return std::sqrt(d);
}

/// Penalized l1 splitting from an optional warm start.
inline L1Result fista_split(const FarField& gamma, const SplitGeometry& geometry,
                            const L1Config& config,
                            const std::vector<CoeffWindow>* initial = nullptr) {
  validate_geometry(geometry, false);
  if (!(gamma.grid() == geometry.grid)) throw std::invalid_argument("fista_split: grid mismatch");
  if (!(config.mu > 0.0)) throw std::invalid_argument("fista_split: mu must be > 0");
  if (config.max_iters < 1) throw std::invalid_argument("fista_split: max_iters must be >= 1");
  if (config.step && !(*config.step > 0.0)) throw std::invalid_argument("fista_split: step must be > 0");

  const int I = geometry.components();
  ObservationOperator A(geometry, detail::l1_windows(geometry, config));
  const auto a = detail::l1_weights(geometry, config);
  const auto g = A.observed(gamma);

  std::vector<CoeffWindow> x;
  for (int i = 0; i < I; ++i) x.emplace_back(A.window(i));
  if (initial) {
    if (initial->size() != static_cast<std::size_t>(I)) throw std::invalid_argument("fista_split: bad warm start");
    for (int i = 0; i < I; ++i)
      for (int n = -A.window(i); n <= A.window(i); ++n) x[i].at(n) = (*initial)[i].at(n);
  }

  // Residual Ax - g and the data term.
  auto residual_of = [&](const std::vector<CoeffWindow>& v) {
    auto r = A.apply(v);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= g[j];
    return r;
  };
  auto objective_of = [&](double data, const std::vector<CoeffWindow>& v) {
    return data + config.mu * detail::l1_penalty(v, a);
  };

  double L = 1.0 / config.step.value_or(1.0 / (2.0 * I));
  double fx_data = A.norm_sq(residual_of(x));
  double Fx = objective_of(fx_data, x);
  std::vector<TracePoint> trace{{0, Fx, std::sqrt(fx_data)}};
  auto y = x;
  double t = 1.0;
  int iter = 0;
  for (iter = 1; iter <= config.max_iters; ++iter) {
    const auto ry = residual_of(y);
    const double fy = A.norm_sq(ry);
    auto grad = A.adjoint(ry);
    for (auto& w : grad)
      for (auto& z : w.values) z *= 2.0;

    std::vector<CoeffWindow> z;
    double fz = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      z = y;
      for (int i = 0; i < I; ++i)
        for (std::size_t q = 0; q < z[i].values.size(); ++q)
          z[i].values[q] = soft_threshold(y[i].values[q] - grad[i].values[q] / L, config.mu * a[i] / L);
      fz = A.norm_sq(residual_of(z));
      double lin = 0.0;
      for (int i = 0; i < I; ++i)
        for (std::size_t q = 0; q < z[i].values.size(); ++q)
          lin += std::real(std::conj(grad[i].values[q]) * (z[i].values[q] - y[i].values[q]));
      const double quad = 0.5 * L * detail::diff_norm_sq(z, y);
      if (fz <= fy + lin + quad + 1e-12 * std::max(1.0, fy)) break;
      L *= 2.0;
    }
    const double Fz = objective_of(fz, z);
    const bool accept = Fz <= Fx;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const auto x_prev = x;
    if (accept) {
      x = z;
      Fx = Fz;
      fx_data = fz;
    }
    // y = x + (t/t_next)(z - x) + ((t-1)/t_next)(x - x_prev)
    y = x;
    for (int i = 0; i < I; ++i)
      for (std::size_t q = 0; q < y[i].values.size(); ++q)
        y[i].values[q] += (t / t_next) * (z[i].values[q] - x[i].values[q]) +
                          ((t - 1.0) / t_next) * (x[i].values[q] - x_prev[i].values[q]);
    t = t_next;
    trace.push_back({iter, Fx, std::sqrt(fx_data)});
    if (accept) {
      const double change = std::sqrt(detail::diff_norm_sq(x, x_prev));
      const double size = std::sqrt(detail::norm_sq(x));
      if (change <= config.tol * std::max(size, 1e-300)) break;
    }
  }

  L1Result out;
  out.weights = a;
  out.trace = std::move(trace);
  auto full = A.synthesize(x);
  // gamma = beta + sum_i T^* alpha_i with gamma = 0 on Omega.
  std::vector<cplx> beta(full.size());
  for (int j : geometry.omega.grid_indices(geometry.grid)) beta[j] = -full[j];
  auto& s = out.solution;
  s.beta = FarField::from_samples(geometry.grid, std::move(beta));
  s.alphas = std::move(x);
  s.residual = std::sqrt(fx_data);
  s.diagnostics.method = "l1";
  s.diagnostics.iterations = std::min(iter, config.max_iters);
  s.diagnostics.objective = Fx;
  return out;
}

/// Decreases mu geometrically (warm started) until the observed residual is
/// at most delta. Returns the last solve and the mu it used.
inline std::pair<L1Result, double> fista_continuation(const FarField& gamma,
                                                      const SplitGeometry& geometry,
                                                      L1Config config, double delta,
                                                      double factor = 0.5, int max_rounds = 40) {
  if (!(delta >= 0.0)) throw std::invalid_argument("continuation: delta must be >= 0");
  if (!(factor > 0.0 && factor < 1.0)) throw std::invalid_argument("continuation: factor in (0,1)");
  auto res = fista_split(gamma, geometry, config);
  for (int r = 0; r < max_rounds && res.solution.residual > delta; ++r) {
    config.mu *= factor;
    res = fista_split(gamma, geometry, config, &res.solution.alphas);
  }
  return {std::move(res), config.mu};
}

}  // namespace farsplit
