#pragma once

// Property suites run by `farsplit verify`: each returns the number of
// checked instances, the violations and the largest observed ratio of
// measured value to bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "farsplit/bounds.hpp"
#include "farsplit/picard.hpp"
#include "farsplit/split_ls.hpp"
#include "farsplit/synth.hpp"

namespace farsplit {

struct SuiteResult {
  std::string name;
  int trials = 0;
  int violations = 0;
  double max_ratio = 0.0;

  bool ok() const { return violations == 0; }
};

/// 2 sum_{n>=1} s_n^2(R) + s_0^2(R) = pi R^2 for R in {1, 10, 100}; the
/// ratio is the relative error over 1e-8.
inline SuiteResult suite_spectral_sum() {
  SuiteResult r{"spectral_sum"};
  for (double R : {1.0, 10.0, 100.0}) {
    const auto sp = spectrum(R);
    const double s = sp.two_sided_sum();
    const double rel = std::abs(s - std::numbers::pi * R * R) / (std::numbers::pi * R * R);
    r.trials++;
    r.max_ratio = std::max(r.max_ratio, rel / 1e-8);
    if (!(rel <= 1e-8)) r.violations++;
  }
  return r;
}

inline SuiteResult suite_uncertainty(TheoremId id, int trials, std::uint64_t seed, int threads = 0) {
  const auto s = verify_uncertainty(id, trials, seed, threads);
  return {"uncertainty_" + std::string(theorem_name(id)), s.trials, s.violations, s.max_ratio};
}

/// max r J_n^2(r) over |n| < M + N on r in (2(M+N+1), 2(M+N+1) + 200],
/// for 1 <= M, N <= 10; the ratio is against the constant b.
inline SuiteResult suite_krasikov() {
  SuiteResult r{"krasikov"};
  for (int M = 1; M <= 10; ++M)
    for (int N = M; N <= 10; ++N) {
      const double r0 = 2.0 * (M + N + 1);
      std::vector<double> rs;
      for (double x = r0 + 1e-9; x <= r0 + 200.0; x += 0.05) rs.push_back(x);
      const double mx = krasikov_check(M, N, rs);
      r.trials++;
      r.max_ratio = std::max(r.max_ratio, mx / kKrasikovB);
      if (!(mx <= kKrasikovB)) r.violations++;
    }
  return r;
}

/// csc of the subspace angle against its bound on random feasible pairs.
inline SuiteResult suite_conditioning(int trials, std::uint64_t seed) {
  SuiteResult r{"conditioning"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> od(0, 6);
  while (r.trials < trials) {
    const int N1 = od(rng), N2 = od(rng);
    const double k = 0.5 + 2.0 * u(rng);
    const double d = (2.0 * N1 + 1) * (2.0 * N2 + 1) * (1.0 + 3.0 * u(rng)) / k;
    const double phi = kTwoPi * u(rng);
    const Vec2 c2{d * std::cos(phi), d * std::sin(phi)};
    const auto s = subspace_conditioning({0, 0}, N1, c2, N2, k);
    if (!s.bound_feasible) continue;
    r.trials++;
    r.max_ratio = std::max(r.max_ratio, s.csc_angle / s.bound_csc);
    if (!(s.csc_angle <= s.bound_csc)) r.violations++;
  }
  return r;
}

/// Two-component least squares splitting under a perturbation of known
/// norm: squared component errors against the stability estimate.
inline SuiteResult suite_ls_certification(int trials, std::uint64_t seed) {
  SuiteResult r{"ls_certification"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> od(0, 4);
  for (int t = 0; t < trials; ++t) {
    SplitGeometry g;
    g.grid = AngularGrid(256);
    const int N1 = od(rng), N2 = od(rng);
    const double q0 = std::max((2.0 * N1 + 1) * (2.0 * N2 + 1), 2.0 * (N1 + N2 + 1));
    const double d = q0 * (1.02 + 2.0 * u(rng));
    const double phi = kTwoPi * u(rng);
    const Vec2 c{0.5 * d * std::cos(phi), 0.5 * d * std::sin(phi)};
    g.centers = {c, -1.0 * c};
    g.orders = {N1, N2};
    FarField gamma0(g.grid);
    for (int i = 0; i < 2; ++i) {
      const CoeffWindow w(g.orders[i], complex_gaussian(static_cast<std::size_t>(2 * g.orders[i] + 1), rng));
      gamma0 = gamma0 + component_field(w, g.centers[i], 1.0, g.grid);
    }
    const auto e = FarField::from_samples(g.grid, complex_gaussian(static_cast<std::size_t>(g.grid.size()), rng));
    BoundInputs in;
    in.centers = g.centers;
    in.orders = g.orders;
    in.perturbation = 0.01 + u(rng);
    const auto gamma1 = gamma0 + cplx(in.perturbation / norm2(e)) * e;
    const auto rep = evaluate_bound(TheoremId::LS_two, in);
    const auto sys = GalerkinSystem::assemble(g);
    const auto s0 = sys.solve(gamma0), s1 = sys.solve(gamma1);
    for (int i = 0; i < 2; ++i) {
      const double err = std::pow((s1.alphas[i] - s0.alphas[i]).norm2(), 2);
      const double ratio = err / rep.quantity(i == 0 ? "alpha_1" : "alpha_2").rhs;
      r.max_ratio = std::max(r.max_ratio, ratio);
      if (!(ratio <= 1.0)) r.violations++;
    }
    r.trials++;
  }
  return r;
}

/// All suites with the given trial count and seed.
inline std::vector<SuiteResult> run_all_suites(int trials, std::uint64_t seed, int threads = 0) {
  std::vector<SuiteResult> out;
  out.push_back(suite_spectral_sum());
  for (auto id : {TheoremId::U_l0, TheoremId::U_band, TheoremId::U_mixed})
    out.push_back(suite_uncertainty(id, trials, seed, threads));
  out.push_back(suite_krasikov());
  out.push_back(suite_conditioning(std::min(trials, 200), seed));
  out.push_back(suite_ls_certification(std::min(trials, 50), seed));
  return out;
}

}  // namespace farsplit
