#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "farsplit/bounds.hpp"
#include "farsplit/split_l1.hpp"
#include "farsplit/split_ls.hpp"
#include "farsplit/synth.hpp"
#include "scenarios.hpp"

using namespace farsplit;
using std::numbers::pi;

using namespace scenario;

namespace {

// Truth embedded in a wider window.
CoeffWindow widen(const CoeffWindow& w, int N) {
  CoeffWindow out(N);
  for (int n = -w.N; n <= w.N; ++n) out.at(n) = w.at(n);
  return out;
}

}  // namespace

TEST(SoftThreshold, Examples) {
  EXPECT_EQ(soft_threshold({3, 4}, 0.0), cplx(3, 4));
  EXPECT_EQ(soft_threshold({3, 4}, 5.0), cplx(0, 0));
  EXPECT_NEAR(std::abs(soft_threshold({3, 4}, 2.5) - cplx(1.5, 2.0)), 0.0, 1e-15);
  EXPECT_EQ(soft_threshold({0, 0}, 1.0), cplx(0, 0));
  EXPECT_THROW(soft_threshold({1, 0}, -1.0), std::invalid_argument);
}

TEST(Objective, Examples) {
  SplitGeometry g;
  g.grid = AngularGrid(128);
  g.centers = {{3, 0}, {-3, 2}};
  g.omega = ArcMask({{1.0, 1.8}});
  const std::vector<CoeffWindow> zero{CoeffWindow(8), CoeffWindow(8)};
  L1Config cfg;
  EXPECT_EQ(l1_objective(zero, FarField(g.grid), g, cfg), 0.0);
  std::mt19937_64 rng(2);
  const auto gamma = noise_field(g.grid, 1.0, rng);
  const double observed = norm2(mask(gamma, g.omega, Region::outside));
  EXPECT_NEAR(l1_objective(zero, gamma, g, cfg), observed * observed, 1e-12);

  const std::vector<CoeffWindow> truth{random_window(8, rng), random_window(8, rng)};
  FarField f(g.grid);
  for (int i = 0; i < 2; ++i) f = f + component_field(truth[i], g.centers[i], 1.0, g.grid);
  double l1 = 0.0;
  for (const auto& w : truth)
    for (const auto& z : w.values) l1 += std::abs(z);
  cfg.mu = 1e-9;
  EXPECT_NEAR(l1_objective(truth, mask(f, g.omega, Region::outside), g, cfg), cfg.mu * l1, 1e-20);
}

TEST(Fista, ZeroDataGivesZero) {
  SplitGeometry g;
  g.grid = AngularGrid(128);
  g.centers = {{3, 0}, {-3, 2}};
  const auto r = fista_split(FarField(g.grid), g, L1Config{});
  EXPECT_EQ(r.solution.diagnostics.iterations, 1);
  for (const auto& w : r.solution.alphas) EXPECT_EQ(w.norm2(), 0.0);
  EXPECT_EQ(norm2(r.solution.beta), 0.0);
  EXPECT_EQ(r.solution.alphas[0].N, 32);
}

TEST(Fista, MonotoneTraceAndStationarity) {
  std::mt19937_64 rng(17);
  const auto s = two_component(rng, 3, 128);
  auto g = s.g;
  g.omega = ArcMask({{0.3, 0.9}});
  const auto gamma = mask(s.clean + noise_field(g.grid, 0.05, rng), g.omega, Region::outside);
  L1Config cfg;
  cfg.mu = 1e-2;
  cfg.window = 16;
  cfg.tol = 1e-12;
  cfg.max_iters = 50000;
  const auto r = fista_split(gamma, g, cfg);
  ASSERT_GE(r.trace.size(), 2u);
  for (std::size_t t = 1; t < r.trace.size(); ++t) EXPECT_LE(r.trace[t].objective, r.trace[t - 1].objective);
  EXPECT_LT(r.solution.diagnostics.iterations, cfg.max_iters);
  EXPECT_NEAR(r.solution.diagnostics.objective, l1_objective(r.solution.alphas, gamma, g, cfg), 1e-12);
  EXPECT_LE(stationarity_residual(r.solution.alphas, gamma, g, cfg), 1e-8);
  // Completed field on the arc is the model there.
  FarField model(g.grid);
  for (int i = 0; i < 2; ++i) model = model + component_field(r.solution.alphas[i], g.centers[i], 1.0, g.grid);
  EXPECT_LE(norm2(r.solution.beta + project_mask(model, g.omega)), 1e-12);
}

TEST(Fista, AgreesWithLeastSquaresForSmallMu) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 5; ++t) {
    const auto s = two_component(rng, 3);
    BoundInputs in;
    in.centers = s.g.centers;
    in.orders = s.g.orders;
    ASSERT_TRUE(evaluate_bound(TheoremId::LS_two, in).hypotheses_ok);
    ASSERT_TRUE(evaluate_bound(TheoremId::L1_two_band_apriori, in).hypotheses_ok);
    const auto ls = split_ls(s.clean, s.g);
    L1Config cfg;
    cfg.mu = 1e-7;
    cfg.use_orders = true;
    cfg.tol = 1e-13;
    cfg.max_iters = 20000;
    const auto l1 = fista_split(s.clean, s.g, cfg);
    double diff = 0.0, size = 0.0;
    for (int i = 0; i < 2; ++i) {
      diff += std::pow((l1.solution.alphas[i] - ls.alphas[i]).norm2(), 2);
      size += std::pow(ls.alphas[i].norm2(), 2);
    }
    EXPECT_LE(std::sqrt(diff / size), 1e-4) << t;
  }
}

TEST(Fista, BacktrackingRecoversFromLargeStep) {
  std::mt19937_64 rng(29);
  const auto s = two_component(rng, 2);
  L1Config cfg;
  cfg.use_orders = true;
  cfg.step = 10.0;
  cfg.max_iters = 300;
  const auto r = fista_split(s.clean, s.g, cfg);
  EXPECT_LE(r.trace.back().objective, r.trace.front().objective);
  for (std::size_t t = 1; t < r.trace.size(); ++t) EXPECT_LE(r.trace[t].objective, r.trace[t - 1].objective);
  EXPECT_LE(r.solution.residual, 1e-2 * norm2(s.clean));
}

TEST(Fista, StandInArcReconstruction) {
  const auto r = stand_in_arc_run();
  EXPECT_LE(r.relative_error, 0.10);
  EXPECT_LE(r.iterations, 1000);
  EXPECT_TRUE(r.monotone);
}

TEST(Certification, TwoComponentBandLimited) {
  const auto t = certify_l1_two(20, 31);
  EXPECT_EQ(t.trials, 20);
  EXPECT_TRUE(t.ok()) << t.violations << " violations, " << t.infeasible << " infeasible";
  EXPECT_LT(t.worst, 1.0);
}

TEST(Certification, WeightedColinearThreeComponents) {
  std::mt19937_64 rng(37);
  for (double d : {1200.0, 2000.0}) {
    SplitGeometry g;
    g.grid = AngularGrid(8192);
    g.centers = {{-d, 0}, {0, 0}, {d, 0}};
    std::vector<CoeffWindow> truth;
    FarField clean(g.grid);
    std::uniform_int_distribution<int> pos(-3, 3);
    for (int i = 0; i < 3; ++i) {
      CoeffWindow w(3);
      w.at(pos(rng)) = complex_gaussian(1, rng)[0];
      clean = clean + component_field(w, g.centers[i], 1.0, g.grid);
      truth.push_back(w);
    }
    const double noise = 0.02 * norm2(clean);
    const auto gamma = clean + noise_field(g.grid, noise, rng);
    L1Config cfg;
    cfg.weights = WeightMode::pairwise;
    cfg.mu = 1e-2;
    cfg.window = 64;
    const auto r = fista_split(gamma, g, cfg);
    EXPECT_NEAR(r.weights[1], std::sqrt(std::cbrt(2.0 / d)), 1e-15);
    BoundInputs in;
    in.centers = g.centers;
    in.support_sizes = {1, 1, 1};
    in.delta = std::max(r.solution.residual, noise);
    const auto rep = evaluate_bound(TheoremId::L1_multi_weighted, in);
    ASSERT_TRUE(rep.hypotheses_ok) << d;
    for (int i = 0; i < 3; ++i) {
      const double e = (r.solution.alphas[i] - widen(truth[i], 64)).norm2();
      EXPECT_LE(e * e, rep.quantity("alpha_" + std::to_string(i + 1)).rhs) << d << " " << i;
    }
  }
}

TEST(Continuation, ReachesResidualTarget) {
  std::mt19937_64 rng(41);
  const auto s = two_component(rng, 2);
  const double noise = 0.01 * norm2(s.clean);
  const auto gamma = s.clean + noise_field(s.g.grid, noise, rng);
  L1Config cfg;
  cfg.mu = 1.0;
  cfg.use_orders = true;
  const auto [r, mu] = fista_continuation(gamma, s.g, cfg, 1.5 * noise);
  EXPECT_LE(r.solution.residual, 1.5 * noise);
  EXPECT_LT(mu, 1.0);
  EXPECT_THROW(fista_continuation(gamma, s.g, cfg, 1.0, 1.5), std::invalid_argument);
}

TEST(Weights, SeparationRules) {
  const std::vector<Vec2> c{{0, 0}, {8, 0}, {0, 16}};
  const auto a = separation_weights(c, 1.0, WeightMode::pairwise);
  EXPECT_NEAR(a[0], std::sqrt(std::cbrt(2.0 / 8.0)), 1e-15);
  const auto b = separation_weights(c, 2.0, WeightMode::pairwise);
  EXPECT_NEAR(b[0], std::sqrt(std::cbrt(2.0 / 16.0)), 1e-15);
  const auto tri = separation_weights(c, 1.0, WeightMode::triangle);
  EXPECT_NEAR(tri[0], std::sqrt(std::cbrt(1.0 / 8.0 + 1.0 / 16.0)), 1e-15);
  EXPECT_THROW(separation_weights({{0, 0}, {1, 0}}, 1.0, WeightMode::triangle), std::invalid_argument);
  EXPECT_EQ(separation_weights(c, 1.0, WeightMode::uniform), (std::vector<double>{1, 1, 1}));
}

TEST(Fista, InputValidation) {
  SplitGeometry g;
  g.grid = AngularGrid(128);
  g.centers = {{3, 0}, {3, 0}};
  EXPECT_THROW(fista_split(FarField(g.grid), g, L1Config{}), GeometryError);
  g.centers = {{3, 0}, {-3, 0}};
  L1Config cfg;
  cfg.mu = 0.0;
  EXPECT_THROW(fista_split(FarField(g.grid), g, cfg), std::invalid_argument);
  cfg.mu = 1e-3;
  cfg.window = 64;
  EXPECT_THROW(fista_split(FarField(g.grid), g, cfg), GeometryError);
  cfg.window.reset();
  cfg.weights = WeightMode::explicit_list;
  cfg.explicit_weights = {1.0};
  EXPECT_THROW(fista_split(FarField(g.grid), g, cfg), std::invalid_argument);
}
