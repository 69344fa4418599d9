#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "farsplit/synth.hpp"

using namespace farsplit;
using std::numbers::pi;

namespace {

SourceComponent modal(Vec2 c, double R, std::vector<cplx> a) {
  SourceComponent s;
  s.center = c;
  s.radius = R;
  s.order = static_cast<int>(a.size() / 2);
  s.generator = ModalGenerator{std::move(a)};
  return s;
}

double l2_diff(const FarField& a, const FarField& b) { return norm2(a - b); }

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST(ModalFarfield, SingleModeAtOrigin) {
  const AngularGrid grid(128);
  const double R = 3.0;
  const auto f = modal_farfield(modal({0, 0}, R, {1.0}), 1.0, grid);
  const double expect = squared_singular_value(0, R) / std::sqrt(2 * pi);
  for (const auto& z : f.samples()) EXPECT_NEAR(std::abs(z - expect), 0.0, 1e-13);
}

TEST(ModalFarfield, NormIsWeightedSum) {
  std::mt19937_64 rng(1);
  const AngularGrid grid(256);
  const double R = 4.5;
  const auto a = complex_gaussian(15, rng);
  const auto f = modal_farfield(modal({0, 0}, R, a), 1.0, grid);
  double s = 0;
  for (int n = -7; n <= 7; ++n) s += std::norm(a[n + 7]) * std::pow(squared_singular_value(n, R), 2);
  EXPECT_NEAR(std::pow(norm2(f), 2) / s, 1.0, 1e-12);
}

TEST(ModalFarfield, TranslationSpreadsButKeepsNorm) {
  std::mt19937_64 rng(2);
  const AngularGrid grid(512);
  const auto a = complex_gaussian(11, rng);
  const auto f0 = modal_farfield(modal({0, 0}, 4.0, a), 1.0, grid);
  const auto f = modal_farfield(modal({24, -4}, 4.0, a), 1.0, grid);
  EXPECT_NEAR(norm2(f) / norm2(f0), 1.0, 1e-12);
  EXPECT_GT(l0_support(f).size(), 11u);
}

TEST(ModalFarfield, PointSourceAndWaveNumber) {
  const AngularGrid grid(64);
  SourceComponent p;
  p.center = {1.0, 2.0};
  p.generator = PointGenerator{cplx(0, 2)};
  const auto f = modal_farfield(p, 2.0, grid);
  for (int j = 0; j < 64; ++j) {
    const double t = grid.angle(j);
    const cplx expect = cplx(0, 2) / std::sqrt(2 * pi) * std::polar(1.0, -2.0 * (std::cos(t) + 2 * std::sin(t)));
    EXPECT_NEAR(std::abs(f.samples()[j] - expect), 0.0, 1e-13);
  }
  EXPECT_THROW(modal_farfield(SourceComponent{{0, 0}, 1.0, 0, StripGenerator{}}, 1.0, grid),
               std::invalid_argument);
  EXPECT_THROW(modal_farfield(modal({0, 0}, 1.0, {1.0}), 0.0, grid), std::invalid_argument);
}

TEST(MinimalPower, SingleMode) {
  const AngularGrid grid(128);
  for (int n : {0, 3, -5}) {
    CoeffWindow w(6);
    w.at(n) = std::sqrt(2 * pi);  // e^{int}
    const double R = 5.0;
    EXPECT_NEAR(minimal_power(w.to_farfield(grid), R) * squared_singular_value(n, R), 1.0, 1e-12);
  }
}

TEST(MinimalPower, ModalConsistencyAndScaling) {
  std::mt19937_64 rng(3);
  const AngularGrid grid(256);
  const double R = 6.0;
  const auto a = complex_gaussian(19, rng);
  const auto f = modal_farfield(modal({0, 0}, R, a), 1.0, grid);
  double s = 0;
  for (int n = -9; n <= 9; ++n) s += std::norm(a[n + 9]) * squared_singular_value(n, R);
  EXPECT_NEAR(minimal_power(f, R) / (s / (2 * pi)), 1.0, 1e-10);
  EXPECT_NEAR(minimal_power(cplx(2.0) * f, R) / minimal_power(f, R), 4.0, 1e-12);
}

TEST(MinimalPower, EvanescentContentIsInfinite) {
  const AngularGrid grid(512);
  CoeffWindow w(200);
  w.at(0) = 1.0;
  w.at(200) = 1e-3;
  EXPECT_TRUE(std::isinf(minimal_power(w.to_farfield(grid), 5.0)));
}

TEST(Strip, LimitAndNorm) {
  const AngularGrid grid(4096);
  for (double W : {0.5, 3.0, 10.0}) {
    const auto f = strip_farfield(W, 0.0, grid);
    EXPECT_NEAR(f.samples()[1024].real(), 2 * std::sqrt(W), 1e-12);  // t = pi/2
    EXPECT_NEAR(f.samples()[3072].real(), 2 * std::sqrt(W), 1e-12);
    if (W > 1) EXPECT_GE(std::pow(norm2(f), 2), 8 * (pi - 2 / W));
  }
  EXPECT_THROW(strip_farfield(0.0, 0.0, grid), std::invalid_argument);
}

TEST(Strip, StationaryPhaseValue) {
  const double W = 10.0, d = 1e4;
  const AngularGrid grid(1 << 16);
  const cplx ip = inner(strip_farfield(W, 0.0, grid), strip_farfield(W, d, grid));
  const double predicted = 8 * std::sqrt(2 * pi) * W / std::sqrt(d) * std::cos(d - pi / 4);
  EXPECT_LE(std::abs(ip - predicted), 0.1 * std::abs(predicted));
}

TEST(Strip, CorrelationDecayExponent) {
  const double W = 10.0;
  std::vector<double> ds, cs;
  const AngularGrid grid(1 << 18);
  const auto f = strip_farfield(W, 0.0, grid);
  const double n2 = std::pow(norm2(f), 2);
  for (double e = 3.0; e <= 5.0 + 1e-9; e += 0.25) {
    const double d = pi / 4 + std::round(std::pow(10.0, e) / pi) * pi;  // |cos(d - pi/4)| = 1
    ds.push_back(d);
    cs.push_back(std::abs(inner(f, translate_adjoint(f, {0, d}, 1.0))) / n2);
  }
  EXPECT_NEAR(loglog_slope(ds, cs), -0.5, 0.1);
}

TEST(Strip, ComponentMatchesShiftedStrip) {
  const AngularGrid grid(1024);
  SourceComponent s{{0, 7.0}, 0.0, std::nullopt, StripGenerator{2.0, 0.0}};
  EXPECT_LE(l2_diff(component_farfield(s, 1.0, grid), strip_farfield(2.0, 7.0, grid)), 1e-11);
}

namespace {
Scene example_scene() {
  Scene s;
  s.k = 1.0;
  s.grid = AngularGrid(512);
  s.components = {{{24, -4}, 5.0, std::nullopt, ModalGenerator{}},
                  {{-22, 23}, 6.0, std::nullopt, ModalGenerator{}},
                  {{-15, -20}, 4.0, std::nullopt, ModalGenerator{}}};
  s.omega = ArcMask({{pi / 2, pi / 2 + pi / 3}});
  s.noise = {0.0, 42};
  return s;
}
}  // namespace

TEST(Scene, SingleComponentIsItsField) {
  Scene s;
  s.grid = AngularGrid(256);
  s.components = {modal({3, 1}, 2.0, {1.0, 2.0, 0.5})};
  const auto out = scene_farfield(s);
  EXPECT_LE(l2_diff(out.gamma, modal_farfield(s.components[0], 1.0, s.grid)), 1e-14);
  EXPECT_LE((out.truth[0] - CoeffWindow(1, {squared_singular_value(1, 2.0), 2 * squared_singular_value(0, 2.0),
                                            0.5 * squared_singular_value(1, 2.0)}))
                .norm2(),
            1e-12);
}

TEST(Scene, NoiseLevelIsExact) {
  auto s = example_scene();
  s.omega = ArcMask{};
  const auto clean = scene_farfield(s);
  s.noise.level = 0.05;
  const auto noisy = scene_farfield(s);
  EXPECT_NEAR(norm2(noisy.gamma - clean.gamma) / norm2(clean.gamma), 0.05, 1e-12);
}

TEST(Scene, ExampleGeometry) {
  const auto s = example_scene();
  const auto out = scene_farfield(s);
  EXPECT_EQ(out.orders, (std::vector<int>{7, 9, 6}));
  int zeros = 0;
  for (const auto& z : out.gamma.samples()) zeros += z == cplx{};
  EXPECT_NEAR(zeros, 85, 1);
  const auto in = mask(out.clean, s.omega, Region::inside);
  EXPECT_LE(l2_diff(out.beta_truth, cplx(-1.0) * in), 0.0);
  EXPECT_LE(l2_diff(out.gamma - out.beta_truth, out.clean), 1e-13 * norm2(out.clean));
}

TEST(Scene, DeterministicAndLinear) {
  auto s = example_scene();
  s.noise.level = 0.1;
  const auto a = scene_farfield(s), b = scene_farfield(s);
  EXPECT_EQ(a.gamma.samples(), b.gamma.samples());

  Scene s1, s2, s12;
  s1.components = {modal({10, 0}, 2.0, {1.0, 2.0, 3.0})};
  s2.components = {modal({-5, 8}, 1.0, {cplx(0, 1)})};
  s12.components = {s1.components[0], s2.components[0]};
  const auto f = scene_farfield(s12).gamma - scene_farfield(s1).gamma - scene_farfield(s2).gamma;
  EXPECT_LE(norm2(f), 1e-12);
}

TEST(Scene, Validation) {
  Scene s;
  EXPECT_THROW(scene_farfield(s), std::invalid_argument);
  s.components = {modal({1, 1}, 1.0, {1.0}), modal({1, 1}, 2.0, {1.0})};
  EXPECT_THROW(scene_farfield(s), std::invalid_argument);
}
