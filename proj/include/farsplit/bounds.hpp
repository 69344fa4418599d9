#pragma once

// Stability constants of the splitting and completion estimates, the
// uncertainty inequalities and the conditioning bounds, each with its
// smallness hypotheses. Randomized checks of the uncertainty inequalities
// and of the Bessel bound behind the band-limited one.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "farsplit/bessel.hpp"
#include "farsplit/farfield.hpp"
#include "farsplit/split_l1.hpp"
#include "farsplit/synth.hpp"

namespace farsplit {

enum class TheoremId {
  U_l0,
  U_band,
  U_mixed,
  LS_two,
  LS_complete,
  LS_multi,
  LS_complete_multi,
  L1_two,
  L1_two_band,
  L1_two_band_apriori,
  L1_complete,
  L1_complete_unknown_omega,
  L1_multi,
  L1_multi_band,
  L1_complete_multi,
  L1_complete_multi_band,
  L1_multi_weighted,
  L1_multi_weighted_band,
  L1_complete_multi_weighted,
  L1_complete_multi_weighted_band,
  COND_two,
  COND_point,
  COND_music,
};

inline constexpr std::array<std::pair<TheoremId, std::string_view>, 23> kTheoremNames{{
    {TheoremId::U_l0, "U_l0"},
    {TheoremId::U_band, "U_band"},
    {TheoremId::U_mixed, "U_mixed"},
    {TheoremId::LS_two, "LS_two"},
    {TheoremId::LS_complete, "LS_complete"},
    {TheoremId::LS_multi, "LS_multi"},
    {TheoremId::LS_complete_multi, "LS_complete_multi"},
    {TheoremId::L1_two, "L1_two"},
    {TheoremId::L1_two_band, "L1_two_band"},
    {TheoremId::L1_two_band_apriori, "L1_two_band_apriori"},
    {TheoremId::L1_complete, "L1_complete"},
    {TheoremId::L1_complete_unknown_omega, "L1_complete_unknown_omega"},
    {TheoremId::L1_multi, "L1_multi"},
    {TheoremId::L1_multi_band, "L1_multi_band"},
    {TheoremId::L1_complete_multi, "L1_complete_multi"},
    {TheoremId::L1_complete_multi_band, "L1_complete_multi_band"},
    {TheoremId::L1_multi_weighted, "L1_multi_weighted"},
    {TheoremId::L1_multi_weighted_band, "L1_multi_weighted_band"},
    {TheoremId::L1_complete_multi_weighted, "L1_complete_multi_weighted"},
    {TheoremId::L1_complete_multi_weighted_band, "L1_complete_multi_weighted_band"},
    {TheoremId::COND_two, "COND_two"},
    {TheoremId::COND_point, "COND_point"},
    {TheoremId::COND_music, "COND_music"},
}};

inline std::string_view theorem_name(TheoremId id) {
  for (const auto& [t, n] : kTheoremNames)
    if (t == id) return n;
  return "unknown";
}

inline std::optional<TheoremId> parse_theorem(std::string_view name) {
  for (const auto& [t, n] : kTheoremNames)
    if (n == name) return t;
  return std::nullopt;
}

inline std::vector<TheoremId> all_theorems() {
  std::vector<TheoremId> v;
  for (const auto& [t, n] : kTheoremNames) v.push_back(t);
  return v;
}

enum class BoundFamily { uncertainty, least_squares, l1, conditioning };

inline BoundFamily theorem_family(TheoremId id) {
  switch (id) {
    case TheoremId::U_l0:
    case TheoremId::U_band:
    case TheoremId::U_mixed:
      return BoundFamily::uncertainty;
    case TheoremId::LS_two:
    case TheoremId::LS_complete:
    case TheoremId::LS_multi:
    case TheoremId::LS_complete_multi:
      return BoundFamily::least_squares;
    case TheoremId::COND_two:
    case TheoremId::COND_point:
    case TheoremId::COND_music:
      return BoundFamily::conditioning;
    default:
      return BoundFamily::l1;
  }
}

enum class WeightRule { pairwise, triangle };
/// The completion variants of the weighted and band-limited l1 estimates
/// print "+" before the Omega term of the component constant; the
/// conservative variant subtracts it like the hypothesis does.
enum class SignVariant { as_printed, conservative };

struct BoundInputs {
  double k = 1.0;
  std::vector<Vec2> centers;
  std::vector<int> orders;             // N_i
  std::vector<double> support_sizes;   // ||alpha_i^0||_l0
  double omega_measure = 0.0;          // |Omega|
  /// ||gamma^1 - gamma^0||_2 for least squares estimates, ||alpha|| ||beta||
  /// for the uncertainty inequalities.
  double perturbation = 0.0;
  double delta = 0.0;  // l1 estimates
  double tau = 1.0;    // unknown-Omega completion
  WeightRule weight_rule = WeightRule::pairwise;
  SignVariant sign = SignVariant::as_printed;
};

struct Hypothesis {
  std::string name;
  bool ok;
  double value;
  double limit;
};

struct QuantityBound {
  std::string quantity;
  double constant;
  double rhs;
};

struct BoundReport {
  TheoremId theorem;
  bool hypotheses_ok = true;
  std::vector<Hypothesis> hypotheses;
  std::vector<QuantityBound> quantities;
  double constant = 0.0;  // largest quantity constant
  double rhs = 0.0;       // largest quantity rhs
  BoundInputs inputs;
  std::vector<std::string> notes;

  const QuantityBound& quantity(std::string_view name) const {
    for (const auto& q : quantities)
      if (q.quantity == name) return q;
    throw std::out_of_range("BoundReport: no quantity " + std::string(name));
  }
};

namespace detail {

class ReportBuilder {
 public:
  ReportBuilder(TheoremId id, const BoundInputs& in) {
    report_.theorem = id;
    report_.inputs = in;
    if (!(in.k > 0.0) || !std::isfinite(in.k))
      throw std::invalid_argument("evaluate_bound: k must be > 0");
    for (const auto& c : in.centers) scaled_.push_back(in.k * c);
  }

  const BoundInputs& in() const { return report_.inputs; }
  int count() const { return static_cast<int>(scaled_.size()); }

  /// Distance in wavelength units.
  double dist(int i, int j) const { return (scaled_[i] - scaled_[j]).norm(); }
  const std::vector<Vec2>& scaled_centers() const { return scaled_; }

  double min_dist() const {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count(); ++i)
      for (int j = i + 1; j < count(); ++j) d = std::min(d, dist(i, j));
    return d;
  }

  void need_centers(int n, bool exact = false) {
    if (count() < n || (exact && count() != n))
      throw std::invalid_argument(std::string(theorem_name(report_.theorem)) + ": needs " +
                                  (exact ? "" : "at least ") + std::to_string(n) + " centers");
  }
  void need_orders(int n) {
    if (static_cast<int>(in().orders.size()) < n)
      throw std::invalid_argument(std::string(theorem_name(report_.theorem)) + ": needs " +
                                  std::to_string(n) + " orders");
    for (int N : in().orders)
      if (N < 0) throw std::invalid_argument("orders must be >= 0");
  }
  void need_supports(int n) {
    if (static_cast<int>(in().support_sizes.size()) < n)
      throw std::invalid_argument(std::string(theorem_name(report_.theorem)) + ": needs " +
                                  std::to_string(n) + " support sizes");
    for (double s : in().support_sizes)
      if (!(s >= 0.0)) throw std::invalid_argument("support sizes must be >= 0");
  }
  void need_omega() {
    if (!(in().omega_measure >= 0.0) || !(in().omega_measure < kTwoPi))
      throw std::invalid_argument("omega measure must be in [0, 2 pi)");
  }
  void need_distinct() {
    for (int i = 0; i < count(); ++i)
      for (int j = i + 1; j < count(); ++j)
        if (dist(i, j) == 0.0) throw std::invalid_argument("evaluate_bound: centers coincide");
  }

  /// value < limit
  void require(std::string name, double value, double limit) {
    const bool ok = value < limit;
    report_.hypotheses.push_back({std::move(name), ok, value, limit});
    report_.hypotheses_ok = report_.hypotheses_ok && ok;
  }
  void fail(std::string name) {
    report_.hypotheses.push_back({std::move(name), false, NAN, NAN});
    report_.hypotheses_ok = false;
  }

  /// |c_i - c_j| > 2(N_i + N_j + 1) for every pair.
  void separation() {
    for (int i = 0; i < count(); ++i)
      for (int j = i + 1; j < count(); ++j)
        require("separation_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                2.0 * (in().orders[i] + in().orders[j] + 1), dist(i, j));
  }

  /// Quantity with constant denom^(-power), recorded after all hypotheses.
  void quantity(std::string name, double denom, double power = 1.0) {
    pending_.push_back({std::move(name), denom, power});
  }

  void note(std::string s) { report_.notes.push_back(std::move(s)); }

  BoundReport finish() {
    const auto fam = theorem_family(report_.theorem);
    double scale = 1.0;
    if (fam == BoundFamily::least_squares) scale = in().perturbation * in().perturbation;
    if (fam == BoundFamily::l1) scale = 4.0 * in().delta * in().delta;
    if (fam == BoundFamily::uncertainty) scale = in().perturbation;
    constexpr double inf = std::numeric_limits<double>::infinity();
    report_.constant = report_.rhs = report_.hypotheses_ok ? 0.0 : inf;
    for (const auto& p : pending_) {
      QuantityBound q{p.name, inf, inf};
      if (report_.hypotheses_ok) {
        q.constant = fam == BoundFamily::uncertainty ? p.denom : std::pow(p.denom, -p.power);
        q.rhs = q.constant * scale;
        if (!(p.denom > 0.0) && fam != BoundFamily::uncertainty) q.constant = q.rhs = inf;
        report_.constant = std::max(report_.constant, q.constant);
        report_.rhs = std::max(report_.rhs, q.rhs);
      }
      report_.quantities.push_back(std::move(q));
    }
    return report_;
  }

 private:
  struct Pending {
    std::string name;
    double denom;
    double power;
  };
  BoundReport report_;
  std::vector<Vec2> scaled_;
  std::vector<Pending> pending_;
};

inline std::string idx(int i) { return std::to_string(i + 1); }

// a_i from the weight rule at the given exponent; empty if unavailable.
inline std::optional<std::vector<double>> theorem_weights(ReportBuilder& b, double p) {
  const auto mode = b.in().weight_rule == WeightRule::triangle ? WeightMode::triangle : WeightMode::pairwise;
  if (mode == WeightMode::triangle && b.count() < 3) {
    b.fail("triangle_weights_need_three_components");
    return std::nullopt;
  }
  auto a = separation_weights(b.scaled_centers(), 1.0, mode, p);
  b.note(std::string("weights: ") + (mode == WeightMode::triangle ? "triangle" : "pairwise"));
  return a;
}

inline void multi_split(ReportBuilder& b, double p) {
  b.need_centers(2);
  b.need_supports(b.count());
  b.need_distinct();
  if (p == 0.5) {
    b.need_orders(b.count());
    b.separation();
  }
  const double I = b.count();
  const double dmin = b.min_dist();
  for (int i = 0; i < b.count(); ++i) {
    const double q = 4.0 * (I - 1.0) * b.in().support_sizes[i] / std::pow(dmin, p);
    b.require("smallness_" + idx(i), q, 1.0);
    b.quantity("alpha_" + idx(i), 1.0 - q);
  }
}

inline void multi_complete(ReportBuilder& b, double p, bool printed_plus) {
  b.need_centers(2);
  b.need_supports(b.count());
  b.need_omega();
  b.need_distinct();
  if (p == 0.5) {
    b.need_orders(b.count());
    b.separation();
  }
  const double I = b.count();
  const double dmin = b.min_dist();
  const double w = b.in().omega_measure;
  const double c = 2.0 / std::sqrt(kTwoPi);
  double qb = 0.0;
  for (double s : b.in().support_sizes) qb += c * std::sqrt(w * s);
  b.require("omega_smallness", qb, 1.0);
  b.quantity("beta", 1.0 - qb);
  const bool plus = printed_plus && b.in().sign == SignVariant::as_printed;
  for (int i = 0; i < b.count(); ++i) {
    const double A = 4.0 * (I - 1.0) * b.in().support_sizes[i] / std::pow(dmin, p);
    const double B = c * std::sqrt(w * b.in().support_sizes[i]);
    b.require("smallness_" + idx(i), A + B, 1.0);
    b.quantity("alpha_" + idx(i), plus ? 1.0 - A + B : 1.0 - A - B);
  }
  if (printed_plus)
    b.note(plus ? "component constant as printed (+ before the Omega term)"
                : "conservative component constant (- before the Omega term)");
}

inline void weighted_split(ReportBuilder& b, double p) {
  b.need_centers(2);
  b.need_supports(b.count());
  b.need_distinct();
  if (p == 0.5) {
    b.need_orders(b.count());
    b.separation();
  }
  const auto a = theorem_weights(b, p);
  const double I = b.count();
  for (int i = 0; i < b.count(); ++i) {
    const double q = a ? 4.0 * (I - 1.0) * (*a)[i] * (*a)[i] * b.in().support_sizes[i] : NAN;
    if (a) b.require("smallness_" + idx(i), q, 1.0);
    b.quantity("alpha_" + idx(i), 1.0 - q);
  }
}

inline void weighted_complete(ReportBuilder& b, double p) {
  b.need_centers(2);
  b.need_supports(b.count());
  b.need_omega();
  b.need_distinct();
  if (p == 0.5) {
    b.need_orders(b.count());
    b.separation();
  }
  const auto a = theorem_weights(b, p);
  const double I = b.count();
  const double w = b.in().omega_measure;
  const double c = 2.0 / std::sqrt(kTwoPi);
  double inv_min = 0.0, qb = 0.0;
  if (a) {
    for (double ai : *a) inv_min = std::max(inv_min, 1.0 / ai);
    for (int i = 0; i < b.count(); ++i) qb += c * inv_min * (*a)[i] * std::sqrt(w * b.in().support_sizes[i]);
    b.require("omega_smallness", qb, 1.0);
  }
  b.quantity("beta", a ? 1.0 - qb : NAN);
  const bool plus = b.in().sign == SignVariant::as_printed;
  for (int i = 0; i < b.count(); ++i) {
    if (!a) {
      b.quantity("alpha_" + idx(i), NAN);
      continue;
    }
    const double ai = (*a)[i];
    const double A = 4.0 * (I - 1.0) * ai * ai * b.in().support_sizes[i];
    const double B = c * inv_min * ai * std::sqrt(w * b.in().support_sizes[i]);
    b.require("smallness_" + idx(i), A + B, 1.0);
    b.quantity("alpha_" + idx(i), plus ? 1.0 - A + B : 1.0 - A - B);
  }
  b.note(plus ? "component constant as printed (+ before the Omega term)"
              : "conservative component constant (- before the Omega term)");
}

}  // namespace detail

/// Evaluates the selected estimate. Distances enter as k|c_i - c_j|.
/// Stability estimates bound squared errors by constant * perturbation^2
/// (least squares) or constant * 4 delta^2 (l1); uncertainty inequalities
/// bound |<alpha, T_c beta>| by constant * perturbation; conditioning
/// bounds are csc of the subspace angle.
inline BoundReport evaluate_bound(TheoremId id, const BoundInputs& in) {
  using detail::idx;
  detail::ReportBuilder b(id, in);
  switch (id) {
    case TheoremId::U_l0: {
      b.need_centers(2);
      b.need_supports(2);
      b.need_distinct();
      b.quantity("inner", std::sqrt(in.support_sizes[0] * in.support_sizes[1]) / std::cbrt(b.dist(0, 1)));
      break;
    }
    case TheoremId::U_band: {
      b.need_centers(2);
      b.need_orders(2);
      b.need_distinct();
      const int M = in.orders[0], N = in.orders[1];
      b.require("order_1_at_least_one", 1.0 - M, 1.0);
      b.require("order_2_at_least_one", 1.0 - N, 1.0);
      b.require("separation", 2.0 * (M + N + 1), b.dist(0, 1));
      b.quantity("inner", std::sqrt((2.0 * M + 1) * (2.0 * N + 1)) / std::sqrt(b.dist(0, 1)));
      break;
    }
    case TheoremId::U_mixed: {
      b.need_supports(1);
      b.need_omega();
      b.quantity("inner", std::sqrt(in.support_sizes[0] * in.omega_measure / kTwoPi));
      break;
    }
    case TheoremId::LS_two:
    case TheoremId::COND_two:
    case TheoremId::L1_two_band_apriori: {
      b.need_centers(2, true);
      b.need_orders(2);
      b.need_distinct();
      b.separation();
      const double q = (2.0 * in.orders[0] + 1) * (2.0 * in.orders[1] + 1) / b.dist(0, 1);
      b.require("smallness", q, 1.0);
      if (id == TheoremId::COND_two) {
        b.quantity("csc", 1.0 - q, 0.5);
      } else {
        b.quantity("alpha_1", 1.0 - q);
        b.quantity("alpha_2", 1.0 - q);
      }
      break;
    }
    case TheoremId::COND_point:
    case TheoremId::COND_music: {
      b.need_centers(2, true);
      b.need_distinct();
      double width = 1.0;
      if (id == TheoremId::COND_point) {
        b.need_orders(1);
        width = 2.0 * in.orders.back() + 1;
      }
      const double q = width / b.dist(0, 1);
      b.require("smallness", q, 1.0);
      b.quantity("csc", 1.0 - q, 0.5);
      break;
    }
    case TheoremId::LS_complete: {
      b.need_orders(1);
      b.need_omega();
      const double q = (2.0 * in.orders[0] + 1) * in.omega_measure / kTwoPi;
      b.require("smallness", q, 1.0);
      b.quantity("alpha_1", 1.0 - q);
      b.quantity("beta", 1.0 - q);
      break;
    }
    case TheoremId::LS_multi: {
      b.need_centers(2);
      b.need_orders(b.count());
      b.need_distinct();
      b.separation();
      for (int i = 0; i < b.count(); ++i) {
        double s = 0.0;
        for (int j = 0; j < b.count(); ++j)
          if (j != i) s += std::sqrt((2.0 * in.orders[j] + 1) / b.dist(i, j));
        const double q = std::sqrt(2.0 * in.orders[i] + 1) * s;
        b.require("smallness_" + idx(i), q, 1.0);
        b.quantity("alpha_" + idx(i), 1.0 - q);
      }
      break;
    }
    case TheoremId::LS_complete_multi: {
      b.need_centers(1);
      b.need_orders(b.count());
      b.need_omega();
      b.need_distinct();
      b.separation();
      const double r = std::sqrt(in.omega_measure / kTwoPi);
      double qb = 0.0;
      for (int i = 0; i < b.count(); ++i) qb += r * std::sqrt(2.0 * in.orders[i] + 1);
      b.require("omega_smallness", qb, 1.0);
      b.quantity("beta", 1.0 - qb);
      for (int i = 0; i < b.count(); ++i) {
        double s = r;
        for (int j = 0; j < b.count(); ++j)
          if (j != i) s += std::sqrt((2.0 * in.orders[j] + 1) / b.dist(i, j));
        const double q = std::sqrt(2.0 * in.orders[i] + 1) * s;
        b.require("smallness_" + idx(i), q, 1.0);
        b.quantity("alpha_" + idx(i), 1.0 - q);
      }
      b.note("pair terms use sqrt((2N_j+1)/|c_i-c_j|)");
      break;
    }
    case TheoremId::L1_two:
    case TheoremId::L1_two_band: {
      b.need_centers(2, true);
      b.need_supports(2);
      b.need_distinct();
      double p = 1.0 / 3.0;
      if (id == TheoremId::L1_two_band) {
        b.need_orders(2);
        b.separation();
        p = 0.5;
      }
      for (int i = 0; i < 2; ++i) {
        const double q = 4.0 * in.support_sizes[i] / std::pow(b.dist(0, 1), p);
        b.require("smallness_" + idx(i), q, 1.0);
        b.quantity("alpha_" + idx(i), 1.0 - q);
      }
      break;
    }
    case TheoremId::L1_complete: {
      b.need_supports(1);
      b.need_omega();
      const double q = 2.0 * in.support_sizes[0] * in.omega_measure / std::numbers::pi;
      b.require("smallness", q, 1.0);
      b.quantity("alpha_1", 1.0 - q);
      b.quantity("beta", 1.0 - q);
      break;
    }
    case TheoremId::L1_complete_unknown_omega: {
      b.need_supports(1);
      b.need_omega();
      if (!(in.tau > 0.0)) throw std::invalid_argument("evaluate_bound: tau must be > 0");
      const double c = 4.0 / std::sqrt(kTwoPi);
      const double qa = c * in.support_sizes[0] / (in.tau * in.tau);
      const double qb = c * in.tau * in.tau * in.omega_measure;
      b.require("support_smallness", qa, 1.0);
      b.require("omega_smallness", qb, 1.0);
      b.quantity("alpha_1", 1.0 - qa);
      b.quantity("beta", 1.0 - qb);
      break;
    }
    case TheoremId::L1_multi:
      detail::multi_split(b, 1.0 / 3.0);
      break;
    case TheoremId::L1_multi_band:
      detail::multi_split(b, 0.5);
      break;
    case TheoremId::L1_complete_multi:
      detail::multi_complete(b, 1.0 / 3.0, false);
      break;
    case TheoremId::L1_complete_multi_band:
      detail::multi_complete(b, 0.5, true);
      break;
    case TheoremId::L1_multi_weighted:
      detail::weighted_split(b, 1.0 / 3.0);
      break;
    case TheoremId::L1_multi_weighted_band:
      detail::weighted_split(b, 0.5);
      break;
    case TheoremId::L1_complete_multi_weighted:
      detail::weighted_complete(b, 1.0 / 3.0);
      break;
    case TheoremId::L1_complete_multi_weighted_band:
      detail::weighted_complete(b, 0.5);
      break;
  }
  return b.finish();
}

/// Bessel amplitude constant: J_n^2(r) <= b / r for |n| < M + N, r > 2(M+N+1).
inline const double kKrasikovB =
    (2.0 / std::numbers::pi) * (2.0 / std::sqrt(3.0)) / (1.0 - 1.0 / (6.0 * std::sqrt(27.0)));

/// Krasikov's bound on J_n^2(r), valid for r > sqrt(mu + mu^(3/2)) / 2 with
/// mu = (2n+1)(2n+3).
inline double krasikov_bound(int n, double r) {
  const double m = std::abs(static_cast<double>(n));
  const double mu = (2 * m + 1) * (2 * m + 3);
  if (!(r > 0.5 * std::sqrt(mu + std::pow(mu, 1.5))))
    throw std::invalid_argument("krasikov_bound: r below the validity threshold");
  return 4.0 * (4 * r * r - (2 * m + 1) * (2 * m + 5)) /
         (std::numbers::pi * (std::pow(4 * r * r - mu, 1.5) - mu));
}

/// max of r J_n(r)^2 over |n| < M + N and the given r > 2(M+N+1).
inline double krasikov_check(int M, int N, const std::vector<double>& r_samples) {
  if (M < 1 || N < 1) throw std::invalid_argument("krasikov_check: M, N must be >= 1");
  const double r0 = 2.0 * (M + N + 1);
  double mx = 0.0;
  for (double r : r_samples) {
    if (!(r > r0)) throw std::invalid_argument("krasikov_check: samples must exceed 2(M+N+1)");
    const auto j = bessel_j_table(M + N - 1, r);
    for (double v : j) mx = std::max(mx, r * v * v);
  }
  return mx;
}

struct UncertaintyStats {
  int trials = 0;
  int violations = 0;
  double max_ratio = 0.0;
};

/// Worker count: FARSPLIT_THREADS when set, else hardware concurrency.
inline int default_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FARSPLIT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = n > 0 ? std::min(n, cap) : cap;
  }
  return std::max(1, n);
}

/// lhs / rhs, with 0 / 0 read as 0 (degenerate inputs).
inline double bound_ratio(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  return lhs / rhs;
}

namespace detail {

inline std::vector<int> random_support(int count, int lo, int hi, std::mt19937_64& rng) {
  std::vector<int> all;
  for (int n = lo; n <= hi; ++n) all.push_back(n);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(count));
  std::sort(all.begin(), all.end());
  return all;
}

// |<alpha, T_c beta>| for sparse coefficient sequences (exact kernel).
inline cplx sparse_translated_inner(const std::vector<int>& ia, const std::vector<cplx>& a,
                                    const std::vector<int>& ib, const std::vector<cplx>& b, Vec2 c) {
  int span = 0;
  for (int m : ia)
    for (int n : ib) span = std::max(span, std::abs(m - n));
  const auto j = bessel_j_table(span, c.norm());
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  cplx s = 0.0;
  for (std::size_t p = 0; p < ia.size(); ++p) {
    cplx tb = 0.0;  // (T_c beta)_m
    for (std::size_t q = 0; q < ib.size(); ++q) {
      const int d = ia[p] - ib[q];
      const int ad = std::abs(d);
      const double jd = (d < 0 && ad % 2) ? -j[ad] : j[ad];
      tb += b[q] * kIPow[((d % 4) + 4) % 4] * jd * std::polar(1.0, -d * c.angle());
    }
    s += a[p] * std::conj(tb);
  }
  return s;
}

inline double l2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

inline double uncertainty_trial(TheoremId id, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double phi = kTwoPi * u(rng);
  if (id == TheoremId::U_l0) {
    const bool singleton = u(rng) < 0.25;
    std::uniform_int_distribution<int> sd(1, 12);
    const int sa = singleton ? 1 : sd(rng), sb = singleton ? 1 : sd(rng);
    const auto ia = random_support(sa, -40, 40, rng), ib = random_support(sb, -40, 40, rng);
    const auto a = complex_gaussian(ia.size(), rng), b = complex_gaussian(ib.size(), rng);
    const double r = std::exp(std::log(200.0) * u(rng));  // |c| in [1, 200]
    const Vec2 c{r * std::cos(phi), r * std::sin(phi)};
    const double lhs = std::abs(sparse_translated_inner(ia, a, ib, b, c));
    BoundInputs in;
    in.centers = {{0, 0}, c};
    in.support_sizes = {double(sa), double(sb)};
    in.perturbation = l2(a) * l2(b);
    return bound_ratio(lhs, evaluate_bound(TheoremId::U_l0, in).rhs);
  }
  if (id == TheoremId::U_band) {
    std::uniform_int_distribution<int> od(1, 8);
    const int M = od(rng), N = od(rng);
    const double r0 = 2.0 * (M + N + 1);
    const double r = u(rng) < 0.25 ? r0 * (1.0 + 1e-2 * u(rng) + 1e-12) : r0 * (1.0 + 3.0 * u(rng) + 1e-12);
    const Vec2 c{r * std::cos(phi), r * std::sin(phi)};
    std::vector<int> ia, ib;
    for (int n = -M; n <= M; ++n) ia.push_back(n);
    for (int n = -N; n <= N; ++n) ib.push_back(n);
    const auto a = complex_gaussian(ia.size(), rng), b = complex_gaussian(ib.size(), rng);
    const double lhs = std::abs(sparse_translated_inner(ia, a, ib, b, c));
    BoundInputs in;
    in.centers = {{0, 0}, c};
    in.orders = {M, N};
    in.perturbation = l2(a) * l2(b);
    return bound_ratio(lhs, evaluate_bound(TheoremId::U_band, in).rhs);
  }
  // Mixed: sparse coefficients against a field supported on one arc, on
  // a 512-point grid with the grid measure of the arc.
  const AngularGrid grid(512);
  std::uniform_int_distribution<int> sd(1, 12);
  const auto ia = random_support(sd(rng), -60, 60, rng);
  const auto a = complex_gaussian(ia.size(), rng);
  const double r = 100.0 * u(rng);
  const Vec2 c{r * std::cos(phi), r * std::sin(phi)};
  const double start = kTwoPi * u(rng);
  const ArcMask omega({{start, start + std::numbers::pi * (0.02 + 0.98 * u(rng))}});
  const auto pts = omega.grid_indices(grid);
  const auto bv = complex_gaussian(pts.size(), rng);
  const auto ph = translation_phases(grid, c, 1.0);
  cplx s = 0.0;
  for (std::size_t q = 0; q < pts.size(); ++q) {
    const double t = grid.angle(pts[q]);
    cplx v = 0.0;
    for (std::size_t p = 0; p < ia.size(); ++p) v += a[p] * std::polar(1.0, ia[p] * t);
    s += ph[pts[q]] * v / std::sqrt(kTwoPi) * std::conj(bv[q]);
  }
  const double lhs = std::abs(grid.weight() * s);
  BoundInputs in;
  in.support_sizes = {double(ia.size())};
  in.omega_measure = grid.weight() * static_cast<double>(pts.size());
  in.perturbation = l2(a) * l2(bv) * std::sqrt(grid.weight());
  return bound_ratio(lhs, evaluate_bound(TheoremId::U_mixed, in).rhs);
}

}  // namespace detail

/// Randomized instances of an uncertainty inequality; trial t uses its own
/// generator seeded from (seed, t), so results do not depend on threads.
inline UncertaintyStats verify_uncertainty(TheoremId id, int trials, std::uint64_t seed, int threads = 0) {
  if (theorem_family(id) != BoundFamily::uncertainty)
    throw std::invalid_argument("verify_uncertainty: not an uncertainty inequality");
  if (trials < 1) throw std::invalid_argument("verify_uncertainty: trials must be >= 1");
  const int workers = std::min(trials, threads > 0 ? threads : default_threads());
  std::vector<UncertaintyStats> part(static_cast<std::size_t>(workers));
  auto run = [&](int w) {
    for (int t = w; t < trials; t += workers) {
      std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(id)};
      std::mt19937_64 rng(ss);
      const double ratio = detail::uncertainty_trial(id, rng);
      part[w].trials++;
      part[w].max_ratio = std::max(part[w].max_ratio, ratio);
      if (!(ratio <= 1.0)) part[w].violations++;
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& th : pool) th.join();
  UncertaintyStats out;
  for (const auto& p : part) {
    out.trials += p.trials;
    out.violations += p.violations;
    out.max_ratio = std::max(out.max_ratio, p.max_ratio);
  }
  return out;
}

}  // namespace farsplit
