#pragma once

// Least-squares splitting and data completion: the Galerkin system for the
// subspaces V_Omega = L^2(Omega) and V_i = T_{c_i}^* l^2(-N_i, N_i), its
// solution, and the angle between two translated coefficient subspaces.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "farsplit/farfield.hpp"

namespace farsplit {

/// Geometry that makes the problem ill posed (reported before any solve).
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerically singular system.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition_number() const { return condition_; }

 private:
  double condition_;
};

inline constexpr double kMaxConditionNumber = 1e12;

struct SplitGeometry {
  double k = 1.0;
  AngularGrid grid{512};
  std::vector<Vec2> centers;
  std::vector<int> orders;  // N_i; ignored by the l1 solver
  ArcMask omega;

  int components() const { return static_cast<int>(centers.size()); }
};

inline void validate_geometry(const SplitGeometry& g, bool need_orders = true) {
  if (!(g.k > 0.0) || !std::isfinite(g.k)) throw GeometryError("wave number must be > 0");
  if (g.centers.empty()) throw GeometryError("geometry has no components");
  for (std::size_t i = 0; i < g.centers.size(); ++i)
    for (std::size_t j = i + 1; j < g.centers.size(); ++j)
      if (g.centers[i] == g.centers[j])
        throw GeometryError("components " + std::to_string(i) + " and " + std::to_string(j) +
                            " share a center");
  if (!need_orders) return;
  if (g.orders.size() != g.centers.size())
    throw GeometryError("need one order per component");
  for (int N : g.orders)
    if (N < 0 || 8 * N > g.grid.size())
      throw GeometryError("order " + std::to_string(N) + " outside [0, grid_size/8]");
}

struct SolveDiagnostics {
  double condition_number = 0.0;
  std::string method;
  int iterations = 0;
  double objective = 0.0;
};

struct SplitSolution {
  std::vector<CoeffWindow> alphas;  // component frame
  FarField beta;                    // supported on Omega
  double residual = 0.0;
  SolveDiagnostics diagnostics;
};

/// Far field T_c^* of a component-frame window.
inline FarField component_field(const CoeffWindow& w, Vec2 c, double k, const AngularGrid& grid) {
  return translate_adjoint(w.to_farfield(grid), c, k);
}

/// beta + sum_i T_{c_i}^* alpha_i.
inline FarField synthesize(const SplitSolution& s, const SplitGeometry& g) {
  FarField f = s.beta;
  for (int i = 0; i < g.components(); ++i)
    f = f + component_field(s.alphas[i], g.centers[i], g.k, g.grid);
  return f;
}

/// Orthogonal projection onto T_c^* l^2(-N, N).
inline FarField project_component(const FarField& alpha, Vec2 c, int N, double k = 1.0) {
  const auto w = CoeffWindow::from_farfield(translate(alpha, c, k), N);
  return component_field(w, c, k, alpha.grid());
}

/// Orthogonal projection onto L^2(Omega).
inline FarField project_mask(const FarField& alpha, const ArcMask& omega) {
  return mask(alpha, omega, Region::inside);
}

/// Dense Galerkin system in the basis of unit pulses at the grid points of
/// Omega followed by the translated Fourier modes of each component. Both
/// families are orthonormal for the grid inner product, so the diagonal
/// blocks of the Gram matrix are identities.
class GalerkinSystem {
 public:
  static GalerkinSystem assemble(const SplitGeometry& geometry) {
    validate_geometry(geometry);
    GalerkinSystem sys;
    sys.geometry_ = geometry;
    const auto& grid = geometry.grid;
    const int M = grid.size();
    sys.omega_points_ = geometry.omega.grid_indices(grid);
    int dim = static_cast<int>(sys.omega_points_.size());
    for (int N : geometry.orders) {
      sys.offsets_.push_back(dim);
      dim += 2 * N + 1;
    }
    const double w = grid.weight();
    sys.basis_ = Eigen::MatrixXcd::Zero(M, dim);
    for (int q = 0; q < static_cast<int>(sys.omega_points_.size()); ++q)
      sys.basis_(sys.omega_points_[q], q) = 1.0 / std::sqrt(w);
    const double norm = 1.0 / std::sqrt(kTwoPi);
    for (int i = 0; i < geometry.components(); ++i) {
      const auto ph = translation_phases(grid, geometry.centers[i], geometry.k);
      const int N = geometry.orders[i];
      for (int n = -N; n <= N; ++n)
        for (int j = 0; j < M; ++j)
          sys.basis_(j, sys.offsets_[i] + n + N) =
              norm * std::conj(ph[j]) * std::polar(1.0, n * grid.angle(j));
    }
    sys.matrix_ = w * sys.basis_.adjoint() * sys.basis_;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys.matrix_);
    const auto& sv = svd.singularValues();
    sys.condition_ = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                             : std::numeric_limits<double>::infinity();
    sys.qr_.compute(sys.matrix_);
    return sys;
  }

  const SplitGeometry& geometry() const { return geometry_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  /// Sample values of the basis functions, one column per unknown.
  const Eigen::MatrixXcd& basis() const { return basis_; }
  const std::vector<int>& omega_points() const { return omega_points_; }
  int dimension() const { return static_cast<int>(matrix_.rows()); }
  int offset(int component) const { return offsets_.at(component); }
  double condition_number() const { return condition_; }

  /// Right-hand side <gamma, basis_q>.
  Eigen::VectorXcd rhs(const FarField& gamma) const {
    if (!(gamma.grid() == geometry_.grid)) throw std::invalid_argument("solve: grid mismatch");
    Eigen::Map<const Eigen::VectorXcd> g(gamma.samples().data(), gamma.size());
    return geometry_.grid.weight() * (basis_.adjoint() * g);
  }

  /// Unpacks a coefficient vector of the basis into a solution.
  SplitSolution unpack(const Eigen::VectorXcd& x, const FarField& gamma) const {
    const auto& grid = geometry_.grid;
    SplitSolution s;
    std::vector<cplx> b(static_cast<std::size_t>(grid.size()));
    for (int q = 0; q < static_cast<int>(omega_points_.size()); ++q)
      b[omega_points_[q]] = x(q) / std::sqrt(grid.weight());
    s.beta = FarField::from_samples(grid, std::move(b));
    for (int i = 0; i < geometry_.components(); ++i) {
      const int N = geometry_.orders[i];
      CoeffWindow w(N);
      for (int n = -N; n <= N; ++n) w.at(n) = x(offsets_[i] + n + N);
      s.alphas.push_back(std::move(w));
    }
    s.residual = norm2(gamma - synthesize(s, geometry_));
    s.diagnostics.condition_number = condition_;
    s.diagnostics.method = "ls";
    return s;
  }

  SplitSolution solve(const FarField& gamma) const {
    if (!(condition_ <= kMaxConditionNumber))
      throw SingularSystemError("Galerkin system is numerically singular (condition number " +
                                    std::to_string(condition_) + ")",
                                condition_);
    return unpack(qr_.solve(rhs(gamma)), gamma);
  }

 private:
  SplitGeometry geometry_;
  std::vector<int> omega_points_;
  std::vector<int> offsets_;
  Eigen::MatrixXcd basis_;
  Eigen::MatrixXcd matrix_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr_;
  double condition_ = 0.0;
};

inline SplitSolution split_ls(const FarField& gamma, const SplitGeometry& geometry) {
  return GalerkinSystem::assemble(geometry).solve(gamma);
}

struct SubspaceConditioning {
  double cos_angle = 0.0;
  double csc_angle = 0.0;
  bool bound_feasible = false;
  double bound_csc = std::numeric_limits<double>::infinity();
};

/// Cross Gram matrix <T_{c1}^* e_m, T_{c2}^* e_n> = i^{m-n} J_{m-n}(k|d|)
/// e^{-i(m-n) phi_d} with d = c1 - c2, for |m| <= N1, |n| <= N2.
inline Eigen::MatrixXcd cross_gram(Vec2 c1, int N1, Vec2 c2, int N2, double k) {
  const auto [K, ker] = translation_kernel(c1 - c2, k);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(2 * N1 + 1, 2 * N2 + 1);
  for (int m = -N1; m <= N1; ++m)
    for (int n = -N2; n <= N2; ++n)
      if (std::abs(m - n) <= K) G(m + N1, n + N2) = ker[m - n + K];
  return G;
}

/// Angle between T_{c1}^* l^2(-N1,N1) and T_{c2}^* l^2(-N2,N2): cos is the
/// norm of P_1 P_2, computed from the exact cross Gram matrix.
inline SubspaceConditioning subspace_conditioning(Vec2 c1, int N1, Vec2 c2, int N2, double k) {
  if (c1 == c2) throw GeometryError("subspace_conditioning: centers coincide");
  if (N1 < 0 || N2 < 0) throw GeometryError("subspace_conditioning: orders must be >= 0");
  const auto G = cross_gram(c1, N1, c2, N2, k);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
  SubspaceConditioning out;
  out.cos_angle = std::min(1.0, svd.singularValues()(0));
  const double s2 = 1.0 - out.cos_angle * out.cos_angle;
  out.csc_angle = s2 > 0.0 ? 1.0 / std::sqrt(s2) : std::numeric_limits<double>::infinity();
  const double q = double(2 * N1 + 1) * (2 * N2 + 1) / (k * (c1 - c2).norm());
  out.bound_feasible = q < 1.0;
  if (out.bound_feasible) out.bound_csc = 1.0 / std::sqrt(1.0 - q);
  return out;
}

}  // namespace farsplit
