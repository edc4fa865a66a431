#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fraclane/discrete.hpp"
#include "fraclane/params.hpp"
#include "fraclane/sector.hpp"

namespace fraclane {

struct SolverOptions {
  /// Required weak-form residual ||F||_{A^-1} / ||u||_A of the final iterate.
  double tolerance = 1e-10;
  /// Preconditioned-gradient stationarity at which the Newton phase starts.
  double switch_tolerance = 1e-6;
  int max_gradient_iterations = 2000;
  int max_newton_iterations = 60;
  /// Nonlinear quadrature sizes (<= 0: defaults of DiscreteSpace).
  int radial_nodes = 0;
  int angular_nodes = 0;
};

struct FirstEigenpair {
  double lambda1 = 0.0;
  /// L^2-normalized, positive.
  SectorFunction phi1;
};

/// Smallest generalized eigenvalue of (A, B) in sector 0 and its eigenfunction.
FirstEigenpair first_eigenvalue(const FracParams& params, int modes);

struct QuotientMinimum {
  /// Minimum of ([v]^2 - lambda |v|_2^2) / |v|_{p+1}^2.
  double m = 0.0;
  /// Minimizer with int |phi|^{p+1} = 1 and int phi >= 0.
  Field phi;
  Eigen::VectorXd coeffs;
  std::shared_ptr<const DiscreteSpace> space;
  /// Stationarity residual of the normalized minimizer.
  double residual = 0.0;
  int iterations = 0;
};

/// Projected/preconditioned gradient descent (Barzilai-Borwein steps, Armijo
/// backtracking) on the L^{p+1} unit sphere, followed by damped Newton on the
/// Euler-Lagrange system. Throws CoercivityError when lambda >= lambda_1 and
/// ConvergenceError when the residual target is missed.
QuotientMinimum minimize_quotient(const FracParams& params, int modes,
                                  const std::optional<Field>& init = std::nullopt,
                                  const SolverOptions& options = {});
/// Same, in a given (possibly multi-sector) space from an initial coefficient vector.
QuotientMinimum minimize_quotient(std::shared_ptr<const DiscreteSpace> space,
                                  const Eigen::VectorXd& init, double lambda1,
                                  const SolverOptions& options = {});

struct GroundState {
  FracParams params;
  /// Least-energy solution u = m^{1/(p-1)} phi.
  SectorFunction u;
  double m = 0.0;
  double lambda1 = 0.0;
  SectorFunction phi1;
  /// Weak-form residual ||(A - lambda B) c - g(c)||_{A^-1} / ||c||_A.
  double residual = 0.0;
  /// Boundary trace u / d^s (constant over the sphere).
  double trace = 0.0;
  double min_interior = 0.0;
  /// Largest increase of u between consecutive radii, relative to max u.
  double monotonicity_violation = 0.0;
  bool positive = false;
  bool monotone = false;
  int iterations = 0;
  std::shared_ptr<const DiscreteSpace> space;
  Eigen::VectorXd coeffs;
};

/// Radial least-energy solution with its certificate. Throws CoercivityError
/// when lambda >= lambda_1 and ConvergenceError when the residual is too large.
GroundState ground_state(const FracParams& params, int modes, const SolverOptions& options = {},
                         const std::optional<Field>& init = std::nullopt);

/// Weak-form residual of coefficients c in a space: ||F||_{A^-1} / ||c||_A with
/// F = (A - lambda B) c - int |u|^{p-1} u phi.
double weak_residual(const DiscreteSpace& space, const Eigen::VectorXd& c);

struct MultistartRun {
  bool converged = false;
  std::string error;
  double m = 0.0;
  double residual = 0.0;
  /// L^2 norm of the nonradial part of the converged solution.
  double nonradial_norm = 0.0;
  Eigen::VectorXd coeffs;
};

struct UniquenessReport {
  int runs = 0;
  int failures = 0;
  double max_l2_distance = 0.0;
  double energy_spread = 0.0;
  std::vector<MultistartRun> details;
};

/// K random (nonradial, sign-changing) initial points in sectors 0..ell_max;
/// converged solutions are compared after fixing the sign by int u >= 0.
UniquenessReport multistart_uniqueness(const FracParams& params, int K, std::uint64_t seed,
                                       int modes = 24, int ell_max = 2,
                                       const SolverOptions& options = {});

}  // namespace fraclane
