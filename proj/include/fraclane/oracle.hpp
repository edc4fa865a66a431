#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fraclane/params.hpp"
#include "fraclane/sector.hpp"

namespace fraclane {

struct OracleOptions {
  /// Largest excluded radius; 0 picks a quarter of the distance to the boundary.
  double epsilon = 0.0;
  /// Number of halvings of epsilon (at least 3).
  int levels = 4;
  /// Directions on the half circle (N = 2) or Gauss nodes in cos(angle) (N = 3).
  int n_angular = 32;
  /// Relative tolerance of each one-dimensional integral.
  double ray_tolerance = 1e-12;
  /// Reported error above this relative size flags the result.
  double flag_tolerance = 1e-5;
};

struct OracleResult {
  double value = 0.0;
  double error = 0.0;  ///< extrapolation + angular + rounding estimate
  bool converged = false;
  std::vector<double> epsilons;
  std::vector<double> truncated;  ///< integral outside B_eps(x) per level
};

/// Brute-force (-Delta)^s f(x) for f supported in the closed ball B_R:
/// (c/2) int_{S^{N-1}} int_eps^inf (2f(x) - f(x+r w) - f(x-r w)) r^{-1-2s} dr dw,
/// rays split where they leave the ball, tails integrated in closed form, and
/// epsilon -> 0 by Richardson extrapolation in eps^{2-2s}, eps^{4-2s}.
/// Supported for N = 1, 2, 3.
OracleResult quadrature_oracle(const std::function<double(std::span<const double>)>& f,
                               const FracParams& params, std::span<const double> x,
                               const OracleOptions& options = {});
OracleResult quadrature_oracle(const Field& f, std::span<const double> x,
                               const OracleOptions& options = {});

}  // namespace fraclane
