#pragma once

#include <functional>
#include <span>
#include <string>

#include "fraclane/ground_state.hpp"
#include "fraclane/sector.hpp"

namespace fraclane {

struct PohozaevOptions {
  int radial_nodes = 0;   ///< <= 0: enough for exact integration of the sector products
  int angular_nodes = 0;  ///< <= 0: likewise
};

/// Terms of
///   int ((x - c e_1).grad u) (-Delta)^s v + int ((x - c e_1).grad v) (-Delta)^s u
///   = (s - N/2) [int u (-Delta)^s v + int v (-Delta)^s u]
///     - Gamma(1+s)^2 int_{dB} (u/d^s)(v/d^s) ((x - c e_1).nu).
struct PohozaevReport {
  double center = 0.0;
  double lhs = 0.0;
  double rhs_interior = 0.0;
  double rhs_boundary = 0.0;
  /// |lhs - rhs_interior - rhs_boundary| over the largest of the three
  /// quadrature sums taken in absolute value (terms can vanish by parity)
  double residual = 0.0;
};

/// Evaluated with exact spectral images and gradients; the identity holds for
/// any pair of functions in the basis, solutions or not.
PohozaevReport bilinear_pohozaev(const Field& u, const Field& v, double center,
                                 const PohozaevOptions& options = {});
/// Rejects ground states whose residual exceeds 1e-8.
PohozaevReport bilinear_pohozaev(const GroundState& u, const Field& v, double center,
                                 const PohozaevOptions& options = {});

struct InteriorReduction {
  double up_v = 0.0;  ///< int |u|^{p-1} u v
  double u_v = 0.0;   ///< int u v
};

InteriorReduction interior_reduction_check(const Field& u, const Field& v, double p);
InteriorReduction interior_reduction_check(const GroundState& u, const Field& v);

struct FluxReport {
  double value = 0.0;  ///< int_{dB} (v/d^s) (e.nu)
  double error = 0.0;  ///< boundary quadrature error estimate
};

/// e has N components.
FluxReport boundary_flux(const Field& v, std::span<const double> e, int n_angular = 32);

struct HopfReport {
  double trace = 0.0;      ///< mean of u/d^s over the boundary nodes
  double deviation = 0.0;  ///< max |trace_j - mean| / |mean|
  bool positive = false;
  bool vanishing = false;
  std::string convention;
};

HopfReport hopf_check(const GroundState& u, int n_angular = 32);
/// Extrapolated trace of an arbitrary function supported in the ball.
HopfReport hopf_check(const std::function<double(const AxialPoint&)>& f, const FracParams& params,
                      int n_angular = 32, double zero_tolerance = 1e-6);

}  // namespace fraclane
