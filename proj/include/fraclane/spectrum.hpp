#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "fraclane/ground_state.hpp"
#include "fraclane/sector.hpp"

namespace fraclane {

/// Lowest eigenpairs of A - p P_u - lambda B against B in one sector.
struct SectorEigenpairs {
  int ell = 0;
  Eigen::VectorXd mu;
  /// B-orthonormal eigenfunctions; signs fixed so the boundary trace is
  /// positive at t = 1 (for ell = 1: positive on the half-ball x_1 > 0).
  std::vector<SectorFunction> vectors;
};

/// modes <= 0 uses the ground state's basis size.
SectorEigenpairs linearized_sector_spectrum(const GroundState& u, int ell, int k, int modes = 0);

/// int u^{p-1} phi_m phi_n over a sector basis, with the ground state's nonlinear rule.
Eigen::MatrixXd ground_potential(const GroundState& u, const SectorBasis& basis);

struct SpectrumEntry {
  double mu = 0.0;
  int ell = 0;
  int index = 0;  ///< position inside its sector
  /// Number of linearly independent eigenfunctions (spherical-harmonic dimension).
  long multiplicity = 1;
  SectorFunction v;
};

struct SpectrumOptions {
  int ell_max = 4;
  int k = 6;
  /// Compute the ground state and spectrum again with modes + refine_step to
  /// estimate the discretization error of the eigenvalues.
  bool refine = true;
  int refine_step = 8;
  SolverOptions solver;
};

struct SpectrumResult {
  std::vector<SpectrumEntry> entries;  ///< sorted by (mu, ell)
  int morse_index = 0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  int mu2_ell = -1;
  /// mu2 (the nondegeneracy margin is its distance to zero).
  double margin = 0.0;
  double gap = 0.0;  ///< mu2 - mu1
  /// max |mu(M) - mu(M + refine_step)| over the lowest entries; 0 without refinement.
  double refinement_delta = 0.0;
  /// Lowest eigenvalue of the last sector (guard against truncation).
  double last_sector_min = 0.0;
  int ell_max = 0;
  int modes = 0;
  const SpectrumEntry* first_in_sector(int ell) const;
};

/// Merged spectrum of sectors 0..ell_max. Throws InvalidArgument when the last
/// sector's lowest eigenvalue does not exceed mu2 (ell_max too small).
SpectrumResult full_spectrum(const GroundState& u, const SpectrumOptions& options = {});

/// J(v) = ([v]^2 - p int u^{p-1} v^2 - lambda int v^2) / int v^2.
double rayleigh_J(const GroundState& u, const Field& v);

struct SecondVariation {
  double quadratic = 0.0;  ///< [w]^2 - lambda int w^2 - p int u^{p-1} w^2
  double coupling = 0.0;   ///< int u^p w
  /// quadratic + (p+1)/2 m^{-2p/(p-1)} coupling^2
  double printed = 0.0;
  /// quadratic + (p-1) m^{-(p+1)/(p-1)} coupling^2: second derivative of the
  /// quotient at u in direction w (times its positive normalization).
  double derived = 0.0;
};

SecondVariation second_variation_check(const GroundState& u, double m, const Field& w);

/// int u^p w with the ground state's nonlinear rule.
double power_moment(const GroundState& u, const Field& w);

struct MinimaxReport {
  /// inf of J over axially symmetric w orthogonal (L^2) to the constraint.
  double restricted_inf = 0.0;
  /// inf over all of the orthogonal complement: non-axisymmetric copies of
  /// ell >= 1 sectors are orthogonal to any axisymmetric constraint.
  double inf = 0.0;
  double mu2 = 0.0;
  bool lower_ok = false;  ///< inf >= -tol
  bool upper_ok = false;  ///< inf <= mu2 + tol
};

enum class MinimaxConstraint { PowerOfU, FirstEigenfunction };

MinimaxReport minimax_check(const GroundState& u, const SpectrumResult& spectrum,
                            MinimaxConstraint which, double tol = 1e-8);
/// E = span{e} for an arbitrary axially symmetric e.
MinimaxReport minimax_check(const GroundState& u, const SpectrumResult& spectrum, const Field& e,
                            double tol = 1e-8);

struct EigenIdentity {
  double lhs = 0.0;  ///< (1 - p) int u^p v
  double rhs = 0.0;  ///< mu int u v
  /// |lhs - rhs| / ((p-1) |u^p|_2 |v|_2 + |mu| |u|_2 |v|_2)
  double residual = 0.0;
};

EigenIdentity eigen_identity_check(const GroundState& u, double mu, const Field& v);

}  // namespace fraclane
