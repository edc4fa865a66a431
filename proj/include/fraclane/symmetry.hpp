#pragma once

#include <memory>

#include "fraclane/ground_state.hpp"
#include "fraclane/grid.hpp"

namespace fraclane {

/// Hyperplane H_a = {x_1 = a}; Sigma_a^+ = {x_1 >= a}. Other axes are handled
/// by rotating the function.
struct PolarizationPlane {
  double a = 0.0;
};

/// Throws InvalidArgument unless |a| < R.
PolarizationPlane make_plane(double a, double R);

struct Polarized {
  GridFunction value;
  /// (P_a v)^- vanishes at every node outside B.
  bool admissible = false;
};

/// min(v(x), v(x̄)) on Sigma_a^+, max on Sigma_a^-; values beyond the node set are 0.
Polarized polarize(const GridFunction& v, const PolarizationPlane& plane);

/// Pieces of  <v, v^+> - p int u^{p-1} (v^+)^2 - lambda int (v^+)^2  (plus side) and
/// -<v, v^-> + p int u^{p-1} (v^-)^2 + lambda int (v^-)^2  (minus side).
struct PolarizationTerms {
  double gagliardo = 0.0;
  double potential = 0.0;
  double mass = 0.0;
  double total = 0.0;
};

struct PolarizationReport {
  PolarizationTerms plus_v, plus_pv, minus_v, minus_pv;
  double slack_plus = 0.0;   ///< plus_v.total - plus_pv.total
  double slack_minus = 0.0;  ///< minus_v.total - minus_pv.total
  double l2_defect = 0.0;    ///< |int (P_a v)^2 - int v^2|
  double gagliardo_drop = 0.0;  ///< <v, v> - <P_a v, P_a v>
  /// Minus side with the potential and lambda terms entering as
  /// -<v, v^-> - p int u^{p-1} (v^-)^2 - lambda int (v^-)^2 (diagnostic only).
  double slack_minus_substituted = 0.0;
};

/// Needs a lattice grid (kernel form); throws when P_a v is not admissible.
PolarizationReport polarization_report(const GridFunction& v, const PolarizationPlane& plane,
                                       const GroundState& u);

/// With v^- = max(-v, 0) and the shifted form
/// b(f, g) = <f, g> - p int u^{p-1} f g - lambda int f g, the premises are
/// mu2 int (v^+)^2 >= b(v, v^+) and mu2 int (v^-)^2 >= -b(v, v^-), i.e.
struct VariationalReport {
  /// mu2 int (v^+)^2 - (<v, v^+> - p int u^{p-1} (v^+)^2 - lambda int (v^+)^2)
  double slack_plus = 0.0;
  /// mu2 int (v^-)^2 - (-<v, v^-> - p int u^{p-1} (v^-)^2 - lambda int (v^-)^2)
  double slack_minus = 0.0;
  double scale = 0.0;
  bool holds = false;
};

/// Both premises within tol * scale; <v, v^±> uses the exact image of v
/// paired with v^± on the grid. Throws when v is one-signed on the grid.
VariationalReport variational_principle_check(const Field& v, std::shared_ptr<const Grid> grid,
                                              const GroundState& u, double mu2, double tol = 1e-8);
/// Grid-only variant (lattice kernel form for <v, v^±>).
VariationalReport variational_principle_check(const GridFunction& v, const GroundState& u, double mu2,
                                              double tol);

struct Antisymmetrized {
  GridFunction value;  ///< w(x) - w(x̄)
  bool vanishes = false;
};

Antisymmetrized antisymmetrize(const GridFunction& w, const PolarizationPlane& plane = {});

struct FoliatedSchwarzReport {
  /// max |v(r, theta) - v(r, -theta)| / max |v|
  double axial_residual = 0.0;
  /// max increase of v along increasing angle to e_1, relative to max |v|
  double monotonicity_violation = 0.0;
  bool passes = false;
};

/// Needs a polar grid.
FoliatedSchwarzReport foliated_schwarz_check(const GridFunction& v, double tol = 1e-10);

struct NodalReport {
  int regions = 0;
  int positive_regions = 0;
  int negative_regions = 0;
  int unassigned = 0;
  /// Sign is constant on {x_1 > 0} and on {x_1 < 0} (opposite signs).
  bool half_ball_split = false;
  /// Largest number of sign changes along a ray from the origin (polar grids).
  int radial_sign_changes = 0;
};

/// Nodes with |v| <= threshold * max |v| are unassigned and do not merge regions.
NodalReport nodal_structure(const GridFunction& v, double threshold = 1e-10);

}  // namespace fraclane
