#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "fraclane/params.hpp"
#include "fraclane/sector.hpp"
#include "fraclane/special.hpp"

namespace fraclane {

/// Coefficient space spanned by sectors 0..ell_max with `modes` radial modes
/// each, plus one tensor quadrature used for every nonlinear integral
/// (int |u|^{p+1}, int |u|^{p-1} u phi, int |u|^{p-1} phi phi). Using a single
/// rule keeps the discrete weak form, energy and linearization consistent.
/// The radial rule has exponent s(p+1) at the boundary.
class DiscreteSpace {
 public:
  /// radial_nodes / angular_nodes <= 0 pick defaults (3 modes + 16, 8 ell_max + 16).
  DiscreteSpace(const FracParams& params, int modes, int ell_max = 0, int radial_nodes = 0,
                int angular_nodes = 0);

  const FracParams& params() const { return params_; }
  int modes() const { return modes_; }
  int ell_max() const { return ell_max_; }
  int dim() const { return modes_ * (ell_max_ + 1); }
  int offset(int ell) const { return ell * modes_; }
  const std::shared_ptr<const SectorBasis>& basis(int ell) const { return bases_[ell]; }

  const Eigen::VectorXd& stiffness() const { return stiffness_; }
  const Eigen::MatrixXd& mass() const { return mass_; }

  const RadialRule& radial() const { return radial_; }
  const AngularRule& angular() const { return angular_; }
  /// Basis values at the tensor nodes (rows = nodes, node = k * n_angular + j).
  const Eigen::MatrixXd& table() const { return table_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  Eigen::VectorXd nodal(const Eigen::VectorXd& c) const { return table_ * c; }
  /// int |u|^{p+1}
  double power_integral(const Eigen::VectorXd& c) const;
  /// (int |u|^{p-1} u phi_i)_i
  Eigen::VectorXd power_gradient(const Eigen::VectorXd& c) const;
  /// (int |u|^{p-1} phi_i phi_j)_{ij}
  Eigen::MatrixXd power_potential(const Eigen::VectorXd& c) const;

  Field field(const Eigen::VectorXd& c) const;
  /// Coefficients of f in this space (modes beyond `modes` must vanish).
  Eigen::VectorXd coefficients(const Field& f) const;

 private:
  FracParams params_;
  int modes_;
  int ell_max_;
  std::vector<std::shared_ptr<const SectorBasis>> bases_;
  Eigen::VectorXd stiffness_;
  Eigen::MatrixXd mass_;
  RadialRule radial_;
  AngularRule angular_;
  Eigen::MatrixXd table_;
  Eigen::VectorXd weights_;
};

}  // namespace fraclane
