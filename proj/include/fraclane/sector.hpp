#pragma once

#include <Eigen/Core>
#include <memory>
#include <span>
#include <vector>

#include "fraclane/params.hpp"
#include "fraclane/special.hpp"

namespace fraclane {

/// A point of R^N given by its distance to the origin and t = x_1 / |x|.
/// Every function handled by the spectral path is axially symmetric about e_1,
/// so (r, t) is all the evaluation needs.
struct AxialPoint {
  double r = 0.0;
  double t = 1.0;
};

/// Axial coordinates of a point of R^N (x.size() == N).
AxialPoint axial(std::span<const double> x);

/// Radial modes of one angular sector ell:
///   phi_n(x) = (1 - |x/R|^2)_+^s |x/R|^ell p_n(2|x/R|^2 - 1) Y_ell(x_1/|x|),
/// p_n orthonormal Jacobi with exponents (s, N/2 + ell - 1). The fractional
/// Laplacian maps phi_n to Lambda_n R^{-2s} |x/R|^ell p_n(.) Y_ell on B.
class SectorBasis {
 public:
  static std::shared_ptr<const SectorBasis> make(const FracParams& params, int ell, int modes);

  const FracParams& params() const { return params_; }
  int ell() const { return ell_; }
  int modes() const { return modes_; }
  double beta() const { return family_.beta(); }
  const OrthoJacobi& family() const { return family_; }
  const ZonalHarmonic& harmonic() const { return harmonic_; }

  /// Lambda_n R^{-2s}: multiplier of mode n under (-Delta)^s.
  double image_multiplier(int n) const { return multipliers_[n]; }
  /// Diagonal of the stiffness matrix int phi_n (-Delta)^s phi_n.
  const Eigen::VectorXd& stiffness() const { return stiffness_; }
  /// Mass matrix int_B phi_m phi_n (exact Gauss-Jacobi assembly).
  const Eigen::MatrixXd& mass() const { return mass_; }

  /// Basis functions' radial parts (1-rho^2)^s rho^ell p_n at radius r.
  void radial_values(double r, std::span<double> out) const;

 private:
  SectorBasis(const FracParams& params, int ell, int modes);

  FracParams params_;
  int ell_;
  int modes_;
  OrthoJacobi family_;
  ZonalHarmonic harmonic_;
  std::vector<double> multipliers_;
  Eigen::VectorXd stiffness_;
  Eigen::MatrixXd mass_;
};

/// Dyda-Kuznetsov-Kwasnicki multiplier 2^{2s} Gamma(1+s+n) Gamma(N/2+s+n+ell)
/// / (n! Gamma(N/2+n+ell)) for the unit ball.
double ball_multiplier(int N, double s, int n, int ell);

class SectorImage;

/// Function in one angular sector: radial coefficients over a SectorBasis.
/// Vanishes identically for |x| >= R.
class SectorFunction {
 public:
  SectorFunction(std::shared_ptr<const SectorBasis> basis, Eigen::VectorXd coeffs);
  /// Zero function.
  explicit SectorFunction(std::shared_ptr<const SectorBasis> basis);

  const SectorBasis& basis() const { return *basis_; }
  const std::shared_ptr<const SectorBasis>& basis_ptr() const { return basis_; }
  const FracParams& params() const { return basis_->params(); }
  int ell() const { return basis_->ell(); }
  int modes() const { return basis_->modes(); }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  /// Polynomial factor Q(tau) = sum_n c_n p_n(tau), tau = 2 rho^2 - 1.
  double polynomial(double tau) const;
  double polynomial_derivative(double tau) const;

  /// Radial profile g(r) with f(x) = g(|x|) Y_ell(t).
  double radial(double r) const;
  /// g'(r) for r < R.
  double radial_derivative(double r) const;

  double value(const AxialPoint& x) const;
  double value(std::span<const double> x) const { return value(axial(x)); }

  /// (x - c e_1) . grad f(x) at an interior point; c is a position on the axis.
  double scaling_derivative(const AxialPoint& x, double c) const;

  /// Limit of f(x) / dist(x, dB)^s on the boundary along direction t.
  double boundary_amplitude() const;

  SectorFunction operator+(const SectorFunction& o) const;
  SectorFunction operator-(const SectorFunction& o) const;
  SectorFunction operator*(double a) const;
  friend SectorFunction operator*(double a, const SectorFunction& f) { return f * a; }

 private:
  std::shared_ptr<const SectorBasis> basis_;
  Eigen::VectorXd coeffs_;
};

/// Image of a SectorFunction under (-Delta)^s, valid inside B: a polynomial
/// rho^ell sum_n d_n p_n(tau) Y_ell(t).
class SectorImage {
 public:
  SectorImage(std::shared_ptr<const SectorBasis> basis, Eigen::VectorXd coeffs);

  const SectorBasis& basis() const { return *basis_; }
  int ell() const { return basis_->ell(); }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  /// Radial part rho^ell sum_n d_n p_n(tau); requires r < R.
  double radial(double r) const;
  double value(const AxialPoint& x) const;

 private:
  std::shared_ptr<const SectorBasis> basis_;
  Eigen::VectorXd coeffs_;
};

/// Finite sum of sector functions with distinct ell (an axially symmetric
/// function on B written in the spectral basis).
class Field {
 public:
  Field() = default;
  explicit Field(std::vector<SectorFunction> parts);
  Field(const SectorFunction& f) : Field(std::vector<SectorFunction>{f}) {}  // NOLINT

  const std::vector<SectorFunction>& parts() const { return parts_; }
  /// Part in sector ell, or nullptr.
  const SectorFunction* sector(int ell) const;
  bool empty() const { return parts_.empty(); }

  double value(const AxialPoint& x) const;
  double value(std::span<const double> x) const { return value(axial(x)); }
  /// (-Delta)^s of the field at an interior point.
  double image_value(const AxialPoint& x) const;
  double scaling_derivative(const AxialPoint& x, double c) const;
  /// Boundary trace f / d^s at direction t on the sphere.
  double boundary_value(double t) const;

  Field operator+(const Field& o) const;
  Field operator*(double a) const;

 private:
  std::vector<SectorFunction> parts_;
};

/// Values of f / d^s on dB at the nodes of an angular rule.
struct BoundaryTrace {
  std::vector<double> theta;
  std::vector<double> t;
  std::vector<double> weights;  ///< surface weights on dB (include R^{N-1})
  std::vector<double> values;
  /// For a single sector: values = amplitude * Y_ell(t).
  double amplitude = 0.0;
  int ell = -1;
};

}  // namespace fraclane
