#pragma once

#include <span>
#include <vector>

namespace fraclane {

/// Gauss-type rule: sum_k weights[k] f(nodes[k]).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Orthonormal Jacobi polynomials on [-1, 1] for the weight (1-t)^alpha (1+t)^beta,
/// evaluated by their three-term recurrence.
class OrthoJacobi {
 public:
  OrthoJacobi(double alpha, double beta, int count);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  int count() const { return static_cast<int>(a_.size()); }

  /// Writes p_0(t), ..., p_{count-1}(t) into out (out.size() >= count()).
  void eval(double t, std::span<double> out) const;
  /// Values and first derivatives.
  void eval(double t, std::span<double> out, std::span<double> dout) const;
  /// sum_n c_n p_n(t).
  double sum(std::span<const double> coeffs, double t) const;
  /// d/dt sum_n c_n p_n(t).
  double sum_derivative(std::span<const double> coeffs, double t) const;

  /// Diagonal recurrence coefficient a_n (n < count).
  double a(int n) const { return a_[n]; }
  /// Off-diagonal recurrence coefficient b_n, n >= 1 (b_0 is unused).
  double b(int n) const { return b_[n]; }
  /// Integral of the weight over [-1, 1].
  double mass() const { return mu0_; }

 private:
  double alpha_;
  double beta_;
  double mu0_;
  std::vector<double> a_;
  std::vector<double> b_;
};

/// n-point Gauss-Jacobi rule for the weight (1-t)^alpha (1+t)^beta on [-1, 1].
/// Golub-Welsch start, Newton polish, Christoffel weights.
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

/// Surface area of the unit sphere S^{k-1} in R^k (|S^0| = 2).
double sphere_area(int k);

/// Axially symmetric spherical harmonic of degree ell in R^N about e_1, as a
/// function of t = cos(angle to e_1), normalised so that Y(1) = 1.
/// N = 1: Y_0 = 1, Y_1 = t. N = 2: Chebyshev T_ell. N >= 3: Gegenbauer.
class ZonalHarmonic {
 public:
  ZonalHarmonic(int N, int ell);

  int N() const { return n_; }
  int ell() const { return ell_; }
  double value(double t) const;
  double derivative(double t) const;
  /// Integral of Y^2 over S^{N-1}.
  double norm_squared() const { return norm2_; }
  /// Number of linearly independent harmonics of degree ell in R^N.
  long multiplicity() const;

 private:
  int n_;
  int ell_;
  double scale_ = 1.0;
  double norm2_ = 0.0;
};

/// Rule on S^{N-1}. For N = 2 the full circle is sampled (equispaced angles,
/// symmetric under theta -> -theta and theta -> pi - theta); for N >= 3 the
/// meridian t = cos(theta) carries a Gauss-Gegenbauer rule with the factor
/// |S^{N-2}| folded into the weights; for N = 1 the two directions +-1.
struct AngularRule {
  int N = 0;
  std::vector<double> theta;
  std::vector<double> t;
  std::vector<double> weights;
  bool full_circle = false;
};

AngularRule angular_rule(int N, int n);

/// Rule for int_0^R F(r) r^{N-1} dr built from Gauss-Jacobi with exponent
/// alpha at r = R: exact when F(r) = (1 - (r/R)^2)^alpha * poly((r/R)^2).
struct RadialRule {
  std::vector<double> rho;     ///< r / R
  std::vector<double> tau;     ///< 2 rho^2 - 1
  std::vector<double> weights; ///< plain-measure weights, including R^N
};

RadialRule radial_rule(int N, double R, int n, double alpha);

}  // namespace fraclane
