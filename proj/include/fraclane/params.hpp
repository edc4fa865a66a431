#pragma once

namespace fraclane {

/// Problem data for (-Delta)^s u = lambda u + u^p on the ball B_R in R^N.
///
/// Construct through make_params(); the constructor is private to keep the
/// subcritical-window invariant. lambda < lambda_1(B_R) is only checked once
/// the first eigenvalue is known (see ground_state.hpp).
class FracParams {
 public:
  int N() const { return n_; }
  double s() const { return s_; }
  double p() const { return p_; }
  double lambda() const { return lambda_; }
  double R() const { return r_; }

  /// Upper end of the admissible exponent window, +inf when N <= 2s.
  double critical_exponent() const;

  /// Same data with another lambda (the window does not depend on lambda).
  FracParams with_lambda(double lambda) const;
  /// Same data with another exponent; revalidates the window.
  FracParams with_p(double p) const;

  friend FracParams make_params(int N, double s, double p, double lambda, double R);

 private:
  FracParams(int n, double s, double p, double lambda, double r)
      : n_(n), s_(s), p_(p), lambda_(lambda), r_(r) {}

  int n_;
  double s_;
  double p_;
  double lambda_;
  double r_;
};

/// Validates and builds FracParams. Throws InvalidArgument when N < 1,
/// s is outside (0,1), R <= 0 or p is outside (1, (N+2s)/(N-2s)).
FracParams make_params(int N, double s, double p, double lambda, double R = 1.0);

/// Positive normalization constant of the fractional Laplacian,
/// 2^{2s} s Gamma((N+2s)/2) / (pi^{N/2} Gamma(1-s)).
double cns_constant(int N, double s);

}  // namespace fraclane
