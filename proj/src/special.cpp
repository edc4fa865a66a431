#include "fraclane/special.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclane/errors.hpp"

namespace fraclane {

OrthoJacobi::OrthoJacobi(double alpha, double beta, int count)
    : alpha_(alpha), beta_(beta), a_(std::max(count, 1)), b_(std::max(count, 1) + 1) {
  if (!(alpha > -1.0 && beta > -1.0)) throw InvalidArgument("Jacobi exponents must exceed -1");
  const double ab = alpha + beta;
  mu0_ = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                  std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  a_[0] = (beta - alpha) / (ab + 2.0);
  b_[0] = 0.0;
  for (std::size_t n = 1; n < a_.size(); ++n) {
    const double k = 2.0 * n + ab;
    a_[n] = (beta * beta - alpha * alpha) / (k * (k + 2.0));
  }
  for (std::size_t n = 1; n < b_.size(); ++n) {
    const double nn = static_cast<double>(n);
    const double k = 2.0 * nn + ab;
    double b2;
    if (n == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * nn * (nn + alpha) * (nn + beta) * (nn + ab) / (k * k * (k + 1.0) * (k - 1.0));
    }
    b_[n] = std::sqrt(b2);
  }
}

void OrthoJacobi::eval(double t, std::span<double> out) const {
  const int n = count();
  out[0] = 1.0 / std::sqrt(mu0_);
  if (n == 1) return;
  out[1] = (t - a_[0]) * out[0] / b_[1];
  for (int k = 1; k + 1 < n; ++k) {
    out[k + 1] = ((t - a_[k]) * out[k] - b_[k] * out[k - 1]) / b_[k + 1];
  }
}

void OrthoJacobi::eval(double t, std::span<double> out, std::span<double> dout) const {
  const int n = count();
  out[0] = 1.0 / std::sqrt(mu0_);
  dout[0] = 0.0;
  if (n == 1) return;
  out[1] = (t - a_[0]) * out[0] / b_[1];
  dout[1] = out[0] / b_[1];
  for (int k = 1; k + 1 < n; ++k) {
    out[k + 1] = ((t - a_[k]) * out[k] - b_[k] * out[k - 1]) / b_[k + 1];
    dout[k + 1] = ((t - a_[k]) * dout[k] + out[k] - b_[k] * dout[k - 1]) / b_[k + 1];
  }
}

double OrthoJacobi::sum(std::span<const double> coeffs, double t) const {
  const int n = static_cast<int>(coeffs.size());
  if (n == 0) return 0.0;
  if (n > count()) throw InvalidArgument("OrthoJacobi: too many coefficients");
  double prev = 1.0 / std::sqrt(mu0_);
  double acc = coeffs[0] * prev;
  if (n == 1) return acc;
  double cur = (t - a_[0]) * prev / b_[1];
  acc += coeffs[1] * cur;
  for (int k = 1; k + 1 < n; ++k) {
    const double next = ((t - a_[k]) * cur - b_[k] * prev) / b_[k + 1];
    prev = cur;
    cur = next;
    acc += coeffs[k + 1] * cur;
  }
  return acc;
}

double OrthoJacobi::sum_derivative(std::span<const double> coeffs, double t) const {
  const int n = static_cast<int>(coeffs.size());
  if (n <= 1) return 0.0;
  if (n > count()) throw InvalidArgument("OrthoJacobi: too many coefficients");
  double prev = 1.0 / std::sqrt(mu0_), dprev = 0.0;
  double cur = (t - a_[0]) * prev / b_[1], dcur = prev / b_[1];
  double acc = coeffs[1] * dcur;
  for (int k = 1; k + 1 < n; ++k) {
    const double next = ((t - a_[k]) * cur - b_[k] * prev) / b_[k + 1];
    const double dnext = ((t - a_[k]) * dcur + cur - b_[k] * dprev) / b_[k + 1];
    prev = cur; cur = next;
    dprev = dcur; dcur = dnext;
    acc += coeffs[k + 1] * dcur;
  }
  return acc;
}

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw InvalidArgument("gauss_jacobi: need at least one node");
  OrthoJacobi fam(alpha, beta, n + 1);
  Eigen::VectorXd diag(n), off(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag[k] = fam.a(k);
  for (int k = 0; k + 1 < n; ++k) off[k] = fam.b(k + 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.nodes.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::vector<double> v(n + 1), dv(n + 1);
  for (double& x : rule.nodes) {
    for (int it = 0; it < 3; ++it) {
      fam.eval(x, v, dv);
      if (dv[n] == 0.0) break;
      const double step = v[n] / dv[n];
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
  }
  std::sort(rule.nodes.begin(), rule.nodes.end());
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    fam.eval(rule.nodes[k], v);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += v[j] * v[j];
    rule.weights[k] = 1.0 / acc;
  }
  return rule;
}

double sphere_area(int k) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
}

namespace {

// Unnormalised zonal polynomial and its derivative.
void zonal_raw(int N, int ell, double t, double& val, double& der) {
  if (N == 1) {
    val = (ell == 0) ? 1.0 : t;
    der = (ell == 0) ? 0.0 : 1.0;
    return;
  }
  if (N == 2) {
    // T_ell and T_ell' = ell U_{ell-1}
    double t0 = 1.0, t1 = t, u0 = 1.0, u1 = 2.0 * t;
    if (ell == 0) { val = 1.0; der = 0.0; return; }
    if (ell == 1) { val = t; der = 1.0; return; }
    for (int k = 1; k < ell; ++k) {
      const double t2 = 2.0 * t * t1 - t0;
      t0 = t1; t1 = t2;
    }
    for (int k = 1; k < ell - 1; ++k) {
      const double u2 = 2.0 * t * u1 - u0;
      u0 = u1; u1 = u2;
    }
    val = t1;
    der = ell * (ell == 1 ? 1.0 : u1);
    return;
  }
  const double lam = 0.5 * N - 1.0;
  auto gegen = [](int deg, double lm, double x) {
    if (deg == 0) return 1.0;
    double c0 = 1.0, c1 = 2.0 * lm * x;
    for (int k = 1; k < deg; ++k) {
      const double c2 = (2.0 * (k + lm) * x * c1 - (k + 2.0 * lm - 1.0) * c0) / (k + 1.0);
      c0 = c1; c1 = c2;
    }
    return c1;
  };
  val = gegen(ell, lam, t);
  der = (ell == 0) ? 0.0 : 2.0 * lam * gegen(ell - 1, lam + 1.0, t);
}

}  // namespace

ZonalHarmonic::ZonalHarmonic(int N, int ell) : n_(N), ell_(ell) {
  if (N < 1) throw InvalidArgument("ZonalHarmonic: N must be >= 1");
  if (ell < 0) throw InvalidArgument("ZonalHarmonic: ell must be >= 0");
  if (N == 1 && ell > 1) throw InvalidArgument("ZonalHarmonic: only ell in {0, 1} exist for N = 1");
  double v1, d1;
  zonal_raw(N, ell, 1.0, v1, d1);
  scale_ = 1.0 / v1;
  if (N == 1) {
    norm2_ = 2.0;
  } else {
    const double a = 0.5 * (N - 3);
    const QuadratureRule q = gauss_jacobi(ell + 2, a, a);
    double acc = 0.0;
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
      const double y = value(q.nodes[k]);
      acc += q.weights[k] * y * y;
    }
    norm2_ = acc * sphere_area(N - 1);
  }
}

double ZonalHarmonic::value(double t) const {
  double v, d;
  zonal_raw(n_, ell_, t, v, d);
  return v * scale_;
}

double ZonalHarmonic::derivative(double t) const {
  double v, d;
  zonal_raw(n_, ell_, t, v, d);
  return d * scale_;
}

long ZonalHarmonic::multiplicity() const {
  if (n_ == 1) return 1;
  if (n_ == 2) return ell_ == 0 ? 1 : 2;
  // (2 ell + N - 2) (ell + N - 3)! / (ell! (N - 2)!)
  const double lg = std::lgamma(ell_ + n_ - 2.0) - std::lgamma(ell_ + 1.0) - std::lgamma(n_ - 1.0);
  return std::lround((2.0 * ell_ + n_ - 2.0) * std::exp(lg));
}

AngularRule angular_rule(int N, int n) {
  AngularRule rule;
  rule.N = N;
  if (N == 1) {
    rule.theta = {0.0, std::numbers::pi};
    rule.t = {1.0, -1.0};
    rule.weights = {1.0, 1.0};
    return rule;
  }
  if (n < 2) throw InvalidArgument("angular_rule: need at least two nodes");
  if (N == 2) {
    if (n % 4 != 0) n += 4 - n % 4;
    rule.full_circle = true;
    const double h = 2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j) {
      const double th = -std::numbers::pi + (j + 0.5) * h;
      rule.theta.push_back(th);
      rule.t.push_back(std::cos(th));
      rule.weights.push_back(h);
    }
    return rule;
  }
  const double a = 0.5 * (N - 3);
  QuadratureRule q = gauss_jacobi(n, a, a);
  // Descending t, i.e. ascending angle.
  const double area = sphere_area(N - 1);
  for (int j = n - 1; j >= 0; --j) {
    rule.t.push_back(q.nodes[j]);
    rule.theta.push_back(std::acos(q.nodes[j]));
    rule.weights.push_back(q.weights[j] * area);
  }
  return rule;
}

RadialRule radial_rule(int N, double R, int n, double alpha) {
  const double beta = 0.5 * N - 1.0;
  const QuadratureRule q = gauss_jacobi(n, alpha, beta);
  RadialRule rule;
  const double scale = std::pow(R, N) * std::pow(2.0, -0.5 * N - 1.0);
  for (int k = 0; k < n; ++k) {
    const double tau = q.nodes[k];
    rule.tau.push_back(tau);
    rule.rho.push_back(std::sqrt(0.5 * (1.0 + tau)));
    rule.weights.push_back(scale * q.weights[k] * std::pow(1.0 - tau, -alpha));
  }
  return rule;
}

}  // namespace fraclane
