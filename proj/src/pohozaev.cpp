#include "fraclane/pohozaev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclane/errors.hpp"
#include "fraclane/operator.hpp"

namespace fraclane {

namespace {

int max_ell(const Field& f) {
  int l = 0;
  for (const auto& part : f.parts()) l = std::max(l, part.ell());
  return l;
}

int max_modes(const Field& f) {
  int m = 0;
  for (const auto& part : f.parts()) m = std::max(m, part.modes());
  return m;
}

const FracParams& params_of(const Field& f) {
  if (f.empty()) throw InvalidArgument("empty field");
  return f.parts().front().params();
}

}  // namespace

PohozaevReport bilinear_pohozaev(const Field& u, const Field& v, double center, const PohozaevOptions& options) {
  const FracParams& P = params_of(u);
  const int N = P.N();
  const double s = P.s();
  const double R = P.R();
  const int lu = max_ell(u), lv = max_ell(v);
  const int nr = options.radial_nodes > 0 ? options.radial_nodes
                                          : max_modes(u) + max_modes(v) + (lu + lv) / 2 + 8;
  const int na = options.angular_nodes > 0 ? options.angular_nodes : 2 * (lu + lv) + 8;
  const AngularRule ang = angular_rule(N, na);
  const RadialRule grad_rule = radial_rule(N, R, nr, s - 1.0);
  const RadialRule val_rule = radial_rule(N, R, nr, s);

  PohozaevReport rep;
  rep.center = center;
  double lhs = 0.0, inner = 0.0, lhs_abs = 0.0, inner_abs = 0.0, flux_abs = 0.0;
  for (std::size_t j = 0; j < ang.t.size(); ++j) {
    for (int k = 0; k < nr; ++k) {
      const AxialPoint xg{grad_rule.rho[k] * R, ang.t[j]};
      const double a = ang.weights[j] * grad_rule.weights[k] *
                       (u.scaling_derivative(xg, center) * v.image_value(xg) +
                        v.scaling_derivative(xg, center) * u.image_value(xg));
      lhs += a;
      lhs_abs += std::abs(a);
      const AxialPoint xv{val_rule.rho[k] * R, ang.t[j]};
      const double b = ang.weights[j] * val_rule.weights[k] *
                       (u.value(xv) * v.image_value(xv) + v.value(xv) * u.image_value(xv));
      inner += b;
      inner_abs += std::abs(b);
    }
  }
  const AngularRule bnd = angular_rule(N, na);
  const double surf = std::pow(R, N - 1);
  double flux = 0.0;
  for (std::size_t j = 0; j < bnd.t.size(); ++j) {
    const double f = bnd.weights[j] * surf * u.boundary_value(bnd.t[j]) * v.boundary_value(bnd.t[j]) *
                     (R - center * bnd.t[j]);
    flux += f;
    flux_abs += std::abs(f);
  }
  const double g = std::exp(2.0 * std::lgamma(1.0 + s));
  rep.lhs = lhs;
  rep.rhs_interior = (s - 0.5 * N) * inner;
  rep.rhs_boundary = -g * flux;
  const double scale = std::max({lhs_abs, std::abs(s - 0.5 * N) * inner_abs, g * flux_abs,
                                 std::numeric_limits<double>::min()});
  rep.residual = std::abs(rep.lhs - rep.rhs_interior - rep.rhs_boundary) / scale;
  return rep;
}

PohozaevReport bilinear_pohozaev(const GroundState& u, const Field& v, double center,
                                 const PohozaevOptions& options) {
  if (!(u.residual <= 1e-8)) throw InvalidArgument("bilinear_pohozaev: ground state is not converged");
  return bilinear_pohozaev(Field(u.u), v, center, options);
}

InteriorReduction interior_reduction_check(const Field& u, const Field& v, double p) {
  const FracParams& P = params_of(u);
  const int nr = 3 * std::max(max_modes(u), max_modes(v)) + 16;
  const int na = 8 * (max_ell(u) + max_ell(v)) + 16;
  const RadialRule rad = radial_rule(P.N(), P.R(), nr, P.s() * (p + 1.0));
  const RadialRule lin = radial_rule(P.N(), P.R(), nr, 2.0 * P.s());
  const AngularRule ang = angular_rule(P.N(), na);
  InteriorReduction out;
  for (std::size_t j = 0; j < ang.t.size(); ++j) {
    for (int k = 0; k < nr; ++k) {
      const AxialPoint x{rad.rho[k] * P.R(), ang.t[j]};
      const double uu = u.value(x);
      out.up_v += ang.weights[j] * rad.weights[k] * std::pow(std::abs(uu), p - 1.0) * uu * v.value(x);
      const AxialPoint y{lin.rho[k] * P.R(), ang.t[j]};
      out.u_v += ang.weights[j] * lin.weights[k] * u.value(y) * v.value(y);
    }
  }
  return out;
}

InteriorReduction interior_reduction_check(const GroundState& u, const Field& v) {
  return interior_reduction_check(Field(u.u), v, u.params.p());
}

namespace {

double flux_sum(const Field& v, std::span<const double> e, int n, double& abs_sum) {
  const FracParams& P = params_of(v);
  const int N = P.N();
  const AngularRule ang = angular_rule(N, n);
  const double surf = std::pow(P.R(), N - 1);
  double acc = 0.0;
  abs_sum = 0.0;
  for (std::size_t j = 0; j < ang.t.size(); ++j) {
    double en = e[0] * ang.t[j];
    // Off-axis components average to zero over the azimuth when N >= 3.
    if (N == 2) en += e[1] * std::sin(ang.theta[j]);
    const double term = ang.weights[j] * surf * v.boundary_value(ang.t[j]) * en;
    acc += term;
    abs_sum += std::abs(term);
  }
  return acc;
}

}  // namespace

FluxReport boundary_flux(const Field& v, std::span<const double> e, int n_angular) {
  const FracParams& P = params_of(v);
  if (static_cast<int>(e.size()) != P.N()) throw InvalidArgument("boundary_flux: direction has the wrong dimension");
  double abs_fine = 0.0, abs_coarse = 0.0;
  FluxReport rep;
  rep.value = flux_sum(v, e, n_angular, abs_fine);
  const double coarse = flux_sum(v, e, std::max(2, n_angular / 2), abs_coarse);
  rep.error = std::abs(rep.value - coarse) + 64.0 * std::numeric_limits<double>::epsilon() * abs_fine;
  return rep;
}

namespace {

HopfReport summarize(const BoundaryTrace& tr, double zero_tol) {
  HopfReport rep;
  double wsum = 0.0;
  for (std::size_t j = 0; j < tr.values.size(); ++j) {
    rep.trace += tr.weights[j] * tr.values[j];
    wsum += tr.weights[j];
  }
  rep.trace /= wsum;
  double dev = 0.0, mag = 0.0;
  for (double v : tr.values) {
    dev = std::max(dev, std::abs(v - rep.trace));
    mag = std::max(mag, std::abs(v));
  }
  rep.vanishing = mag <= zero_tol;
  rep.deviation = std::abs(rep.trace) > 0.0 ? dev / std::abs(rep.trace) : dev;
  rep.positive = !rep.vanishing && std::all_of(tr.values.begin(), tr.values.end(), [](double v) { return v > 0.0; });
  rep.convention = "trace = lim u(x)/d(x)^s, positive for positive u";
  return rep;
}

}  // namespace

HopfReport hopf_check(const GroundState& u, int n_angular) {
  return summarize(boundary_trace(Field(u.u), n_angular), 0.0);
}

HopfReport hopf_check(const std::function<double(const AxialPoint&)>& f, const FracParams& params,
                      int n_angular, double zero_tolerance) {
  return summarize(boundary_trace(f, params, n_angular), zero_tolerance);
}

}  // namespace fraclane
