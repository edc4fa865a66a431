#include "fraclane/oracle.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "fraclane/errors.hpp"
#include "fraclane/special.hpp"

namespace fraclane {

namespace {

struct Direction {
  std::vector<double> w;
  double weight;
};

// Rules on S^{N-1} exploiting the symmetry w -> -w of the integrand. The
// coarse rule is used for the angular part of the error estimate.
std::vector<Direction> directions(int N, int n) {
  std::vector<Direction> out;
  if (N == 1) {
    out.push_back({{1.0}, 2.0});
  } else if (N == 2) {
    for (int j = 0; j < n; ++j) {
      const double phi = std::numbers::pi * j / n;
      out.push_back({{std::cos(phi), std::sin(phi)}, 2.0 * std::numbers::pi / n});
    }
  } else if (N == 3) {
    const QuadratureRule g = gauss_jacobi(n, 0.0, 0.0);
    const int m = 2 * n;
    for (int i = 0; i < n; ++i) {
      const double t = g.nodes[i];
      const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
      for (int j = 0; j < m; ++j) {
        const double psi = 2.0 * std::numbers::pi * j / m;
        out.push_back({{t, st * std::cos(psi), st * std::sin(psi)},
                       g.weights[i] * 2.0 * std::numbers::pi / m});
      }
    }
  } else {
    throw InvalidArgument("quadrature_oracle: only N = 1, 2, 3 are supported");
  }
  return out;
}

}  // namespace

OracleResult quadrature_oracle(const std::function<double(std::span<const double>)>& f,
                               const FracParams& params, std::span<const double> x,
                               const OracleOptions& options) {
  const int N = params.N();
  const double s = params.s();
  const double R = params.R();
  if (static_cast<int>(x.size()) != N) throw InvalidArgument("quadrature_oracle: point dimension mismatch");
  if (options.levels < 3) throw InvalidArgument("quadrature_oracle: need at least three levels");
  double x2 = 0.0;
  for (double v : x) x2 += v * v;
  const double dist = R - std::sqrt(x2);
  if (!(dist > 0.0)) throw InvalidArgument("quadrature_oracle: point must be interior");
  const double eps0 = options.epsilon > 0.0 ? options.epsilon : 0.25 * dist;
  if (eps0 >= dist) throw InvalidArgument("quadrature_oracle: epsilon must be below the boundary distance");

  const double fx = f(x);
  const double c = cns_constant(N, s);
  boost::math::quadrature::tanh_sinh<double> integrator;
  std::vector<double> y(N);

  auto ray = [&](const std::vector<double>& w, double eps, double& abs_acc) {
    double xw = 0.0;
    for (int i = 0; i < N; ++i) xw += x[i] * w[i];
    const double disc = std::sqrt(xw * xw + R * R - x2);
    const double rp = -xw + disc;  // exit distance along +w
    const double rm = xw + disc;   // exit distance along -w
    const double a = std::min(rp, rm);
    const double b = std::max(rp, rm);
    auto h = [&](double r) {
      for (int i = 0; i < N; ++i) y[i] = x[i] + r * w[i];
      double v = 2.0 * fx - (r < rp ? f(y) : 0.0);
      for (int i = 0; i < N; ++i) y[i] = x[i] - r * w[i];
      v -= (r < rm ? f(y) : 0.0);
      return v * std::pow(r, -1.0 - 2.0 * s);
    };
    double err = 0.0, l1 = 0.0, total = 0.0;
    total += integrator.integrate(h, eps, a, options.ray_tolerance, &err, &l1);
    abs_acc += l1;
    if (b > a) {
      total += integrator.integrate(h, a, b, options.ray_tolerance, &err, &l1);
      abs_acc += l1;
    }
    total += 2.0 * fx * std::pow(b, -2.0 * s) / (2.0 * s);
    return total;
  };

  const int n = std::max(2, options.n_angular);
  const auto fine = directions(N, n);
  const bool nested = N == 2 && n % 2 == 0;
  const auto coarse = nested ? std::vector<Direction>{} : directions(N, std::max(2, n / 2));

  OracleResult res;
  std::vector<double> coarse_levels;
  double abs_acc = 0.0;
  for (int k = 0; k < options.levels; ++k) {
    const double eps = eps0 / std::pow(2.0, k);
    double acc = 0.0, acc_coarse = 0.0;
    for (std::size_t j = 0; j < fine.size(); ++j) {
      const double v = ray(fine[j].w, eps, abs_acc);
      acc += fine[j].weight * v;
      if (nested && j % 2 == 0) acc_coarse += 2.0 * fine[j].weight * v;
    }
    if (!nested) {
      for (const auto& d : coarse) acc_coarse += d.weight * ray(d.w, eps, abs_acc);
    }
    res.epsilons.push_back(eps);
    res.truncated.push_back(0.5 * c * acc);
    coarse_levels.push_back(0.5 * c * acc_coarse);
  }

  // I(eps) = I - a eps^{2-2s} - b eps^{4-2s} - ...
  auto extrapolate = [&](const std::vector<double>& lv, int last) {
    const double q1 = std::pow(2.0, 2.0 - 2.0 * s);
    const double q2 = std::pow(2.0, 4.0 - 2.0 * s);
    const double e0 = (q1 * lv[last - 1] - lv[last - 2]) / (q1 - 1.0);
    const double e1 = (q1 * lv[last] - lv[last - 1]) / (q1 - 1.0);
    return (q2 * e1 - e0) / (q2 - 1.0);
  };
  const int L = options.levels - 1;
  res.value = extrapolate(res.truncated, L);
  double err = 0.0;
  if (L >= 3) {
    err += std::abs(res.value - extrapolate(res.truncated, L - 1));
  } else {
    const double q1 = std::pow(2.0, 2.0 - 2.0 * s);
    err += std::abs(res.value - (q1 * res.truncated[L] - res.truncated[L - 1]) / (q1 - 1.0));
  }
  err += std::abs(res.value - extrapolate(coarse_levels, L));
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * 0.5 * c *
                          std::max(abs_acc / options.levels, std::abs(fx));
  err += rounding + options.ray_tolerance * std::abs(res.value);
  res.error = err;
  res.converged = std::isfinite(res.value) &&
                  err <= options.flag_tolerance * std::max(1.0, std::abs(res.value));
  return res;
}

OracleResult quadrature_oracle(const Field& f, std::span<const double> x, const OracleOptions& options) {
  if (f.empty()) throw InvalidArgument("quadrature_oracle: empty field");
  return quadrature_oracle([&f](std::span<const double> y) { return f.value(y); },
                           f.parts().front().params(), x, options);
}

}  // namespace fraclane
