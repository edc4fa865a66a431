#include "fraclane/operator.hpp"

#include <cmath>

#include "fraclane/errors.hpp"
#include "fraclane/kernel.hpp"

namespace fraclane {

namespace {

void require_compatible(const FracParams& a, const FracParams& b) {
  if (a.N() != b.N() || a.s() != b.s() || a.R() != b.R()) {
    throw InvalidArgument("operands belong to different geometries");
  }
}

}  // namespace

SectorOperator assemble_sector(const FracParams& params, int ell, int modes) {
  SectorOperator op;
  op.ell = ell;
  op.basis = SectorBasis::make(params, ell, modes);
  op.A = op.basis->stiffness().asDiagonal();
  op.B = op.basis->mass();
  return op;
}

Eigen::MatrixXd radial_table(const SectorBasis& basis, const RadialRule& rule) {
  const double R = basis.params().R();
  Eigen::MatrixXd G(static_cast<long>(rule.rho.size()), basis.modes());
  std::vector<double> row(basis.modes());
  for (std::size_t k = 0; k < rule.rho.size(); ++k) {
    basis.radial_values(rule.rho[k] * R, row);
    for (int n = 0; n < basis.modes(); ++n) G(static_cast<long>(k), n) = row[n];
  }
  return G;
}

Eigen::MatrixXd potential_matrix(const SectorBasis& basis, const RadialRule& rule,
                                 const std::function<double(double)>& V) {
  const Eigen::MatrixXd G = radial_table(basis, rule);
  Eigen::VectorXd w(G.rows());
  for (long k = 0; k < G.rows(); ++k) {
    w[k] = rule.weights[k] * V(rule.rho[k] * basis.params().R());
  }
  return basis.harmonic().norm_squared() * (G.transpose() * w.asDiagonal() * G);
}

SectorImage frac_laplacian_apply(const SectorFunction& f) {
  Eigen::VectorXd d(f.modes());
  for (int n = 0; n < f.modes(); ++n) d[n] = f.basis().image_multiplier(n) * f.coeffs()[n];
  return SectorImage(f.basis_ptr(), std::move(d));
}

std::vector<SectorImage> frac_laplacian_apply(const Field& f) {
  std::vector<SectorImage> out;
  for (const auto& part : f.parts()) out.push_back(frac_laplacian_apply(part));
  return out;
}

double gagliardo_inner(const SectorFunction& f, const SectorFunction& g) {
  require_compatible(f.params(), g.params());
  if (f.ell() != g.ell()) return 0.0;
  const SectorFunction& big = f.modes() >= g.modes() ? f : g;
  const int n = std::min(f.modes(), g.modes());
  const Eigen::VectorXd& A = big.basis().stiffness();
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += A[k] * f.coeffs()[k] * g.coeffs()[k];
  return acc;
}

double gagliardo_inner(const Field& f, const Field& g) {
  double acc = 0.0;
  for (const auto& a : f.parts()) {
    if (const SectorFunction* b = g.sector(a.ell())) acc += gagliardo_inner(a, *b);
  }
  return acc;
}

double gagliardo_inner(const Field& f, const GridFunction& g) {
  const Grid& grid = g.grid();
  if (!f.empty()) require_compatible(f.parts().front().params(), grid.params());
  double acc = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    if (g[i] == 0.0) continue;
    const AxialPoint x = grid.point(i);
    if (x.r >= grid.R()) {
      throw InvalidArgument("mixed pairing: the grid function does not vanish outside the ball");
    }
    acc += grid.weight(i) * g[i] * f.image_value(x);
  }
  return acc;
}

double gagliardo_inner(const GridFunction& g, const Field& f) { return gagliardo_inner(f, g); }

double gagliardo_inner(const GridFunction& f, const GridFunction& g) {
  if (&f.grid() != &g.grid()) throw InvalidArgument("gagliardo_inner: operands live on different grids");
  if (f.grid().kind() != GridKind::Lattice) {
    throw InvalidArgument("gagliardo_inner: the kernel form of grid functions needs a lattice grid");
  }
  return f.grid().kernel().form(f.values(), g.values());
}

double l2_inner(const SectorFunction& f, const SectorFunction& g) {
  require_compatible(f.params(), g.params());
  if (f.ell() != g.ell()) return 0.0;
  const SectorFunction& big = f.modes() >= g.modes() ? f : g;
  const int n = std::min(f.modes(), g.modes());
  const Eigen::MatrixXd& B = big.basis().mass();
  return f.coeffs().head(n).dot(B.topLeftCorner(n, n) * g.coeffs().head(n));
}

double l2_inner(const Field& f, const Field& g) {
  double acc = 0.0;
  for (const auto& a : f.parts()) {
    if (const SectorFunction* b = g.sector(a.ell())) acc += l2_inner(a, *b);
  }
  return acc;
}

BoundaryTrace boundary_trace(const Field& f, int n_angular) {
  if (f.empty()) throw InvalidArgument("boundary_trace: empty field");
  const FracParams& params = f.parts().front().params();
  const AngularRule rule = angular_rule(params.N(), n_angular);
  BoundaryTrace tr;
  tr.theta = rule.theta;
  tr.t = rule.t;
  const double surf = std::pow(params.R(), params.N() - 1);
  for (std::size_t j = 0; j < rule.t.size(); ++j) {
    tr.weights.push_back(rule.weights[j] * surf);
    tr.values.push_back(f.boundary_value(rule.t[j]));
  }
  if (f.parts().size() == 1) {
    tr.amplitude = f.parts().front().boundary_amplitude();
    tr.ell = f.parts().front().ell();
  }
  return tr;
}

BoundaryTrace boundary_trace(const std::function<double(const AxialPoint&)>& f,
                             const FracParams& params, int n_angular, double delta0) {
  const double R = params.R();
  const double s = params.s();
  if (!(delta0 > 0.0 && delta0 < R)) throw InvalidArgument("boundary_trace: delta0 must lie in (0, R)");
  const AngularRule rule = angular_rule(params.N(), n_angular);
  BoundaryTrace tr;
  tr.theta = rule.theta;
  tr.t = rule.t;
  const double surf = std::pow(R, params.N() - 1);
  // q(d) = A + a d^s + b d + c d^2 + ...: eliminate the three correction terms
  // over the geometric sequence d, d/2, d/4, d/8.
  const double factors[3] = {std::pow(2.0, s), 2.0, 4.0};
  for (std::size_t j = 0; j < rule.t.size(); ++j) {
    std::vector<double> q(4);
    for (int k = 0; k < 4; ++k) {
      const double d = delta0 / std::pow(2.0, k);
      q[k] = f(AxialPoint{R - d, rule.t[j]}) / std::pow(d, s);
    }
    for (int level = 0; level < 3; ++level) {
      for (std::size_t k = 0; k + 1 < q.size(); ++k) {
        q[k] = (factors[level] * q[k + 1] - q[k]) / (factors[level] - 1.0);
      }
      q.pop_back();
    }
    tr.values.push_back(q[0]);
    tr.weights.push_back(rule.weights[j] * surf);
  }
  return tr;
}

}  // namespace fraclane
