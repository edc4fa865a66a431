#include "fraclane/ground_state.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <random>

#include "fraclane/errors.hpp"
#include "fraclane/operator.hpp"

namespace fraclane {

namespace {

double a_norm(const DiscreteSpace& sp, const Eigen::VectorXd& v) {
  return std::sqrt(v.dot(sp.stiffness().cwiseProduct(v)));
}

double dual_norm(const DiscreteSpace& sp, const Eigen::VectorXd& v) {
  return std::sqrt(v.dot(v.cwiseQuotient(sp.stiffness())));
}

Eigen::VectorXd apply_k(const DiscreteSpace& sp, const Eigen::VectorXd& c) {
  return sp.stiffness().cwiseProduct(c) - sp.params().lambda() * (sp.mass() * c);
}

double mean_value(const DiscreteSpace& sp, const Eigen::VectorXd& c) {
  return sp.weights().dot(sp.nodal(c));
}

// Sign-mixed iterates are replaced by the L^2 projection of their modulus.
bool project_modulus(const DiscreteSpace& sp, Eigen::VectorXd& c) {
  const Eigen::VectorXd u = sp.nodal(c);
  const double q = sp.params().p() + 1.0;
  double neg = 0.0, pos = 0.0;
  for (long i = 0; i < u.size(); ++i) {
    const double v = sp.weights()[i] * std::pow(std::abs(u[i]), q);
    (u[i] < 0.0 ? neg : pos) += v;
  }
  const double small = std::min(neg, pos);
  if (small <= 1e-6 * (neg + pos)) return false;
  const Eigen::VectorXd rhs = sp.table().transpose() * sp.weights().cwiseProduct(u.cwiseAbs());
  c = sp.mass().ldlt().solve(rhs);
  return true;
}

struct Normalized {
  Eigen::VectorXd c;
  double q = 0.0;
};

Normalized normalize(const DiscreteSpace& sp, const Eigen::VectorXd& c) {
  const double G = sp.power_integral(c);
  if (!(G > 0.0) || !std::isfinite(G)) throw ConvergenceError("minimize_quotient: iterate collapsed to zero", 0, 0.0);
  Normalized n;
  n.c = c / std::pow(G, 1.0 / (sp.params().p() + 1.0));
  n.q = n.c.dot(apply_k(sp, n.c));
  return n;
}

Eigen::VectorXd quotient_gradient(const DiscreteSpace& sp, const Normalized& n) {
  return 2.0 * (apply_k(sp, n.c) - n.q * sp.power_gradient(n.c));
}

}  // namespace

double weak_residual(const DiscreteSpace& space, const Eigen::VectorXd& c) {
  const Eigen::VectorXd F = apply_k(space, c) - space.power_gradient(c);
  const double norm = a_norm(space, c);
  return norm > 0.0 ? dual_norm(space, F) / norm : dual_norm(space, F);
}

FirstEigenpair first_eigenvalue(const FracParams& params, int modes) {
  if (modes < 4) throw InvalidArgument("first_eigenvalue: need at least four radial modes");
  auto basis = SectorBasis::make(params, 0, modes);
  const Eigen::MatrixXd A = basis->stiffness().asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, basis->mass());
  if (es.info() != Eigen::Success) throw Error("first_eigenvalue: generalized eigensolver failed");
  Eigen::VectorXd v = es.eigenvectors().col(0);
  SectorFunction phi(basis, v);
  if (phi.boundary_amplitude() < 0.0) v = -v;
  return FirstEigenpair{es.eigenvalues()[0], SectorFunction(basis, v)};
}

QuotientMinimum minimize_quotient(std::shared_ptr<const DiscreteSpace> space,
                                  const Eigen::VectorXd& init, double lambda1,
                                  const SolverOptions& options) {
  const DiscreteSpace& sp = *space;
  const FracParams& P = sp.params();
  if (P.lambda() >= lambda1) throw CoercivityError(P.lambda(), lambda1);
  if (init.size() != sp.dim()) throw InvalidArgument("minimize_quotient: initial point has the wrong size");
  const double p = P.p();
  const Eigen::VectorXd& D = sp.stiffness();

  Eigen::VectorXd c0 = init;
  int projections = 0;
  if (project_modulus(sp, c0)) ++projections;
  Normalized cur = normalize(sp, c0);
  Eigen::VectorXd grad = quotient_gradient(sp, cur);
  double alpha = 1.0;
  int it = 0;
  double stat = dual_norm(sp, grad) / a_norm(sp, cur.c);
  for (; it < options.max_gradient_iterations && stat > options.switch_tolerance; ++it) {
    const Eigen::VectorXd d = -grad.cwiseQuotient(D);
    const double slope = grad.dot(d);
    double step = alpha;
    Normalized next;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      next = normalize(sp, cur.c + step * d);
      if (next.q <= cur.q + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    if (projections < 20 && project_modulus(sp, next.c)) {
      ++projections;
      next = normalize(sp, next.c);
    }
    const Eigen::VectorXd g_next = quotient_gradient(sp, next);
    const Eigen::VectorXd sv = next.c - cur.c;
    const Eigen::VectorXd yv = g_next - grad;
    const double sy = sv.dot(yv);
    alpha = sy > 0.0 ? sv.dot(D.cwiseProduct(sv)) / sy : 1.0;
    alpha = std::clamp(alpha, 1e-8, 1e8);
    cur = next;
    grad = g_next;
    stat = dual_norm(sp, grad) / a_norm(sp, cur.c);
  }
  if (stat > 1e-2) {
    throw ConvergenceError("minimize_quotient: gradient phase stalled", it, stat);
  }

  // Newton on (A - lambda B) u = g(u), u = m^{1/(p-1)} phi.
  Eigen::VectorXd u = std::pow(cur.q, 1.0 / (p - 1.0)) * cur.c;
  double res = weak_residual(sp, u);
  int newton = 0;
  for (; newton < options.max_newton_iterations; ++newton) {
    const Eigen::VectorXd F = apply_k(sp, u) - sp.power_gradient(u);
    Eigen::MatrixXd J = -p * sp.power_potential(u);
    J.diagonal() += D;
    J -= P.lambda() * sp.mass();
    const Eigen::VectorXd delta = J.partialPivLu().solve(-F);
    double t = 1.0;
    bool improved = false;
    Eigen::VectorXd trial;
    double trial_res = res;
    for (int bt = 0; bt < 30; ++bt) {
      trial = u + t * delta;
      trial_res = weak_residual(sp, trial);
      if (std::isfinite(trial_res) && trial_res < res) {
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) break;
    u = trial;
    const bool stagnating = trial_res > 0.5 * res && res < options.tolerance;
    res = trial_res;
    if (res < 1e-15 || stagnating) break;
  }
  if (!(res <= options.tolerance)) {
    throw ConvergenceError("minimize_quotient: Newton phase missed the residual target", it + newton, res);
  }
  if (mean_value(sp, u) < 0.0) u = -u;
  const double G = sp.power_integral(u);
  QuotientMinimum out;
  out.m = std::pow(G, (p - 1.0) / (p + 1.0));
  out.coeffs = u / std::pow(G, 1.0 / (p + 1.0));
  out.phi = sp.field(out.coeffs);
  out.space = std::move(space);
  out.residual = res;
  out.iterations = it + newton;
  return out;
}

QuotientMinimum minimize_quotient(const FracParams& params, int modes, const std::optional<Field>& init,
                                  const SolverOptions& options) {
  const FirstEigenpair first = first_eigenvalue(params, modes);
  if (params.lambda() >= first.lambda1) throw CoercivityError(params.lambda(), first.lambda1);
  auto space = std::make_shared<const DiscreteSpace>(params, modes, 0, options.radial_nodes,
                                                     options.angular_nodes);
  const Eigen::VectorXd c0 = init ? space->coefficients(*init) : first.phi1.coeffs();
  return minimize_quotient(space, c0, first.lambda1, options);
}

GroundState ground_state(const FracParams& params, int modes, const SolverOptions& options,
                         const std::optional<Field>& init) {
  const FirstEigenpair first = first_eigenvalue(params, modes);
  if (params.lambda() >= first.lambda1) throw CoercivityError(params.lambda(), first.lambda1);
  auto space = std::make_shared<const DiscreteSpace>(params, modes, 0, options.radial_nodes,
                                                     options.angular_nodes);
  const Eigen::VectorXd c0 = init ? space->coefficients(*init) : first.phi1.coeffs();
  const QuotientMinimum qm = minimize_quotient(space, c0, first.lambda1, options);
  const double p = params.p();
  const Eigen::VectorXd c = std::pow(qm.m, 1.0 / (p - 1.0)) * qm.coeffs;
  SectorFunction u(space->basis(0), c);

  // Certificate on radii 0 < r_1 < ... < r_n < R (Gauss-Jacobi nodes).
  const QuadratureRule radii = gauss_jacobi(2 * modes + 8, params.s(), 0.5 * params.N() - 1.0);
  std::vector<double> r;
  for (double tau : radii.nodes) r.push_back(params.R() * std::sqrt(0.5 * (1.0 + tau)));
  std::sort(r.begin(), r.end());
  double umin = u.radial(r.front()), umax = umin, viol = 0.0;
  double prev = umin;
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double v = u.radial(r[i]);
    umin = std::min(umin, v);
    umax = std::max(umax, v);
    viol = std::max(viol, v - prev);
    prev = v;
  }
  viol = umax > 0.0 ? viol / umax : viol;

  return GroundState{
      .params = params,
      .u = u,
      .m = qm.m,
      .lambda1 = first.lambda1,
      .phi1 = first.phi1,
      .residual = weak_residual(*space, c),
      .trace = u.boundary_amplitude(),
      .min_interior = umin,
      .monotonicity_violation = viol,
      .positive = umin > 0.0,
      .monotone = viol <= 1e-12,
      .iterations = qm.iterations,
      .space = space,
      .coeffs = c,
  };
}

UniquenessReport multistart_uniqueness(const FracParams& params, int K, std::uint64_t seed, int modes,
                                       int ell_max, const SolverOptions& options) {
  if (K < 1) throw InvalidArgument("multistart_uniqueness: need at least one run");
  if (params.N() == 1) ell_max = std::min(ell_max, 1);
  const FirstEigenpair first = first_eigenvalue(params, modes);
  if (params.lambda() >= first.lambda1) throw CoercivityError(params.lambda(), first.lambda1);
  auto space = std::make_shared<const DiscreteSpace>(params, modes, ell_max, options.radial_nodes,
                                                     options.angular_nodes);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  UniquenessReport rep;
  rep.runs = K;
  const double p = params.p();
  for (int k = 0; k < K; ++k) {
    Eigen::VectorXd c0(space->dim());
    for (int l = 0; l <= ell_max; ++l) {
      for (int n = 0; n < modes; ++n) {
        c0[space->offset(l) + n] = normal(rng) / ((1.0 + n) * (1.0 + n));
      }
    }
    MultistartRun run;
    try {
      const QuotientMinimum qm = minimize_quotient(space, c0, first.lambda1, options);
      run.coeffs = std::pow(qm.m, 1.0 / (p - 1.0)) * qm.coeffs;
      run.m = qm.m;
      run.residual = qm.residual;
      const Eigen::VectorXd nr = run.coeffs.tail(space->dim() - modes);
      run.nonradial_norm = std::sqrt(std::max(0.0, nr.dot(space->mass().bottomRightCorner(nr.size(), nr.size()) * nr)));
      run.converged = true;
    } catch (const Error& e) {
      run.error = e.what();
      ++rep.failures;
    }
    rep.details.push_back(std::move(run));
  }
  double mlo = 0.0, mhi = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < rep.details.size(); ++i) {
    const auto& a = rep.details[i];
    if (!a.converged) continue;
    if (!any) {
      mlo = mhi = a.m;
      any = true;
    }
    mlo = std::min(mlo, a.m);
    mhi = std::max(mhi, a.m);
    for (std::size_t j = i + 1; j < rep.details.size(); ++j) {
      const auto& b = rep.details[j];
      if (!b.converged) continue;
      const Eigen::VectorXd d = a.coeffs - b.coeffs;
      rep.max_l2_distance = std::max(rep.max_l2_distance, std::sqrt(std::max(0.0, d.dot(space->mass() * d))));
    }
  }
  rep.energy_spread = mhi - mlo;
  return rep;
}

}  // namespace fraclane
