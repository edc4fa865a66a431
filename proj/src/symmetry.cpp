#include "fraclane/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fraclane/errors.hpp"
#include "fraclane/operator.hpp"

namespace fraclane {

PolarizationPlane make_plane(double a, double R) {
  if (!(std::abs(a) < R)) throw InvalidArgument("polarization plane must cut the ball (|a| < R)");
  return PolarizationPlane{a};
}

Polarized polarize(const GridFunction& v, const PolarizationPlane& plane) {
  const Grid& g = v.grid();
  const std::vector<int> mirror = g.reflection(plane.a);
  Eigen::VectorXd out(v.size());
  bool admissible = true;
  for (int i = 0; i < v.size(); ++i) {
    const double other = mirror[i] >= 0 ? v[mirror[i]] : 0.0;
    out[i] = g.x1(i) >= plane.a ? std::min(v[i], other) : std::max(v[i], other);
    if (!g.inside(i) && out[i] < 0.0) admissible = false;
  }
  return Polarized{GridFunction(v.grid_ptr(), std::move(out)), admissible};
}

namespace {

GridFunction ground_weight(const GroundState& u, const std::shared_ptr<const Grid>& grid) {
  const double pm = u.params.p() - 1.0;
  return to_grid([&](const AxialPoint& x) { return x.r < u.params.R() ? std::pow(std::abs(u.u.value(x)), pm) : 0.0; },
                 grid);
}

PolarizationTerms terms(const GridFunction& v, const GridFunction& upm, double p, double lambda, bool plus) {
  const GridFunction part = plus ? v.positive_part() : v.negative_part();
  PolarizationTerms t;
  const double sign = plus ? 1.0 : -1.0;
  t.gagliardo = sign * gagliardo_inner(v, part);
  t.potential = -sign * p * (upm * part).dot(part);
  t.mass = -sign * lambda * part.dot(part);
  t.total = t.gagliardo + t.potential + t.mass;
  return t;
}

}  // namespace

PolarizationReport polarization_report(const GridFunction& v, const PolarizationPlane& plane,
                                       const GroundState& u) {
  if (v.grid().kind() != GridKind::Lattice) {
    throw InvalidArgument("polarization_report: needs a lattice grid for the kernel form");
  }
  const Polarized pv = polarize(v, plane);
  if (!pv.admissible) throw InvalidArgument("polarization_report: (P_a v)^- does not vanish outside the ball");
  const GridFunction upm = ground_weight(u, v.grid_ptr());
  const double p = u.params.p(), lam = u.params.lambda();
  PolarizationReport rep;
  rep.plus_v = terms(v, upm, p, lam, true);
  rep.plus_pv = terms(pv.value, upm, p, lam, true);
  rep.minus_v = terms(v, upm, p, lam, false);
  rep.minus_pv = terms(pv.value, upm, p, lam, false);
  rep.slack_plus = rep.plus_v.total - rep.plus_pv.total;
  rep.slack_minus = rep.minus_v.total - rep.minus_pv.total;
  rep.l2_defect = std::abs(pv.value.dot(pv.value) - v.dot(v));
  rep.gagliardo_drop = gagliardo_inner(v, v) - gagliardo_inner(pv.value, pv.value);
  const auto substituted = [&](const PolarizationTerms& t) { return t.gagliardo - t.potential - t.mass; };
  rep.slack_minus_substituted = substituted(rep.minus_v) - substituted(rep.minus_pv);
  return rep;
}

namespace {

VariationalReport premises(double pair_plus, double pair_minus, const GridFunction& vp, const GridFunction& vm,
                           const GridFunction& upm, const GroundState& u, double mu2, double tol) {
  const double p = u.params.p(), lam = u.params.lambda();
  const double n_plus = vp.dot(vp), n_minus = vm.dot(vm);
  const double pot_plus = (upm * vp).dot(vp), pot_minus = (upm * vm).dot(vm);
  VariationalReport rep;
  rep.slack_plus = mu2 * n_plus - (pair_plus - p * pot_plus - lam * n_plus);
  rep.slack_minus = mu2 * n_minus - (-pair_minus - p * pot_minus - lam * n_minus);
  rep.scale = std::abs(pair_plus) + std::abs(pair_minus) + p * (pot_plus + pot_minus) +
              (std::abs(lam) + std::abs(mu2)) * (n_plus + n_minus);
  rep.holds = rep.slack_plus >= -tol * rep.scale && rep.slack_minus >= -tol * rep.scale;
  return rep;
}

void require_two_signed(const GridFunction& vp, const GridFunction& vm) {
  if (vp.values().maxCoeff() <= 0.0 || vm.values().maxCoeff() <= 0.0) {
    throw InvalidArgument("variational_principle_check: v must change sign");
  }
}

}  // namespace

VariationalReport variational_principle_check(const Field& v, std::shared_ptr<const Grid> grid,
                                              const GroundState& u, double mu2, double tol) {
  const GridFunction vg = to_grid(v, grid);
  const GridFunction vp = vg.positive_part(), vm = vg.negative_part();
  require_two_signed(vp, vm);
  const GridFunction upm = ground_weight(u, grid);
  return premises(gagliardo_inner(v, vp), gagliardo_inner(v, vm), vp, vm, upm, u, mu2, tol);
}

VariationalReport variational_principle_check(const GridFunction& v, const GroundState& u, double mu2,
                                              double tol) {
  const GridFunction vp = v.positive_part(), vm = v.negative_part();
  require_two_signed(vp, vm);
  const GridFunction upm = ground_weight(u, v.grid_ptr());
  return premises(gagliardo_inner(v, vp), gagliardo_inner(v, vm), vp, vm, upm, u, mu2, tol);
}

Antisymmetrized antisymmetrize(const GridFunction& w, const PolarizationPlane& plane) {
  const std::vector<int> mirror = w.grid().reflection(plane.a);
  Eigen::VectorXd out(w.size());
  for (int i = 0; i < w.size(); ++i) out[i] = w[i] - (mirror[i] >= 0 ? w[mirror[i]] : 0.0);
  const double scale = w.values().cwiseAbs().maxCoeff();
  const double amp = out.cwiseAbs().maxCoeff();
  return Antisymmetrized{GridFunction(w.grid_ptr(), std::move(out)), amp <= 1e-12 * scale};
}

FoliatedSchwarzReport foliated_schwarz_check(const GridFunction& v, double tol) {
  const Grid& g = v.grid();
  if (g.kind() != GridKind::Polar) throw InvalidArgument("foliated_schwarz_check: needs a polar grid");
  const double scale = v.values().cwiseAbs().maxCoeff();
  FoliatedSchwarzReport rep;
  if (scale == 0.0) {
    rep.passes = true;
    return rep;
  }
  const int na = g.n_angular();
  const AngularRule& ang = g.angles();
  // Angular order from theta = 0 to theta = pi.
  std::vector<int> order;
  for (int j = 0; j < na; ++j)
    if (ang.theta[j] >= 0.0) order.push_back(j);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return ang.theta[a] < ang.theta[b]; });
  for (int i = 0; i < g.n_radial(); ++i) {
    if (ang.full_circle) {
      for (int j = 0; j < na; ++j) {
        // theta -> -theta
        int jm = -1;
        for (int k = 0; k < na; ++k) {
          if (std::abs(ang.theta[k] + ang.theta[j]) < 1e-12) jm = k;
        }
        if (jm >= 0) rep.axial_residual = std::max(rep.axial_residual, std::abs(v[i * na + j] - v[i * na + jm]));
      }
    }
    for (std::size_t q = 1; q < order.size(); ++q) {
      const double inc = v[i * na + order[q]] - v[i * na + order[q - 1]];
      rep.monotonicity_violation = std::max(rep.monotonicity_violation, inc);
    }
  }
  rep.axial_residual /= scale;
  rep.monotonicity_violation /= scale;
  rep.passes = rep.axial_residual <= tol && rep.monotonicity_violation <= tol;
  return rep;
}

NodalReport nodal_structure(const GridFunction& v, double threshold) {
  const Grid& g = v.grid();
  const double scale = v.values().cwiseAbs().maxCoeff();
  const double cut = threshold * scale;
  std::vector<int> sign(v.size(), 0);
  NodalReport rep;
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] > cut) sign[i] = 1;
    else if (v[i] < -cut) sign[i] = -1;
    else ++rep.unassigned;
  }
  const auto nb = g.neighbours();
  std::vector<int> label(v.size(), -1);
  std::vector<int> stack;
  for (int i = 0; i < v.size(); ++i) {
    if (sign[i] == 0 || label[i] >= 0) continue;
    const int id = rep.regions++;
    (sign[i] > 0 ? rep.positive_regions : rep.negative_regions)++;
    stack.push_back(i);
    label[i] = id;
    while (!stack.empty()) {
      const int k = stack.back();
      stack.pop_back();
      for (int j : nb[k]) {
        if (label[j] < 0 && sign[j] == sign[i]) {
          label[j] = id;
          stack.push_back(j);
        }
      }
    }
  }
  int right = 0, left = 0;
  bool consistent = true;
  for (int i = 0; i < v.size(); ++i) {
    if (sign[i] == 0 || g.x1(i) == 0.0) continue;
    int& side = g.x1(i) > 0.0 ? right : left;
    if (side == 0) side = sign[i];
    else if (side != sign[i]) consistent = false;
  }
  rep.half_ball_split = consistent && right != 0 && left != 0 && right == -left;
  if (g.kind() == GridKind::Polar) {
    const int na = g.n_angular();
    for (int j = 0; j < na; ++j) {
      int changes = 0, last = 0;
      for (int i = 0; i < g.n_radial(); ++i) {
        const int sgn = sign[i * na + j];
        if (sgn == 0) continue;
        if (last != 0 && sgn != last) ++changes;
        last = sgn;
      }
      rep.radial_sign_changes = std::max(rep.radial_sign_changes, changes);
    }
  }
  return rep;
}

}  // namespace fraclane
