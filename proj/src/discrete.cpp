#include "fraclane/discrete.hpp"

#include <cmath>

#include "fraclane/errors.hpp"
#include "fraclane/operator.hpp"

namespace fraclane {

DiscreteSpace::DiscreteSpace(const FracParams& params, int modes, int ell_max, int radial_nodes,
                             int angular_nodes)
    : params_(params), modes_(modes), ell_max_(ell_max) {
  if (modes < 1) throw InvalidArgument("DiscreteSpace: need at least one radial mode");
  if (ell_max < 0) throw InvalidArgument("DiscreteSpace: ell_max must be >= 0");
  const int N = params.N();
  for (int l = 0; l <= ell_max; ++l) bases_.push_back(SectorBasis::make(params, l, modes));

  const int n = dim();
  stiffness_.resize(n);
  mass_ = Eigen::MatrixXd::Zero(n, n);
  for (int l = 0; l <= ell_max; ++l) {
    stiffness_.segment(offset(l), modes) = bases_[l]->stiffness();
    mass_.block(offset(l), offset(l), modes, modes) = bases_[l]->mass();
  }

  const int nr = radial_nodes > 0 ? radial_nodes : 3 * modes + 16;
  radial_ = radial_rule(N, params.R(), nr, params.s() * (params.p() + 1.0));
  if (ell_max == 0) {
    angular_.N = N;
    angular_.theta = {0.0};
    angular_.t = {1.0};
    angular_.weights = {sphere_area(N)};
  } else {
    angular_ = angular_rule(N, angular_nodes > 0 ? angular_nodes : 8 * ell_max + 16);
  }
  const int na = static_cast<int>(angular_.t.size());
  table_.resize(static_cast<long>(nr) * na, n);
  weights_.resize(static_cast<long>(nr) * na);
  std::vector<Eigen::MatrixXd> radial_tables;
  for (int l = 0; l <= ell_max; ++l) radial_tables.push_back(radial_table(*bases_[l], radial_));
  for (int k = 0; k < nr; ++k) {
    for (int j = 0; j < na; ++j) {
      const long row = static_cast<long>(k) * na + j;
      weights_[row] = radial_.weights[k] * angular_.weights[j];
      for (int l = 0; l <= ell_max; ++l) {
        const double y = bases_[l]->harmonic().value(angular_.t[j]);
        table_.block(row, offset(l), 1, modes) = y * radial_tables[l].row(k);
      }
    }
  }
}

double DiscreteSpace::power_integral(const Eigen::VectorXd& c) const {
  const Eigen::VectorXd u = nodal(c);
  const double q = params_.p() + 1.0;
  double acc = 0.0;
  for (long i = 0; i < u.size(); ++i) acc += weights_[i] * std::pow(std::abs(u[i]), q);
  return acc;
}

Eigen::VectorXd DiscreteSpace::power_gradient(const Eigen::VectorXd& c) const {
  Eigen::VectorXd u = nodal(c);
  const double pm = params_.p() - 1.0;
  for (long i = 0; i < u.size(); ++i) u[i] = weights_[i] * std::pow(std::abs(u[i]), pm) * u[i];
  return table_.transpose() * u;
}

Eigen::MatrixXd DiscreteSpace::power_potential(const Eigen::VectorXd& c) const {
  Eigen::VectorXd u = nodal(c);
  const double pm = params_.p() - 1.0;
  for (long i = 0; i < u.size(); ++i) u[i] = weights_[i] * std::pow(std::abs(u[i]), pm);
  return table_.transpose() * u.asDiagonal() * table_;
}

Field DiscreteSpace::field(const Eigen::VectorXd& c) const {
  if (c.size() != dim()) throw InvalidArgument("DiscreteSpace: coefficient size mismatch");
  std::vector<SectorFunction> parts;
  for (int l = 0; l <= ell_max_; ++l) parts.emplace_back(bases_[l], c.segment(offset(l), modes_));
  return Field(std::move(parts));
}

Eigen::VectorXd DiscreteSpace::coefficients(const Field& f) const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim());
  for (const auto& part : f.parts()) {
    if (part.ell() > ell_max_) {
      if (part.coeffs().cwiseAbs().maxCoeff() > 0.0) {
        throw InvalidArgument("DiscreteSpace: field has a sector outside the space");
      }
      continue;
    }
    const int n = std::min(part.modes(), modes_);
    if (part.modes() > modes_ && part.coeffs().tail(part.modes() - modes_).cwiseAbs().maxCoeff() > 0.0) {
      throw InvalidArgument("DiscreteSpace: field has more radial modes than the space");
    }
    c.segment(offset(part.ell()), n) = part.coeffs().head(n);
  }
  return c;
}

}  // namespace fraclane
