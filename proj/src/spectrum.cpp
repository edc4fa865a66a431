#include "fraclane/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclane/errors.hpp"
#include "fraclane/operator.hpp"

namespace fraclane {

namespace {

Eigen::VectorXd ground_nodal(const GroundState& u) {
  return radial_table(*u.space->basis(0), u.space->radial()) * u.coeffs;
}

// Radial-rule values of the ell = 0 part of w times int u^q (...) weights.
double radial_moment(const GroundState& u, const Field& w, double q) {
  const SectorFunction* w0 = w.sector(0);
  if (!w0) return 0.0;
  const RadialRule& rule = u.space->radial();
  const Eigen::VectorXd U = ground_nodal(u);
  const Eigen::VectorXd W = radial_table(w0->basis(), rule) * w0->coeffs();
  double acc = 0.0;
  for (long k = 0; k < U.size(); ++k) {
    acc += rule.weights[k] * std::pow(std::abs(U[k]), q - 1.0) * U[k] * W[k];
  }
  return acc * w0->basis().harmonic().norm_squared();
}

void fix_sign(Eigen::VectorXd& v, const std::shared_ptr<const SectorBasis>& basis) {
  const double amp = SectorFunction(basis, v).boundary_amplitude();
  const double scale = v.cwiseAbs().maxCoeff();
  if (std::abs(amp) > 1e-10 * scale) {
    if (amp < 0.0) v = -v;
    return;
  }
  Eigen::Index i;
  v.cwiseAbs().maxCoeff(&i);
  if (v[i] < 0.0) v = -v;
}

Eigen::MatrixXd linearized_matrix(const GroundState& u, const SectorBasis& basis) {
  Eigen::MatrixXd K = -u.params.p() * ground_potential(u, basis) - u.params.lambda() * basis.mass();
  K.diagonal() += basis.stiffness();
  return K;
}

}  // namespace

Eigen::MatrixXd ground_potential(const GroundState& u, const SectorBasis& basis) {
  const double pm = u.params.p() - 1.0;
  return potential_matrix(basis, u.space->radial(), [&](double r) {
    return std::pow(std::abs(u.u.radial(r)), pm);
  });
}

SectorEigenpairs linearized_sector_spectrum(const GroundState& u, int ell, int k, int modes) {
  const int M = modes > 0 ? modes : u.space->modes();
  if (k < 1 || k > M) throw InvalidArgument("linearized_sector_spectrum: need 1 <= k <= modes");
  auto basis = SectorBasis::make(u.params, ell, M);
  const Eigen::MatrixXd K = linearized_matrix(u, *basis);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, basis->mass());
  if (es.info() != Eigen::Success) throw Error("linearized_sector_spectrum: eigensolver failed");
  SectorEigenpairs out;
  out.ell = ell;
  out.mu = es.eigenvalues().head(k);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd v = es.eigenvectors().col(i);
    fix_sign(v, basis);
    out.vectors.emplace_back(basis, v);
  }
  return out;
}

const SpectrumEntry* SpectrumResult::first_in_sector(int ell) const {
  for (const auto& e : entries)
    if (e.ell == ell) return &e;
  return nullptr;
}

SpectrumResult full_spectrum(const GroundState& u, const SpectrumOptions& options) {
  const int N = u.params.N();
  const int ell_max = N == 1 ? std::min(options.ell_max, 1) : options.ell_max;
  if (N >= 2 && ell_max < 2) throw InvalidArgument("full_spectrum: ell_max must be at least 2");
  const int M = u.space->modes();
  const int k = std::min(options.k, M);

  SpectrumResult res;
  res.ell_max = ell_max;
  res.modes = M;
  std::vector<SectorEigenpairs> sectors;
  for (int l = 0; l <= ell_max; ++l) sectors.push_back(linearized_sector_spectrum(u, l, k));
  for (const auto& sec : sectors) {
    const long mult = ZonalHarmonic(N, sec.ell).multiplicity();
    for (int i = 0; i < k; ++i) {
      res.entries.push_back(SpectrumEntry{.mu = sec.mu[i], .ell = sec.ell, .index = i,
                                          .multiplicity = mult, .v = sec.vectors[i]});
    }
  }
  std::stable_sort(res.entries.begin(), res.entries.end(), [](const auto& a, const auto& b) {
    return a.mu < b.mu || (a.mu == b.mu && a.ell < b.ell);
  });
  for (const auto& e : res.entries)
    if (e.mu < 0.0) res.morse_index += static_cast<int>(e.multiplicity);
  res.mu1 = res.entries[0].mu;
  if (res.entries[0].multiplicity > 1) {
    res.mu2 = res.entries[0].mu;
    res.mu2_ell = res.entries[0].ell;
  } else {
    res.mu2 = res.entries[1].mu;
    res.mu2_ell = res.entries[1].ell;
  }
  res.margin = res.mu2;
  res.gap = res.mu2 - res.mu1;
  res.last_sector_min = sectors.back().mu[0];

  if (options.refine) {
    const GroundState fine =
        ground_state(u.params, M + options.refine_step, options.solver, Field(u.u));
    const int kk = std::min(2, k);
    for (int l = 0; l <= ell_max; ++l) {
      const SectorEigenpairs sf = linearized_sector_spectrum(fine, l, kk);
      for (int i = 0; i < kk; ++i) {
        res.refinement_delta = std::max(res.refinement_delta, std::abs(sf.mu[i] - sectors[l].mu[i]));
      }
    }
  }
  // N = 1: sectors 0 and 1 (even and odd) already exhaust the spectrum.
  if (N >= 2) {
    if (!(res.last_sector_min > res.mu2 + res.refinement_delta) && res.mu2_ell != ell_max) {
      throw InvalidArgument("full_spectrum: lowest eigenvalue of the last sector is not above mu2; increase ell_max");
    }
    if (res.mu2_ell == ell_max) {
      throw InvalidArgument("full_spectrum: mu2 is attained in the last sector; increase ell_max");
    }
  }
  return res;
}

double rayleigh_J(const GroundState& u, const Field& v) {
  double num = 0.0, den = 0.0;
  const double p = u.params.p();
  const double lam = u.params.lambda();
  for (const auto& part : v.parts()) {
    const Eigen::VectorXd& c = part.coeffs();
    const double l2 = c.dot(part.basis().mass() * c);
    const double pot = c.dot(ground_potential(u, part.basis()) * c);
    num += c.dot(part.basis().stiffness().cwiseProduct(c)) - p * pot - lam * l2;
    den += l2;
  }
  if (!(den > 0.0)) throw InvalidArgument("rayleigh_J: v must not vanish");
  return num / den;
}

double power_moment(const GroundState& u, const Field& w) { return radial_moment(u, w, u.params.p()); }

SecondVariation second_variation_check(const GroundState& u, double m, const Field& w) {
  const double p = u.params.p();
  SecondVariation sv;
  double l2 = 0.0;
  for (const auto& part : w.parts()) l2 += part.coeffs().dot(part.basis().mass() * part.coeffs());
  if (!(l2 > 0.0)) throw InvalidArgument("second_variation_check: w must not vanish");
  sv.quadratic = rayleigh_J(u, w) * l2;
  sv.coupling = power_moment(u, w);
  sv.printed = sv.quadratic + 0.5 * (p + 1.0) * std::pow(m, -2.0 * p / (p - 1.0)) * sv.coupling * sv.coupling;
  sv.derived = sv.quadratic + (p - 1.0) * std::pow(m, -(p + 1.0) / (p - 1.0)) * sv.coupling * sv.coupling;
  return sv;
}

namespace {

MinimaxReport constrained_inf(const GroundState& u, const SpectrumResult& spectrum,
                              const Eigen::VectorXd& b, int M, double tol) {
  const int L = spectrum.ell_max;
  const int n = M * (L + 1);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  double nonaxial = std::numeric_limits<double>::infinity();
  for (int l = 0; l <= L; ++l) {
    auto basis = SectorBasis::make(u.params, l, M);
    K.block(l * M, l * M, M, M) = linearized_matrix(u, *basis);
    B.block(l * M, l * M, M, M) = basis->mass();
    if (l >= 1 && ZonalHarmonic(u.params.N(), l).multiplicity() > 1) {
      if (const SpectrumEntry* e = spectrum.first_in_sector(l)) nonaxial = std::min(nonaxial, e->mu);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
  const Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd Z = Q.rightCols(n - 1);
  const Eigen::MatrixXd Kz = Z.transpose() * K * Z;
  const Eigen::MatrixXd Bz = Z.transpose() * B * Z;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kz, Bz, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("minimax_check: eigensolver failed");
  MinimaxReport rep;
  rep.restricted_inf = es.eigenvalues()[0];
  rep.inf = std::min(rep.restricted_inf, nonaxial);
  rep.mu2 = spectrum.mu2;
  rep.lower_ok = rep.inf >= -tol;
  rep.upper_ok = rep.inf <= spectrum.mu2 + tol;
  return rep;
}

}  // namespace

MinimaxReport minimax_check(const GroundState& u, const SpectrumResult& spectrum, MinimaxConstraint which,
                            double tol) {
  const int M = spectrum.modes;
  const int n = M * (spectrum.ell_max + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  auto basis = SectorBasis::make(u.params, 0, M);
  if (which == MinimaxConstraint::PowerOfU) {
    for (int i = 0; i < M; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(M);
      e[i] = 1.0;
      b[i] = power_moment(u, Field(SectorFunction(basis, e)));
    }
  } else {
    const SpectrumEntry* first = spectrum.first_in_sector(0);
    b.head(M) = basis->mass() * first->v.coeffs();
  }
  return constrained_inf(u, spectrum, b, M, tol);
}

MinimaxReport minimax_check(const GroundState& u, const SpectrumResult& spectrum, const Field& e, double tol) {
  const int M = spectrum.modes;
  const int n = M * (spectrum.ell_max + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (const auto& part : e.parts()) {
    if (part.ell() > spectrum.ell_max) continue;
    auto basis = SectorBasis::make(u.params, part.ell(), M);
    for (int i = 0; i < M; ++i) {
      Eigen::VectorXd unit = Eigen::VectorXd::Zero(M);
      unit[i] = 1.0;
      b[part.ell() * M + i] = l2_inner(SectorFunction(basis, unit), part);
    }
  }
  return constrained_inf(u, spectrum, b, M, tol);
}

EigenIdentity eigen_identity_check(const GroundState& u, double mu, const Field& v) {
  const double p = u.params.p();
  EigenIdentity id;
  id.lhs = (1.0 - p) * power_moment(u, v);
  id.rhs = mu * l2_inner(Field(u.u), v);
  const double vn = std::sqrt(std::max(0.0, l2_inner(v, v)));
  const double un = std::sqrt(std::max(0.0, l2_inner(u.u, u.u)));
  // |u^p|_2 with the nonlinear rule
  const RadialRule& rule = u.space->radial();
  const Eigen::VectorXd U = ground_nodal(u);
  double up2 = 0.0;
  for (long k = 0; k < U.size(); ++k) up2 += rule.weights[k] * std::pow(std::abs(U[k]), 2.0 * p);
  up2 *= sphere_area(u.params.N());
  const double scale = (p - 1.0) * std::sqrt(up2) * vn + std::abs(mu) * un * vn;
  id.residual = scale > 0.0 ? std::abs(id.lhs - id.rhs) / scale : std::abs(id.lhs - id.rhs);
  return id;
}

}  // namespace fraclane
