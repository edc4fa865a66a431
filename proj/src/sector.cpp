#include "fraclane/sector.hpp"

#include <algorithm>
#include <cmath>

#include "fraclane/errors.hpp"

namespace fraclane {

AxialPoint axial(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  AxialPoint p;
  p.r = std::sqrt(r2);
  p.t = (p.r > 0.0) ? std::clamp(x[0] / p.r, -1.0, 1.0) : 1.0;
  return p;
}

double ball_multiplier(int N, double s, int n, int ell) {
  const double h = 0.5 * N;
  return std::exp(2.0 * s * std::log(2.0) + std::lgamma(1.0 + s + n) +
                  std::lgamma(h + s + n + ell) - std::lgamma(n + 1.0) - std::lgamma(h + n + ell));
}

SectorBasis::SectorBasis(const FracParams& params, int ell, int modes)
    : params_(params),
      ell_(ell),
      modes_(modes),
      family_(params.s(), 0.5 * params.N() + ell - 1.0, std::max(modes, 2)),
      harmonic_(params.N(), ell),
      multipliers_(modes),
      stiffness_(modes) {
  const double s = params.s();
  const double R = params.R();
  const int N = params.N();
  const double geom = std::pow(R, N - 2.0 * s) * harmonic_.norm_squared() *
                      std::pow(2.0, -s - family_.beta() - 2.0);
  for (int n = 0; n < modes; ++n) {
    multipliers_[n] = ball_multiplier(N, s, n, ell) * std::pow(R, -2.0 * s);
    stiffness_[n] = geom * ball_multiplier(N, s, n, ell);
  }
  const RadialRule rule = radial_rule(N, R, modes + ell + 2, 2.0 * s);
  Eigen::MatrixXd G(rule.rho.size(), modes);
  std::vector<double> row(modes);
  for (std::size_t k = 0; k < rule.rho.size(); ++k) {
    radial_values(rule.rho[k] * R, row);
    for (int n = 0; n < modes; ++n) G(static_cast<long>(k), n) = row[n] * std::sqrt(rule.weights[k]);
  }
  mass_ = harmonic_.norm_squared() * (G.transpose() * G);
}

std::shared_ptr<const SectorBasis> SectorBasis::make(const FracParams& params, int ell, int modes) {
  if (modes < 1) throw InvalidArgument("SectorBasis: need at least one radial mode");
  if (ell < 0) throw InvalidArgument("SectorBasis: ell must be >= 0");
  if (params.N() == 1 && ell > 1) {
    throw InvalidArgument("SectorBasis: unsupported sector index for N = 1 (only ell = 0, 1)");
  }
  return std::shared_ptr<const SectorBasis>(new SectorBasis(params, ell, modes));
}

void SectorBasis::radial_values(double r, std::span<double> out) const {
  const double rho = r / params_.R();
  if (rho >= 1.0) {
    std::fill(out.begin(), out.begin() + modes_, 0.0);
    return;
  }
  std::vector<double> p(family_.count());
  family_.eval(2.0 * rho * rho - 1.0, p);
  const double w = std::pow(1.0 - rho * rho, params_.s()) * std::pow(rho, ell_);
  for (int n = 0; n < modes_; ++n) out[n] = w * p[n];
}

SectorFunction::SectorFunction(std::shared_ptr<const SectorBasis> basis, Eigen::VectorXd coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (!basis_) throw InvalidArgument("SectorFunction: null basis");
  if (coeffs_.size() != basis_->modes()) {
    throw InvalidArgument("SectorFunction: coefficient count does not match the basis");
  }
  if (!coeffs_.allFinite()) throw InvalidArgument("SectorFunction: non-finite coefficients");
}

SectorFunction::SectorFunction(std::shared_ptr<const SectorBasis> basis)
    : SectorFunction(basis, Eigen::VectorXd::Zero(basis ? basis->modes() : 0)) {}

double SectorFunction::polynomial(double tau) const {
  return basis_->family().sum({coeffs_.data(), static_cast<std::size_t>(coeffs_.size())}, tau);
}

double SectorFunction::polynomial_derivative(double tau) const {
  return basis_->family().sum_derivative(
      {coeffs_.data(), static_cast<std::size_t>(coeffs_.size())}, tau);
}

double SectorFunction::radial(double r) const {
  const double rho = r / params().R();
  if (rho >= 1.0) return 0.0;
  const double tau = 2.0 * rho * rho - 1.0;
  return std::pow(1.0 - rho * rho, params().s()) * std::pow(rho, ell()) * polynomial(tau);
}

double SectorFunction::radial_derivative(double r) const {
  const double R = params().R();
  const double s = params().s();
  const double rho = r / R;
  if (rho >= 1.0) throw InvalidArgument("radial_derivative: point is not inside the ball");
  const double tau = 2.0 * rho * rho - 1.0;
  const double q = polynomial(tau);
  const double dq = polynomial_derivative(tau);
  const double w = 1.0 - rho * rho;
  const int l = ell();
  const double rl = std::pow(rho, l);
  double d = -2.0 * s * rho * std::pow(w, s - 1.0) * rl * q + std::pow(w, s) * rl * 4.0 * rho * dq;
  if (l > 0) d += std::pow(w, s) * l * std::pow(rho, l - 1) * q;
  return d / R;
}

double SectorFunction::value(const AxialPoint& x) const {
  if (x.r >= params().R()) return 0.0;
  return radial(x.r) * basis_->harmonic().value(x.t);
}

double SectorFunction::scaling_derivative(const AxialPoint& x, double c) const {
  const double R = params().R();
  const double rho = x.r / R;
  const ZonalHarmonic& Y = basis_->harmonic();
  double out = radial_derivative(x.r) * Y.value(x.t) * (x.r - c * x.t);
  const int l = ell();
  if (l > 0 && c != 0.0) {
    // g(r) / r without dividing by r
    const double tau = 2.0 * rho * rho - 1.0;
    const double g_over_r =
        std::pow(1.0 - rho * rho, params().s()) * std::pow(rho, l - 1) * polynomial(tau) / R;
    out -= c * g_over_r * Y.derivative(x.t) * (1.0 - x.t * x.t);
  }
  return out;
}

double SectorFunction::boundary_amplitude() const {
  return std::pow(2.0 / params().R(), params().s()) * polynomial(1.0);
}

namespace {
void require_same_basis(const SectorFunction& a, const SectorFunction& b) {
  if (&a.basis() != &b.basis() &&
      (a.ell() != b.ell() || a.modes() != b.modes() || a.params().N() != b.params().N() ||
       a.params().s() != b.params().s() || a.params().R() != b.params().R())) {
    throw InvalidArgument("SectorFunction: operands live on different bases");
  }
}
}  // namespace

SectorFunction SectorFunction::operator+(const SectorFunction& o) const {
  require_same_basis(*this, o);
  return SectorFunction(basis_, coeffs_ + o.coeffs_);
}

SectorFunction SectorFunction::operator-(const SectorFunction& o) const {
  require_same_basis(*this, o);
  return SectorFunction(basis_, coeffs_ - o.coeffs_);
}

SectorFunction SectorFunction::operator*(double a) const {
  return SectorFunction(basis_, coeffs_ * a);
}

SectorImage::SectorImage(std::shared_ptr<const SectorBasis> basis, Eigen::VectorXd coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {}

double SectorImage::radial(double r) const {
  const double rho = r / basis_->params().R();
  if (rho >= 1.0) throw InvalidArgument("SectorImage: the image is only represented inside B");
  return std::pow(rho, ell()) *
         basis_->family().sum({coeffs_.data(), static_cast<std::size_t>(coeffs_.size())},
                              2.0 * rho * rho - 1.0);
}

double SectorImage::value(const AxialPoint& x) const {
  return radial(x.r) * basis_->harmonic().value(x.t);
}

Field::Field(std::vector<SectorFunction> parts) : parts_(std::move(parts)) {
  std::sort(parts_.begin(), parts_.end(),
            [](const SectorFunction& a, const SectorFunction& b) { return a.ell() < b.ell(); });
  for (std::size_t i = 1; i < parts_.size(); ++i) {
    if (parts_[i].ell() == parts_[i - 1].ell()) {
      throw InvalidArgument("Field: two parts share the same sector");
    }
  }
}

const SectorFunction* Field::sector(int ell) const {
  for (const auto& f : parts_)
    if (f.ell() == ell) return &f;
  return nullptr;
}

double Field::value(const AxialPoint& x) const {
  double acc = 0.0;
  for (const auto& f : parts_) acc += f.value(x);
  return acc;
}

double Field::image_value(const AxialPoint& x) const {
  double acc = 0.0;
  for (const auto& f : parts_) {
    const SectorBasis& b = f.basis();
    Eigen::VectorXd d(f.modes());
    for (int n = 0; n < f.modes(); ++n) d[n] = b.image_multiplier(n) * f.coeffs()[n];
    acc += SectorImage(f.basis_ptr(), d).value(x);
  }
  return acc;
}

double Field::scaling_derivative(const AxialPoint& x, double c) const {
  double acc = 0.0;
  for (const auto& f : parts_) acc += f.scaling_derivative(x, c);
  return acc;
}

double Field::boundary_value(double t) const {
  double acc = 0.0;
  for (const auto& f : parts_) acc += f.boundary_amplitude() * f.basis().harmonic().value(t);
  return acc;
}

Field Field::operator+(const Field& o) const {
  std::vector<SectorFunction> out = parts_;
  for (const auto& g : o.parts_) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const SectorFunction& f) { return f.ell() == g.ell(); });
    if (it == out.end()) {
      out.push_back(g);
    } else {
      *it = *it + g;
    }
  }
  return Field(std::move(out));
}

Field Field::operator*(double a) const {
  std::vector<SectorFunction> out;
  for (const auto& f : parts_) out.push_back(f * a);
  return Field(std::move(out));
}

}  // namespace fraclane
