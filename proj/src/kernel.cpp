#include "fraclane/kernel.hpp"

#include <fftw3.h>

#include <boost/math/special_functions/zeta.hpp>
#include <algorithm>
#include <cmath>
#include <complex>

#include "fraclane/errors.hpp"

namespace fraclane {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

double dirichlet_beta(double x) {
  if (!(x > 0.0)) throw InvalidArgument("dirichlet_beta: argument must be positive");
  // Cohen-Rodriguez Villegas-Zagier acceleration of the alternating series.
  const int n = 40;
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0, c = -d, acc = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    acc += c * std::pow(2.0 * k + 1.0, -x);
    b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0));
  }
  return acc / d;
}

double lattice_zeta(int N, double s) {
  if (N == 1) return 2.0 * boost::math::zeta(1.0 + 2.0 * s);
  if (N == 2) return 4.0 * boost::math::zeta(1.0 + s) * dirichlet_beta(1.0 + s);
  throw InvalidArgument("lattice_zeta: only N = 1 and N = 2 are supported");
}

LatticeKernel::LatticeKernel(const Grid& grid) {
  if (grid.kind() != GridKind::Lattice) throw InvalidArgument("LatticeKernel needs a lattice grid");
  const int N = grid.N();
  const double s = grid.params().s();
  dims_ = N;
  box_ = 0;
  for (int i = 0; i < grid.size(); ++i) {
    box_ = std::max({box_, std::abs(grid.k1(i)) + 1, std::abs(grid.k2(i)) + 1});
  }
  padded_ = 4 * box_;
  const int P = padded_;
  const long total = N == 2 ? static_cast<long>(P) * P : P;
  const int half = P / 2 + 1;
  const long ctotal = N == 2 ? static_cast<long>(P) * half : half;
  scale_ = cns_constant(N, s) * std::pow(grid.spacing(), N - 2.0 * s);
  zeta_ = lattice_zeta(N, s);

  slots_.resize(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const long a = grid.k1(i) + box_;
    const long b = grid.k2(i) + (N == 2 ? box_ : 0);
    slots_[i] = N == 2 ? a * P + b : a;
  }

  real_ = fftw_alloc_real(total);
  auto* freq = fftw_alloc_complex(ctotal);
  auto* khat = fftw_alloc_complex(ctotal);
  spectrum_ = freq;
  kernel_hat_ = khat;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (N == 2) {
      forward_ = fftw_plan_dft_r2c_2d(P, P, real_, freq, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_2d(P, P, freq, real_, FFTW_ESTIMATE);
    } else {
      forward_ = fftw_plan_dft_r2c_1d(P, real_, freq, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_c2r_1d(P, freq, real_, FFTW_ESTIMATE);
    }
  }
  // Kernel on the periodic padded box, differences wrapped into (-P/2, P/2].
  const double expo = -(N + 2.0 * s) / 2.0;
  auto wrap = [P](int i) { return i <= P / 2 ? i : i - P; };
  for (int i = 0; i < P; ++i) {
    const double di = wrap(i);
    if (N == 2) {
      for (int j = 0; j < P; ++j) {
        const double dj = wrap(j);
        const double r2 = di * di + dj * dj;
        real_[static_cast<long>(i) * P + j] = r2 > 0.0 ? std::pow(r2, expo) : 0.0;
      }
    } else {
      const double r2 = di * di;
      real_[i] = r2 > 0.0 ? std::pow(r2, expo) : 0.0;
    }
  }
  fftw_execute(static_cast<fftw_plan>(forward_));
  for (long k = 0; k < ctotal; ++k) {
    khat[k][0] = freq[k][0] / static_cast<double>(total);
    khat[k][1] = freq[k][1] / static_cast<double>(total);
  }
}

LatticeKernel::~LatticeKernel() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_));
  fftw_free(real_);
  fftw_free(spectrum_);
  fftw_free(kernel_hat_);
}

Eigen::VectorXd LatticeKernel::apply(const Eigen::VectorXd& f) const {
  if (f.size() != static_cast<long>(slots_.size())) throw InvalidArgument("LatticeKernel: size mismatch");
  std::lock_guard<std::mutex> lock(mutex_);
  const int P = padded_;
  const long total = dims_ == 2 ? static_cast<long>(P) * P : P;
  const long ctotal = dims_ == 2 ? static_cast<long>(P) * (P / 2 + 1) : P / 2 + 1;
  std::fill(real_, real_ + total, 0.0);
  for (std::size_t i = 0; i < slots_.size(); ++i) real_[slots_[i]] = f[static_cast<long>(i)];
  fftw_execute(static_cast<fftw_plan>(forward_));
  auto* freq = static_cast<fftw_complex*>(spectrum_);
  auto* khat = static_cast<fftw_complex*>(kernel_hat_);
  for (long k = 0; k < ctotal; ++k) {
    const std::complex<double> a(freq[k][0], freq[k][1]);
    const std::complex<double> b(khat[k][0], khat[k][1]);
    const std::complex<double> c = a * b;
    freq[k][0] = c.real();
    freq[k][1] = c.imag();
  }
  fftw_execute(static_cast<fftw_plan>(backward_));
  Eigen::VectorXd out(f.size());
  for (std::size_t i = 0; i < slots_.size(); ++i) out[static_cast<long>(i)] = real_[slots_[i]];
  return out;
}

double LatticeKernel::form(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
  const Eigen::VectorXd kg = apply(g);
  return scale_ * (zeta_ * f.dot(g) - f.dot(kg));
}

KernelFormEstimate lattice_gagliardo(const Field& f, const Field& g, double h0) {
  if (f.empty() || g.empty()) return {};
  const FracParams& params = f.parts().front().params();
  KernelFormEstimate est;
  for (int k = 0; k < 3; ++k) {
    const double h = h0 / std::pow(2.0, k);
    auto grid = Grid::lattice(params, h, params.R());
    const GridFunction fg = to_grid(f, grid);
    const GridFunction gg = to_grid(g, grid);
    est.spacings[k] = h;
    est.levels[k] = grid->kernel().form(fg.values(), gg.values());
  }
  const double d1 = est.levels[1] - est.levels[0];
  const double d2 = est.levels[2] - est.levels[1];
  const double denom = d2 - d1;
  if (std::abs(denom) > 1e-300 && std::abs(denom) > 1e-14 * std::abs(d2)) {
    est.value = est.levels[2] - d2 * d2 / denom;
  } else {
    est.value = est.levels[2];
  }
  est.error = std::abs(est.value - est.levels[2]);
  return est;
}

}  // namespace fraclane
