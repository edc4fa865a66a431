#pragma once

#include <Eigen/Core>
#include <array>
#include <mutex>
#include <vector>

#include "fraclane/grid.hpp"
#include "fraclane/sector.hpp"

namespace fraclane {

/// Dirichlet beta function sum_k (-1)^k (2k+1)^{-x}, x > 0.
double dirichlet_beta(double x);

/// sum over nonzero d in Z^N of |d|^{-N-2s} (N = 1 or 2).
double lattice_zeta(int N, double s);

/// Discrete kernel sums on a lattice grid. With f, g extended by zero off the
/// node set, the form
///   c_{N,s} h^{N-2s} [ zeta sum_i f_i g_i - sum_{i != j} f_i g_j |k_i - k_j|^{-N-2s} ]
/// equals (c_{N,s}/2) sum_{i != j} (f_i - f_j)(g_i - g_j) |x_i - x_j|^{-N-2s} h^{2N},
/// the Riemann sum of the Gagliardo form over Z^N x Z^N.
class LatticeKernel {
 public:
  explicit LatticeKernel(const Grid& grid);
  ~LatticeKernel();
  LatticeKernel(const LatticeKernel&) = delete;
  LatticeKernel& operator=(const LatticeKernel&) = delete;

  /// (K f)_i = sum_{j != i} |k_i - k_j|^{-N-2s} f_j
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;
  double form(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;
  double zeta() const { return zeta_; }

 private:
  int dims_;
  int box_;
  int padded_;
  double scale_;
  double zeta_;
  std::vector<long> slots_;
  double* real_ = nullptr;
  void* spectrum_ = nullptr;
  void* kernel_hat_ = nullptr;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
  mutable std::mutex mutex_;
};

struct KernelFormEstimate {
  double value = 0.0;  ///< Aitken-extrapolated value
  double error = 0.0;  ///< |value - finest level|
  std::array<double, 3> levels{};
  std::array<double, 3> spacings{};
};

/// Gagliardo form of two spectral functions from lattice sums at spacings
/// h0, h0/2, h0/4, accelerated by Aitken's delta-squared process.
KernelFormEstimate lattice_gagliardo(const Field& f, const Field& g, double h0);

}  // namespace fraclane
