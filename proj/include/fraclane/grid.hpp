#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "fraclane/params.hpp"
#include "fraclane/sector.hpp"
#include "fraclane/special.hpp"

namespace fraclane {

class LatticeKernel;

enum class GridKind {
  /// Gauss-Jacobi radii times an angular rule. For N = 2 the full circle is
  /// sampled; for N >= 3 the meridian half-plane (functions axially symmetric).
  Polar,
  /// Uniform Cartesian nodes h (k + 1/2) inside a support ball (N = 1, 2).
  Lattice,
};

/// Node set with positive quadrature weights. Node coordinates are stored in
/// the meridian plane: x1 along the axis e_1, x2 the signed (N = 2) or
/// nonnegative (N >= 3) distance to the axis.
class Grid {
 public:
  /// Polar grid with n_radial Gauss-Jacobi radii (exponent 2s, so L^2 products
  /// of sector functions integrate exactly) and n_angular directions.
  static std::shared_ptr<const Grid> polar(const FracParams& params, int n_radial, int n_angular);
  /// Lattice grid of spacing h covering |x| < support_radius; N must be 1 or 2.
  static std::shared_ptr<const Grid> lattice(const FracParams& params, double h,
                                             double support_radius);

  GridKind kind() const { return kind_; }
  const FracParams& params() const { return params_; }
  int N() const { return params_.N(); }
  double R() const { return params_.R(); }
  int size() const { return static_cast<int>(x1_.size()); }

  double x1(int i) const { return x1_[i]; }
  double x2(int i) const { return x2_[i]; }
  double weight(int i) const { return w_[i]; }
  AxialPoint point(int i) const;
  /// True when the node lies in the open ball B_R.
  bool inside(int i) const { return inside_[i] != 0; }

  // Polar layout: index = i_radial * n_angular + j_angular.
  int n_radial() const { return n_radial_; }
  int n_angular() const { return n_angular_; }
  double radius(int i_radial) const { return radii_[i_radial]; }
  const AngularRule& angles() const { return angles_; }

  // Lattice layout.
  double spacing() const { return h_; }
  double support_radius() const { return support_; }
  /// Integer coordinates (node at h (k + 1/2)).
  int k1(int i) const { return k1_[i]; }
  int k2(int i) const { return k2_[i]; }
  /// Node index with the given integer coordinates, or -1.
  int find(int k1, int k2) const;

  /// Index of the mirror image of node i through {x_1 = a}, or -1 when the
  /// mirror point lies outside the node set. Throws when the node set is not
  /// closed under that reflection (polar grids: only a = 0; lattices: 2a/h
  /// must be an integer).
  std::vector<int> reflection(double a) const;

  /// Adjacency used for nodal-domain counting.
  std::vector<std::vector<int>> neighbours() const;

  /// FFT-backed kernel sums for lattice grids (built on first use).
  const LatticeKernel& kernel() const;

 private:
  explicit Grid(const FracParams& params) : params_(params) {}

  GridKind kind_ = GridKind::Polar;
  FracParams params_;
  std::vector<double> x1_, x2_, w_;
  std::vector<char> inside_;
  int n_radial_ = 0, n_angular_ = 0;
  std::vector<double> radii_;
  AngularRule angles_;
  double h_ = 0.0, support_ = 0.0;
  int box_ = 0;
  std::vector<int> k1_, k2_, lookup_;

  mutable std::once_flag kernel_once_;
  mutable std::shared_ptr<const LatticeKernel> kernel_;
};

/// Point values on a Grid.
class GridFunction {
 public:
  GridFunction(std::shared_ptr<const Grid> grid, Eigen::VectorXd values);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](int i) const { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }

  /// sum_i w_i f_i
  double integral() const;
  /// sum_i w_i f_i g_i (same grid required)
  double dot(const GridFunction& g) const;
  double l2_norm_squared() const { return dot(*this); }

  GridFunction positive_part() const;
  /// v^- = max(-v, 0), so v = v^+ - v^-.
  GridFunction negative_part() const;
  GridFunction map(const std::function<double(double)>& fn) const;
  GridFunction operator+(const GridFunction& o) const;
  GridFunction operator-(const GridFunction& o) const;
  GridFunction operator*(double a) const;
  /// Pointwise product.
  GridFunction operator*(const GridFunction& o) const;

 private:
  std::shared_ptr<const Grid> grid_;
  Eigen::VectorXd values_;
};

/// Samples a spectral function on a grid. For polar grids the radial
/// resolution must be at least the largest basis size of the field.
GridFunction to_grid(const Field& f, std::shared_ptr<const Grid> grid);
/// Samples an arbitrary function of a point (coordinates x1, x2 in the meridian plane).
GridFunction to_grid(const std::function<double(const AxialPoint&)>& f,
                     std::shared_ptr<const Grid> grid);

/// eval: pointwise value of a spectral function.
double eval(const Field& f, std::span<const double> x);

}  // namespace fraclane
