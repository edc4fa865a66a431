#include "fraclane/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclane/errors.hpp"
#include "fraclane/kernel.hpp"

namespace fraclane {

std::shared_ptr<const Grid> Grid::polar(const FracParams& params, int n_radial, int n_angular) {
  if (n_radial < 1) throw InvalidArgument("polar grid: need at least one radius");
  auto g = std::shared_ptr<Grid>(new Grid(params));
  g->kind_ = GridKind::Polar;
  const RadialRule rr = radial_rule(params.N(), params.R(), n_radial, 2.0 * params.s());
  g->angles_ = angular_rule(params.N(), n_angular);
  g->n_radial_ = n_radial;
  g->n_angular_ = static_cast<int>(g->angles_.t.size());
  for (int i = 0; i < n_radial; ++i) {
    const double r = rr.rho[i] * params.R();
    g->radii_.push_back(r);
    for (int j = 0; j < g->n_angular_; ++j) {
      const double th = g->angles_.theta[j];
      g->x1_.push_back(r * std::cos(th));
      g->x2_.push_back(params.N() == 1 ? 0.0 : r * std::sin(th));
      g->w_.push_back(rr.weights[i] * g->angles_.weights[j]);
      g->inside_.push_back(1);
    }
  }
  return g;
}

std::shared_ptr<const Grid> Grid::lattice(const FracParams& params, double h,
                                          double support_radius) {
  if (params.N() > 2) throw InvalidArgument("lattice grid: only N = 1 and N = 2 are supported");
  if (!(h > 0.0)) throw InvalidArgument("lattice grid: spacing must be positive");
  if (support_radius < params.R()) {
    throw InvalidArgument("lattice grid: support radius must cover the ball");
  }
  auto g = std::shared_ptr<Grid>(new Grid(params));
  g->kind_ = GridKind::Lattice;
  g->h_ = h;
  g->support_ = support_radius;
  const int K = static_cast<int>(std::ceil(support_radius / h));
  g->box_ = K;
  const int side = 2 * K;
  const int nk2 = params.N() == 2 ? side : 1;
  g->lookup_.assign(static_cast<std::size_t>(side) * nk2, -1);
  const double vol = std::pow(h, params.N());
  for (int a = -K; a < K; ++a) {
    for (int b = (params.N() == 2 ? -K : 0); b < (params.N() == 2 ? K : 1); ++b) {
      const double x1 = h * (a + 0.5);
      const double x2 = params.N() == 2 ? h * (b + 0.5) : 0.0;
      const double r = std::hypot(x1, x2);
      if (r >= support_radius) continue;
      const int idx = static_cast<int>(g->x1_.size());
      g->x1_.push_back(x1);
      g->x2_.push_back(x2);
      g->w_.push_back(vol);
      g->inside_.push_back(r < params.R() ? 1 : 0);
      g->k1_.push_back(a);
      g->k2_.push_back(b);
      g->lookup_[static_cast<std::size_t>(a + K) * nk2 + (params.N() == 2 ? b + K : 0)] = idx;
    }
  }
  return g;
}

AxialPoint Grid::point(int i) const {
  AxialPoint p;
  p.r = std::hypot(x1_[i], x2_[i]);
  p.t = p.r > 0.0 ? std::clamp(x1_[i] / p.r, -1.0, 1.0) : 1.0;
  return p;
}

int Grid::find(int a, int b) const {
  if (kind_ != GridKind::Lattice) return -1;
  const int K = box_;
  if (a < -K || a >= K) return -1;
  if (N() == 2) {
    if (b < -K || b >= K) return -1;
    return lookup_[static_cast<std::size_t>(a + K) * (2 * K) + (b + K)];
  }
  if (b != 0) return -1;
  return lookup_[static_cast<std::size_t>(a + K)];
}

std::vector<int> Grid::reflection(double a) const {
  std::vector<int> out(size(), -1);
  if (kind_ == GridKind::Polar) {
    if (a != 0.0) {
      throw InvalidArgument("polar grid is only reflection-closed for the plane x_1 = 0");
    }
    // theta -> pi - theta; angles are symmetric by construction.
    const int na = n_angular_;
    for (int i = 0; i < n_radial_; ++i) {
      for (int j = 0; j < na; ++j) {
        int jm;
        if (N() == 2) {
          jm = ((na - j - 1) + na / 2) % na;
        } else {
          jm = na - 1 - j;
        }
        out[i * na + j] = i * na + jm;
      }
    }
    return out;
  }
  const double m = 2.0 * a / h_;
  const long mi = std::lround(m);
  if (std::abs(m - static_cast<double>(mi)) > 1e-9) {
    throw InvalidArgument("lattice is not reflection-closed for this plane (2a/h must be an integer)");
  }
  for (int i = 0; i < size(); ++i) {
    out[i] = find(static_cast<int>(mi) - k1_[i] - 1, k2_[i]);
  }
  return out;
}

std::vector<std::vector<int>> Grid::neighbours() const {
  std::vector<std::vector<int>> nb(size());
  if (kind_ == GridKind::Polar) {
    const int na = n_angular_;
    const bool cyclic = angles_.full_circle;
    for (int i = 0; i < n_radial_; ++i) {
      for (int j = 0; j < na; ++j) {
        const int idx = i * na + j;
        if (i + 1 < n_radial_) {
          nb[idx].push_back(idx + na);
          nb[idx + na].push_back(idx);
        }
        if (j + 1 < na || cyclic) {
          const int k = i * na + (j + 1) % na;
          if (k != idx) {
            nb[idx].push_back(k);
            nb[k].push_back(idx);
          }
        }
      }
    }
    return nb;
  }
  for (int i = 0; i < size(); ++i) {
    const int cand[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& d : cand) {
      const int j = find(k1_[i] + d[0], k2_[i] + d[1]);
      if (j >= 0) nb[i].push_back(j);
    }
  }
  return nb;
}

const LatticeKernel& Grid::kernel() const {
  if (kind_ != GridKind::Lattice) throw InvalidArgument("kernel sums need a lattice grid");
  std::call_once(kernel_once_, [this] { kernel_ = std::make_shared<const LatticeKernel>(*this); });
  return *kernel_;
}

GridFunction::GridFunction(std::shared_ptr<const Grid> grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidArgument("GridFunction: null grid");
  if (values_.size() != grid_->size()) throw InvalidArgument("GridFunction: size mismatch");
}

double GridFunction::integral() const {
  double acc = 0.0;
  for (int i = 0; i < size(); ++i) acc += grid_->weight(i) * values_[i];
  return acc;
}

namespace {
void same_grid(const GridFunction& a, const GridFunction& b) {
  if (&a.grid() != &b.grid()) throw InvalidArgument("GridFunction: operands live on different grids");
}
}  // namespace

double GridFunction::dot(const GridFunction& g) const {
  same_grid(*this, g);
  double acc = 0.0;
  for (int i = 0; i < size(); ++i) acc += grid_->weight(i) * values_[i] * g.values_[i];
  return acc;
}

GridFunction GridFunction::positive_part() const {
  return GridFunction(grid_, values_.cwiseMax(0.0));
}

GridFunction GridFunction::negative_part() const {
  return GridFunction(grid_, (-values_).cwiseMax(0.0));
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
  Eigen::VectorXd v(values_.size());
  for (int i = 0; i < size(); ++i) v[i] = fn(values_[i]);
  return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::operator+(const GridFunction& o) const {
  same_grid(*this, o);
  return GridFunction(grid_, values_ + o.values_);
}

GridFunction GridFunction::operator-(const GridFunction& o) const {
  same_grid(*this, o);
  return GridFunction(grid_, values_ - o.values_);
}

GridFunction GridFunction::operator*(double a) const { return GridFunction(grid_, values_ * a); }

GridFunction GridFunction::operator*(const GridFunction& o) const {
  same_grid(*this, o);
  return GridFunction(grid_, values_.cwiseProduct(o.values_));
}

GridFunction to_grid(const Field& f, std::shared_ptr<const Grid> grid) {
  if (grid->kind() == GridKind::Polar) {
    for (const auto& part : f.parts()) {
      if (grid->n_radial() < part.modes()) {
        throw InvalidArgument("to_grid: radial resolution is smaller than the basis size");
      }
    }
  }
  Eigen::VectorXd v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = f.value(grid->point(i));
  return GridFunction(std::move(grid), std::move(v));
}

GridFunction to_grid(const std::function<double(const AxialPoint&)>& f,
                     std::shared_ptr<const Grid> grid) {
  Eigen::VectorXd v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = f(grid->point(i));
  return GridFunction(std::move(grid), std::move(v));
}

double eval(const Field& f, std::span<const double> x) { return f.value(x); }

}  // namespace fraclane
