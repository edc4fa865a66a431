#include <boost/math/special_functions/zeta.hpp>
#include <cmath>

#include "doctest.h"
#include "fraclane/errors.hpp"
#include "fraclane/grid.hpp"
#include "fraclane/kernel.hpp"
#include "fraclane/operator.hpp"
#include "support.hpp"

using namespace fraclane;
using fraclane::testing::Gen;
using fraclane::testing::rel_diff;

namespace {

// (1 - |x/R|^2)^s as a single-mode sector function.
SectorFunction torsion_profile(const FracParams& params) {
  auto basis = SectorBasis::make(params, 0, 1);
  Eigen::VectorXd c(1);
  c[0] = 1.0;
  c[0] = 1.0 / SectorFunction(basis, c).polynomial(0.0);
  return SectorFunction(basis, c);
}

}  // namespace

TEST_CASE("torsion-like profile has a constant image with the Gamma closed form") {
  for (int N : {1, 2, 3}) {
    for (double s : {0.2, 0.5, 0.8}) {
      for (double R : {1.0, 1.7}) {
        const FracParams params = make_params(N, s, 1.2, 0.0, R);
        const SectorFunction f = torsion_profile(params);
        CHECK(f.value(AxialPoint{0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-13));
        const SectorImage img = frac_laplacian_apply(f);
        const double expected = std::pow(2.0, 2.0 * s) * std::tgamma(1.0 + s) * std::tgamma(0.5 * N + s) /
                                std::tgamma(0.5 * N) * std::pow(R, -2.0 * s);
        for (double r : {0.0, 0.3, 0.9, 0.999}) {
          CHECK(rel_diff(img.value(AxialPoint{r * R, 0.2}), expected) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("property: stiffness form is symmetric and equals int f (-Delta)^s g") {
  Gen gen(21);
  for (int trial = 0; trial < 12; ++trial) {
    const FracParams params = gen.params(gen.integer(1, 3));
    const int ell_max = params.N() == 1 ? 1 : 2;
    const Field f = gen.field(params, ell_max, 8);
    const Field g = gen.field(params, ell_max, 8);
    const double fg = gagliardo_inner(f, g);
    CHECK(std::abs(fg - gagliardo_inner(g, f)) < 1e-12 * (1.0 + std::abs(fg)));
    CHECK(gagliardo_inner(f, f) > 0.0);
    // Grid weights carry (1 - rho^2)^{2s}, the pairing only (1 - rho^2)^s: algebraic convergence.
    double previous = 0.0;
    for (int n : {48, 96, 192}) {
      const GridFunction gf = to_grid(g, Grid::polar(params, n, 24));
      const double err = std::abs(gagliardo_inner(f, gf) - fg) / (1.0 + std::abs(fg));
      if (n > 48) CHECK(err < previous / 4.0);
      previous = err;
    }
    CHECK(previous < 1e-5);
  }
}

TEST_CASE("property: L2 products on polar grids are exact for sector fields") {
  Gen gen(22);
  for (int trial = 0; trial < 10; ++trial) {
    const FracParams params = gen.params(gen.integer(2, 3));
    const Field f = gen.field(params, 2, 6);
    const Field g = gen.field(params, 2, 6);
    auto grid = Grid::polar(params, 12, 16);
    const double on_grid = to_grid(f, grid).dot(to_grid(g, grid));
    CHECK(std::abs(on_grid - l2_inner(f, g)) < 1e-12 * (1.0 + std::abs(on_grid)));
  }
}

TEST_CASE("polar grid resolution must cover the basis") {
  const FracParams params = make_params(2, 0.5, 2.0, 0.0);
  Gen gen(23);
  const Field f = gen.field(params, 1, 12);
  CHECK_THROWS_AS(to_grid(f, Grid::polar(params, 8, 16)), InvalidArgument);
}

TEST_CASE("Dirichlet beta and lattice zeta") {
  CHECK(std::abs(dirichlet_beta(1.0) - M_PI / 4.0) < 1e-13);
  CHECK(std::abs(dirichlet_beta(2.0) - 0.915965594177219015) < 1e-13);
  CHECK(std::abs(dirichlet_beta(3.0) - std::pow(M_PI, 3) / 32.0) < 1e-13);
  CHECK(std::abs(lattice_zeta(1, 0.5) - 2.0 * boost::math::zeta(2.0)) < 1e-13);
  // N = 2, s = 1/2: 4 zeta(3/2) beta(3/2)
  double direct = 0.0;
  const int L = 600;
  for (int a = -L; a <= L; ++a)
    for (int b = -L; b <= L; ++b)
      if (a || b) direct += std::pow(double(a) * a + double(b) * b, -1.5);
  const double tail = 2.0 * M_PI / (L + 0.5);  // integral of |x|^-3 beyond the box, roughly
  CHECK(std::abs(lattice_zeta(2, 0.5) - direct) < 1.2 * tail);
  CHECK(lattice_zeta(2, 0.5) > direct);
}

TEST_CASE("property: FFT kernel sums equal the direct double sum") {
  Gen gen(24);
  for (int N : {1, 2}) {
    for (int trial = 0; trial < 4; ++trial) {
      const double s = gen.uniform(0.2, 0.8);
      const FracParams params = make_params(N, s, 1.5, 0.0);
      auto grid = Grid::lattice(params, N == 1 ? 0.05 : 0.2, 1.3);
      const int n = grid->size();
      Eigen::VectorXd f(n), g(n);
      for (int i = 0; i < n; ++i) {
        f[i] = gen.normal();
        g[i] = gen.normal();
      }
      const Eigen::VectorXd Kf = grid->kernel().apply(f);
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          const double d1 = grid->k1(i) - grid->k1(j);
          const double d2 = N == 2 ? grid->k2(i) - grid->k2(j) : 0.0;
          sum += f[j] * std::pow(d1 * d1 + d2 * d2, -0.5 * (N + 2.0 * s));
        }
        worst = std::max(worst, std::abs(sum - Kf[i]));
      }
      CHECK(worst < 1e-11 * (1.0 + Kf.cwiseAbs().maxCoeff()));
      const double form = grid->kernel().form(f, g);
      CHECK(std::abs(form - grid->kernel().form(g, f)) < 1e-11 * (1.0 + std::abs(form)));
    }
  }
}

TEST_CASE("lattice Gagliardo form converges to the spectral value") {
  const FracParams params = make_params(2, 0.5, 2.0, 0.0);
  auto basis = SectorBasis::make(params, 0, 3);
  Eigen::VectorXd c(3);
  c << 1.0, -0.3, 0.1;
  const Field f = SectorFunction(basis, c);
  const KernelFormEstimate est = lattice_gagliardo(f, f, 1.0 / 20.0);
  const double exact = gagliardo_inner(f, f);
  CHECK(rel_diff(est.value, exact) < 5e-4);
  CHECK(std::abs(est.levels[2] - exact) < std::abs(est.levels[0] - exact));
  CHECK(std::abs(est.value - exact) <= est.error);
}

TEST_CASE("polarization reflections on lattices") {
  const FracParams params = make_params(2, 0.5, 2.0, 0.0);
  auto grid = Grid::lattice(params, 0.05, 1.6);
  for (double a : {0.0, 0.1, -0.3}) {
    const std::vector<int> ref = grid->reflection(a);
    for (int i = 0; i < grid->size(); ++i) {
      if (ref[i] < 0) continue;
      CHECK(ref[ref[i]] == i);
      CHECK(grid->x1(ref[i]) == doctest::Approx(2.0 * a - grid->x1(i)));
      CHECK(grid->x2(ref[i]) == doctest::Approx(grid->x2(i)));
    }
  }
  CHECK_THROWS_AS(grid->reflection(0.07), InvalidArgument);
  CHECK_THROWS_AS(Grid::polar(params, 8, 8)->reflection(0.1), InvalidArgument);
  CHECK_THROWS_AS(Grid::lattice(make_params(3, 0.5, 1.5, 0.0), 0.1, 1.2), InvalidArgument);
}

TEST_CASE("grid Gagliardo form needs a lattice") {
  const FracParams params = make_params(2, 0.5, 2.0, 0.0);
  auto polar = Grid::polar(params, 8, 8);
  const GridFunction g = to_grid([](const AxialPoint& x) { return 1.0 - x.r * x.r; }, polar);
  CHECK_THROWS_AS(gagliardo_inner(g, g), InvalidArgument);
}

TEST_CASE("boundary traces: spectral and extrapolated") {
  Gen gen(25);
  const FracParams params = make_params(2, 0.5, 2.0, 0.0);
  const Field f = gen.field(params, 2, 6);
  const BoundaryTrace exact = boundary_trace(f, 16);
  const BoundaryTrace approx =
      boundary_trace([&](const AxialPoint& x) { return f.value(x); }, params, 16);
  for (std::size_t j = 0; j < exact.values.size(); ++j) {
    CHECK(std::abs(exact.values[j] - approx.values[j]) < 1e-6 * (1.0 + std::abs(exact.values[j])));
    CHECK(exact.values[j] == doctest::Approx(f.boundary_value(exact.t[j])));
  }
  const BoundaryTrace single = boundary_trace(Field(f.parts()[1]), 16);
  CHECK(single.ell == 1);
  CHECK(single.amplitude == doctest::Approx(f.parts()[1].boundary_amplitude()));
}
