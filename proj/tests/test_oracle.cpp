#include <cmath>

#include "doctest.h"
#include "fraclane/errors.hpp"
#include "fraclane/operator.hpp"
#include "fraclane/oracle.hpp"
#include "support.hpp"

using namespace fraclane;
using fraclane::testing::Gen;
using fraclane::testing::rel_diff;

TEST_CASE("oracle: closed-form image of the torsion-like profile") {
  for (int N : {1, 2, 3}) {
    const double s = 0.5;
    const FracParams params = make_params(N, s, 1.5, 0.0);
    const auto f = [](std::span<const double> x) {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      return r2 < 1.0 ? std::sqrt(1.0 - r2) : 0.0;
    };
    const double expected = 2.0 * std::tgamma(1.5) * std::tgamma(0.5 * N + 0.5) / std::tgamma(0.5 * N);
    std::vector<double> x(static_cast<std::size_t>(N), 0.0);
    x[0] = 0.3;
    const OracleResult r = quadrature_oracle(f, params, x);
    CHECK(r.converged);
    CHECK(std::abs(r.value - expected) <= r.error);
    CHECK(r.error < 1e-5 * expected);
    CHECK(r.epsilons.size() == 4);
  }
}

TEST_CASE("oracle: closed-form image of x_1 (1 - |x|^2)^s") {
  const double s = 0.35;
  const FracParams params = make_params(2, s, 1.5, 0.0);
  const auto f = [s](std::span<const double> x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return r2 < 1.0 ? x[0] * std::pow(1.0 - r2, s) : 0.0;
  };
  const double multiplier = ball_multiplier(2, s, 0, 1);
  for (auto x : {std::array<double, 2>{0.2, 0.1}, std::array<double, 2>{-0.5, 0.4}}) {
    const OracleResult r = quadrature_oracle(f, params, x);
    CHECK(std::abs(r.value - multiplier * x[0]) <= r.error);
  }
}

TEST_CASE("property: spectral images agree with the oracle within its error bar") {
  Gen gen(31);
  int within = 0, total = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const int N = gen.integer(1, 3);
    const FracParams params = make_params(N, gen.uniform(0.25, 0.75), 1.1, 0.0, gen.uniform(0.8, 1.5));
    const Field f = gen.field(params, N == 1 ? 1 : 2, 5);
    for (int q = 0; q < 2; ++q) {
      const std::vector<double> x = gen.point(N, params.R(), 0.15);
      const OracleResult r = quadrature_oracle(f, x);
      const double spectral = f.image_value(axial(x));
      within += std::abs(r.value - spectral) <= r.error;
      ++total;
      CHECK(r.error < 1e-4 * (1.0 + std::abs(spectral)));
    }
  }
  CHECK(within * 20 >= total * 19);
}

TEST_CASE("oracle: argument checks") {
  const FracParams params = make_params(2, 0.5, 2.0, 0.0);
  const auto f = [](std::span<const double>) { return 1.0; };
  const std::array<double, 2> outside{1.2, 0.0};
  CHECK_THROWS_AS(quadrature_oracle(f, params, outside), InvalidArgument);
  const std::array<double, 3> wrong_dim{0.1, 0.0, 0.0};
  CHECK_THROWS_AS(quadrature_oracle(f, params, wrong_dim), InvalidArgument);
  OracleOptions opts;
  opts.levels = 2;
  const std::array<double, 2> x{0.1, 0.0};
  CHECK_THROWS_AS(quadrature_oracle(f, params, x, opts), InvalidArgument);
  CHECK_THROWS_AS(quadrature_oracle(f, make_params(4, 0.5, 1.5, 0.0), std::array<double, 4>{}), InvalidArgument);
}
