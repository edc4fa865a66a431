#include <cmath>

#include "doctest.h"
#include "fraclane/errors.hpp"
#include "fraclane/operator.hpp"
#include "fraclane/spectrum.hpp"
#include "support.hpp"

using namespace fraclane;
using fraclane::testing::Gen;
using fraclane::testing::reference_ground;
using fraclane::testing::reference_params;
using fraclane::testing::rel_diff;

TEST_CASE("first eigenvalue: frozen Galerkin values") {
  CHECK(rel_diff(first_eigenvalue(make_params(1, 0.5, 2.0, 0.0), 64).lambda1, 1.1577738836977838) < 1e-12);
  CHECK(rel_diff(first_eigenvalue(make_params(2, 0.5, 2.0, 0.0), 64).lambda1, 2.006119032939361) < 1e-12);
  CHECK(rel_diff(first_eigenvalue(make_params(2, 0.5, 2.0, 0.0), 32).lambda1, 2.0061190329688605) < 1e-12);
  CHECK(rel_diff(first_eigenvalue(make_params(2, 0.25, 1.5, 0.0), 64).lambda1, 1.3437291118828334) < 1e-12);
  CHECK(rel_diff(first_eigenvalue(make_params(2, 0.75, 2.0, 0.0), 64).lambda1, 3.275937535930736) < 1e-12);
  CHECK_THROWS_AS(first_eigenvalue(reference_params(), 3), InvalidArgument);
}

TEST_CASE("first eigenfunction is positive, normalized and increasing in s") {
  double previous = 0.0;
  for (double s : {0.25, 0.5, 0.75}) {
    const FirstEigenpair e = first_eigenvalue(make_params(2, s, 1.5, 0.0), 24);
    CHECK(e.lambda1 > previous);
    previous = e.lambda1;
    CHECK(l2_inner(e.phi1, e.phi1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.phi1.boundary_amplitude() > 0.0);
    for (double r : {0.0, 0.3, 0.6, 0.9, 0.99}) CHECK(e.phi1.radial(r) > 0.0);
  }
}

TEST_CASE("property: lambda_1 scales like R^{-2s}") {
  Gen gen(41);
  for (int trial = 0; trial < 8; ++trial) {
    const int N = gen.integer(1, 3);
    const double s = gen.uniform(0.2, 0.8);
    const double R = gen.uniform(0.4, 3.0);
    const double l1 = first_eigenvalue(make_params(N, s, 1.2, 0.0, 1.0), 24).lambda1;
    const double lR = first_eigenvalue(make_params(N, s, 1.2, 0.0, R), 24).lambda1;
    CHECK(rel_diff(lR, l1 * std::pow(R, -2.0 * s)) < 1e-12);
  }
}

TEST_CASE("ground state at the reference configuration: frozen values") {
  const GroundState& gs = reference_ground();
  CHECK(rel_diff(gs.m, 2.354073606148488) < 1e-12);
  CHECK(gs.residual < 1e-10);
  CHECK(gs.positive);
  CHECK(gs.monotone);
  CHECK(gs.trace > 0.0);
  CHECK(gs.phi1.coeffs().size() == 32);
  CHECK(rel_diff(gs.lambda1, 2.0061190329688605) < 1e-12);
  const Eigen::VectorXd& c = gs.u.coeffs();
  CHECK(std::abs(c[0] - 2.19969022098) < 1e-9);
  CHECK(std::abs(c[1] + 0.94326084589) < 1e-9);
  CHECK(std::abs(c[2] - 0.37848746647) < 1e-9);
  CHECK(std::abs(c[3] + 0.14968162411) < 1e-9);

  const GroundState half = ground_state(reference_params(0.5 * gs.lambda1), 32);
  CHECK(rel_diff(half.m, 1.227509411864342) < 1e-10);
  CHECK(half.m < gs.m);
}

TEST_CASE("ground state certificate: constraint and energy identity") {
  const GroundState& gs = reference_ground();
  const Field u(gs.u);
  const double p = gs.params.p();
  const double up1 = power_moment(gs, u);
  CHECK(std::abs(std::pow(gs.m, -(p + 1.0) / (p - 1.0)) * up1 - 1.0) < 1e-10);
  const double energy = gagliardo_inner(u, u) - gs.params.lambda() * l2_inner(u, u);
  CHECK(rel_diff(energy, up1) < 1e-8);
}

TEST_CASE("coercivity: lambda at or above lambda_1 is rejected") {
  const double l1 = reference_ground().lambda1;
  CHECK_THROWS_AS(ground_state(reference_params(l1 * 1.0000001), 32), CoercivityError);
  try {
    ground_state(reference_params(1.5 * l1), 32);
    FAIL("expected a coercivity error");
  } catch (const CoercivityError& e) {
    CHECK(e.lambda == doctest::Approx(1.5 * l1));
    CHECK(e.lambda1 == doctest::Approx(l1));
  }
  CHECK_NOTHROW(ground_state(reference_params(-3.0), 16));
}

TEST_CASE("property: weak residual vanishes at every computed ground state") {
  Gen gen(42);
  for (int trial = 0; trial < 8; ++trial) {
    const int N = gen.integer(1, 3);
    FracParams params = gen.params(N);
    const double l1 = first_eigenvalue(params, 20).lambda1;
    params = params.with_lambda(gen.uniform(-0.5, 0.8) * l1);
    const GroundState gs = ground_state(params, 20);
    CHECK(gs.residual < 1e-10);
    CHECK(weak_residual(*gs.space, gs.coeffs) == doctest::Approx(gs.residual).epsilon(1e-3).scale(1e-12));
    CHECK(gs.positive);
    CHECK(gs.monotone);
    CHECK(gs.m > 0.0);
  }
}

TEST_CASE("property: least energy scales with R") {
  Gen gen(43);
  for (int trial = 0; trial < 5; ++trial) {
    const FracParams p1 = gen.params(gen.integer(1, 3));
    const double R = gen.uniform(0.5, 2.5);
    const FracParams pR = make_params(p1.N(), p1.s(), p1.p(), 0.0, R);
    const FracParams q1 = make_params(p1.N(), p1.s(), p1.p(), 0.0, 1.0);
    const double m1 = ground_state(q1, 20).m;
    const double mR = ground_state(pR, 20).m;
    const double N = p1.N(), s = p1.s(), p = p1.p();
    CHECK(rel_diff(mR, m1 * std::pow(R, N - 2.0 * s - 2.0 * N / (p + 1.0))) < 1e-9);
  }
}

TEST_CASE("warm start from a perturbed solution returns the same minimizer") {
  const GroundState& gs = reference_ground();
  auto basis = gs.u.basis_ptr();
  Eigen::VectorXd c = gs.u.coeffs();
  for (int n = 0; n < c.size(); ++n) c[n] *= 1.0 + 0.2 * std::sin(1.7 * n);
  const GroundState again = ground_state(gs.params, 32, {}, Field(SectorFunction(basis, c)));
  CHECK(rel_diff(again.m, gs.m) < 1e-12);
  CHECK((again.u.coeffs() - gs.u.coeffs()).norm() < 1e-9 * gs.u.coeffs().norm());
}

TEST_CASE("quotient minimum in a multi-sector space stays radial") {
  const FracParams params = reference_params();
  auto space = std::make_shared<const DiscreteSpace>(params, 16, 2);
  Eigen::VectorXd init = Eigen::VectorXd::Zero(space->dim());
  init[0] = 1.0;
  init[space->offset(1)] = 0.3;
  init[space->offset(2) + 1] = -0.2;
  const QuotientMinimum q = minimize_quotient(space, init, reference_ground().lambda1);
  CHECK(q.residual < 1e-10);
  CHECK(rel_diff(q.m, ground_state(params, 16).m) < 1e-10);
  CHECK(q.coeffs.segment(space->offset(1), 2 * space->modes()).norm() < 1e-8);
}

TEST_CASE("multistart runs agree") {
  const UniquenessReport r = multistart_uniqueness(reference_params(), 6, 99, 16, 2);
  CHECK(r.runs == 6);
  CHECK(r.failures == 0);
  CHECK(r.max_l2_distance < 1e-6);
  CHECK(r.energy_spread < 1e-9);
  CHECK(r.details.size() == 6);
  for (const auto& d : r.details) CHECK(d.nonradial_norm < 1e-8);
  CHECK_THROWS_AS(multistart_uniqueness(reference_params(), 0, 1), InvalidArgument);
}

TEST_CASE("multistart is reproducible for a fixed seed") {
  const UniquenessReport a = multistart_uniqueness(reference_params(), 3, 7, 12, 1);
  const UniquenessReport b = multistart_uniqueness(reference_params(), 3, 7, 12, 1);
  for (int k = 0; k < 3; ++k) CHECK(a.details[k].m == b.details[k].m);
}
