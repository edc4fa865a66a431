#include <cmath>

#include "doctest.h"
#include "fraclane/errors.hpp"
#include "fraclane/operator.hpp"
#include "fraclane/symmetry.hpp"
#include "support.hpp"

using namespace fraclane;
using fraclane::testing::admissible_sample;
using fraclane::testing::Gen;
using fraclane::testing::reference_ground;
using fraclane::testing::reference_spectrum;

namespace {

std::shared_ptr<const Grid> reference_lattice() {
  static auto grid = Grid::lattice(reference_ground().params, 0.05, 1.65);
  return grid;
}

std::shared_ptr<const Grid> reference_polar() {
  static auto grid = Grid::polar(reference_ground().params, 48, 64);
  return grid;
}

const std::vector<double> kOffsets{0.0, 0.1, 0.3};

}  // namespace

TEST_CASE("make_plane rejects planes that miss the ball") {
  CHECK_THROWS_AS(make_plane(1.0, 1.0), InvalidArgument);
  CHECK_NOTHROW(make_plane(-0.99, 1.0));
}

TEST_CASE("property: polarization preserves L2 norms and is idempotent") {
  Gen gen(61);
  const Field phi1(reference_ground().phi1);
  for (int trial = 0; trial < 15; ++trial) {
    const GridFunction v = admissible_sample(gen, phi1, reference_lattice(), kOffsets);
    for (double a : kOffsets) {
      const Polarized pv = polarize(v, make_plane(a, 1.0));
      CHECK(pv.admissible);
      const double n0 = v.l2_norm_squared();
      CHECK(std::abs(pv.value.l2_norm_squared() - n0) <= 1e-13 * n0);
      const Polarized twice = polarize(pv.value, make_plane(a, 1.0));
      CHECK((twice.value.values() - pv.value.values()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("property: polarization inequalities hold with nonnegative slack") {
  Gen gen(62);
  const GroundState& gs = reference_ground();
  const Field phi1(gs.phi1);
  for (int trial = 0; trial < 10; ++trial) {
    const GridFunction v = admissible_sample(gen, phi1, reference_lattice(), kOffsets);
    for (double a : kOffsets) {
      const PolarizationReport r = polarization_report(v, make_plane(a, 1.0), gs);
      const double scale = std::max({std::abs(r.plus_v.total), std::abs(r.minus_v.total), 1.0});
      CHECK(r.slack_plus >= -1e-6 * scale);
      CHECK(r.slack_minus >= -1e-6 * scale);
      CHECK(r.gagliardo_drop >= -1e-9 * scale);
      CHECK(r.l2_defect <= 1e-13 * v.l2_norm_squared());
      CHECK(r.plus_v.total == doctest::Approx(r.plus_v.gagliardo + r.plus_v.potential + r.plus_v.mass));
    }
  }
}

TEST_CASE("polarization: radially decreasing functions are fixed points") {
  const GroundState& gs = reference_ground();
  const GridFunction u = to_grid(Field(gs.u), reference_lattice());
  for (double a : {0.0, 0.1, 0.3}) {
    const Polarized pu = polarize(u, make_plane(a, 1.0));
    CHECK((pu.value.values() - u.values()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("polarization: inadmissible inputs are flagged and rejected") {
  const GroundState& gs = reference_ground();
  const Field v2(reference_spectrum().first_in_sector(1)->v);
  // v2 < 0 on the left crescent, whose mirror image lies outside B.
  const GridFunction g = to_grid(v2, reference_lattice());
  CHECK_FALSE(polarize(g, make_plane(0.3, 1.0)).admissible);
  CHECK_THROWS_AS(polarization_report(g, make_plane(0.3, 1.0), gs), InvalidArgument);
  CHECK_THROWS_AS(polarization_report(to_grid(v2, reference_polar()), make_plane(0.0, 1.0), gs), InvalidArgument);
}

TEST_CASE("variational principle premises") {
  const GroundState& gs = reference_ground();
  const SpectrumResult& sp = reference_spectrum();
  const Field v2(sp.first_in_sector(1)->v);
  const Field phi1(sp.first_in_sector(0)->v);
  const VariationalReport exact = variational_principle_check(v2, reference_polar(), gs, sp.mu2);
  CHECK(exact.holds);
  CHECK(std::abs(exact.slack_plus) < 1e-8 * exact.scale);
  CHECK(std::abs(exact.slack_minus) < 1e-8 * exact.scale);
  for (double c : {0.3, -0.3}) {
    const VariationalReport mixed = variational_principle_check(v2 + phi1 * c, reference_polar(), gs, sp.mu2);
    CHECK_FALSE(mixed.holds);
  }
  CHECK_THROWS_AS(variational_principle_check(Field(gs.u), reference_polar(), gs, sp.mu2), InvalidArgument);
}

TEST_CASE("antisymmetrization") {
  const GroundState& gs = reference_ground();
  const SpectrumResult& sp = reference_spectrum();
  const Antisymmetrized au = antisymmetrize(to_grid(Field(gs.u), reference_lattice()));
  CHECK(au.vanishes);
  const Antisymmetrized av = antisymmetrize(to_grid(Field(sp.first_in_sector(1)->v), reference_lattice()));
  CHECK_FALSE(av.vanishes);
  const Antisymmetrized ap = antisymmetrize(to_grid(Field(gs.u), reference_polar()));
  CHECK(ap.vanishes);
}

TEST_CASE("foliated Schwarz symmetry of the second eigenfunction") {
  const SpectrumResult& sp = reference_spectrum();
  const FoliatedSchwarzReport r = foliated_schwarz_check(to_grid(Field(sp.first_in_sector(1)->v), reference_polar()));
  CHECK(r.passes);
  CHECK(r.axial_residual < 1e-12);
  const FoliatedSchwarzReport r2 =
      foliated_schwarz_check(to_grid(Field(sp.first_in_sector(2)->v), reference_polar()));
  CHECK_FALSE(r2.passes);
  CHECK_THROWS_AS(foliated_schwarz_check(to_grid(Field(reference_ground().u), reference_lattice())), InvalidArgument);
}

TEST_CASE("nodal structure") {
  const GroundState& gs = reference_ground();
  const SpectrumResult& sp = reference_spectrum();
  const NodalReport v2 = nodal_structure(to_grid(Field(sp.first_in_sector(1)->v), reference_polar()));
  CHECK(v2.regions == 2);
  CHECK(v2.positive_regions == 1);
  CHECK(v2.negative_regions == 1);
  CHECK(v2.half_ball_split);
  CHECK(v2.radial_sign_changes == 0);
  CHECK(nodal_structure(to_grid(Field(gs.u), reference_polar())).regions == 1);
  const SectorEigenpairs radial = linearized_sector_spectrum(gs, 0, 2);
  const NodalReport second_radial = nodal_structure(to_grid(Field(radial.vectors[1]), reference_polar()));
  CHECK(second_radial.regions == 2);
  CHECK(second_radial.radial_sign_changes == 1);
  CHECK_FALSE(second_radial.half_ball_split);
  const NodalReport l2 = nodal_structure(to_grid(Field(sp.first_in_sector(2)->v), reference_polar()));
  CHECK(l2.regions == 4);
  const NodalReport lat = nodal_structure(to_grid(Field(sp.first_in_sector(1)->v), reference_lattice()));
  CHECK(lat.regions == 2);
}

TEST_CASE("boundary trace of v2 is one-signed on each half sphere") {
  const BoundaryTrace tr = boundary_trace(Field(reference_spectrum().first_in_sector(1)->v), 32);
  for (std::size_t j = 0; j < tr.t.size(); ++j) {
    if (tr.t[j] > 0.0) CHECK(tr.values[j] > 0.0);
    if (tr.t[j] < 0.0) CHECK(tr.values[j] < 0.0);
  }
}
