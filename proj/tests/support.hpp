#pragma once

#include <cmath>
#include <cstdint>
#include <array>
#include <random>
#include <stdexcept>
#include <vector>

#include "fraclane/grid.hpp"
#include "fraclane/ground_state.hpp"
#include "fraclane/params.hpp"
#include "fraclane/sector.hpp"
#include "fraclane/spectrum.hpp"
#include "fraclane/symmetry.hpp"

namespace fraclane::testing {

// Small hand-rolled generator set for the property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  std::mt19937_64& engine() { return rng_; }

  /// Admissible (N, s, p) with p inside the subcritical window, lambda = 0.
  FracParams params(int N) {
    const double s = uniform(0.2, 0.85);
    const double crit = N > 2.0 * s ? (N + 2.0 * s) / (N - 2.0 * s) : 6.0;
    const double p = 1.0 + uniform(0.15, 0.85) * (std::min(crit, 6.0) - 1.0);
    return make_params(N, s, p, 0.0, uniform(0.5, 2.0));
  }

  /// Smooth random field in sectors 0..ell_max, coefficients decaying like (1+n)^-2.
  Field field(const FracParams& params, int ell_max, int modes) {
    std::vector<SectorFunction> parts;
    for (int ell = 0; ell <= ell_max; ++ell) {
      auto basis = SectorBasis::make(params, ell, modes);
      Eigen::VectorXd c(modes);
      for (int n = 0; n < modes; ++n) c[n] = normal() / ((1.0 + n) * (1.0 + n));
      parts.emplace_back(basis, c);
    }
    return Field(parts);
  }

  /// Random interior point of B_R at distance >= margin R from the boundary.
  std::vector<double> point(int N, double R, double margin = 0.1) {
    std::vector<double> x(static_cast<std::size_t>(N));
    double n2 = 0.0;
    for (auto& v : x) {
      v = normal();
      n2 += v * v;
    }
    const double r = R * (1.0 - margin) * std::pow(uniform(0.0, 1.0), 1.0 / N);
    for (auto& v : x) v *= r / std::sqrt(n2);
    return x;
  }

 private:
  std::mt19937_64 rng_;
};

/// Lattice function c phi1 + sum of compact bumps of random sign centred in
/// |x| < 0.4 R, resampled until P_a keeps it admissible for every offset.
/// With `sign_changing`, only samples that take both signs are accepted.
inline GridFunction admissible_sample(Gen& gen, const Field& phi1, std::shared_ptr<const Grid> lattice,
                                      const std::vector<double>& offsets, bool sign_changing = true) {
  const double R = lattice->R();
  for (int attempt = 0; attempt < 500; ++attempt) {
    const double c = gen.uniform(0.1, 1.0);
    const int bumps = gen.integer(1, 4);
    std::vector<std::array<double, 4>> b(bumps);
    for (auto& q : b) {
      const double rho = 0.4 * R * std::sqrt(gen.uniform(0.0, 1.0));
      const double th = gen.uniform(0.0, 2.0 * M_PI);
      q = {rho * std::cos(th), rho * std::sin(th), R * gen.uniform(0.08, 0.35),
           (gen.coin() ? 1.0 : -1.0) * gen.uniform(0.3, 3.0)};
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(lattice->size());
    for (int i = 0; i < lattice->size(); ++i) {
      if (!lattice->inside(i)) continue;
      const std::array<double, 2> x{lattice->x1(i), lattice->x2(i)};
      double val = c * phi1.value(std::span<const double>(x));
      for (const auto& q : b) {
        const double t = ((x[0] - q[0]) * (x[0] - q[0]) + (x[1] - q[1]) * (x[1] - q[1])) / (q[2] * q[2]);
        if (t < 1.0) val += q[3] * (1.0 - t) * (1.0 - t);
      }
      v[i] = val;
    }
    if (sign_changing && !(v.minCoeff() < 0.0 && v.maxCoeff() > 0.0)) continue;
    GridFunction g(lattice, v);
    bool ok = true;
    for (double a : offsets) ok = ok && polarize(g, make_plane(a, R)).admissible;
    if (ok) return g;
  }
  throw std::runtime_error("admissible_sample: no admissible sample found");
}

inline FracParams reference_params(double lambda = 0.0) { return make_params(2, 0.5, 2.0, lambda, 1.0); }

/// Ground state of the reference configuration (N=2, s=1/2, p=2, M=32), lambda = 0.
inline const GroundState& reference_ground() {
  static const GroundState gs = ground_state(reference_params(), 32);
  return gs;
}

inline const SpectrumResult& reference_spectrum() {
  static const SpectrumResult sp = full_spectrum(reference_ground());
  return sp;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace fraclane::testing
