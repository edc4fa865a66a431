#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <vector>

#include "fraclane/grid.hpp"
#include "fraclane/sector.hpp"

namespace fraclane {

/// Matrices of one angular sector. All forms are normalized so that
/// <f, g> = int f (-Delta)^s g = (c_{N,s}/2) double integral of the kernel form.
struct SectorOperator {
  int ell = 0;
  std::shared_ptr<const SectorBasis> basis;
  Eigen::MatrixXd A;  ///< stiffness (diagonal in this basis)
  Eigen::MatrixXd B;  ///< mass
  Eigen::MatrixXd P;  ///< potential int V phi_m phi_n (empty until attached)
};

SectorOperator assemble_sector(const FracParams& params, int ell, int modes);

/// Values of the sector's radial basis at the nodes of a radial rule (rows = nodes).
Eigen::MatrixXd radial_table(const SectorBasis& basis, const RadialRule& rule);

/// int_B V(|x|) phi_m phi_n with the given radial rule (the angular factor is exact).
Eigen::MatrixXd potential_matrix(const SectorBasis& basis, const RadialRule& rule,
                                 const std::function<double(double)>& V);

/// Exact image of f under (-Delta)^s on B as a polynomial expansion.
SectorImage frac_laplacian_apply(const SectorFunction& f);
std::vector<SectorImage> frac_laplacian_apply(const Field& f);

/// Spectral path: sum_n A_nn f_n g_n (zero across different sectors).
double gagliardo_inner(const SectorFunction& f, const SectorFunction& g);
double gagliardo_inner(const Field& f, const Field& g);
/// Mixed pairing sum_i w_i g_i ((-Delta)^s f)(x_i); g must vanish off B.
double gagliardo_inner(const Field& f, const GridFunction& g);
double gagliardo_inner(const GridFunction& g, const Field& f);
/// Grid path: lattice kernel sums. Polar grids carry no kernel form and are rejected.
double gagliardo_inner(const GridFunction& f, const GridFunction& g);

/// int_B f g.
double l2_inner(const SectorFunction& f, const SectorFunction& g);
double l2_inner(const Field& f, const Field& g);

/// f / d^s on dB at the nodes of an angular rule with n_angular points.
BoundaryTrace boundary_trace(const Field& f, int n_angular = 32);

/// Trace of an arbitrary function (given through its values at axial points)
/// by Richardson extrapolation of f / d^s at d = delta0 / 2^k, k = 0..3,
/// eliminating the d^s, d and d^2 error terms.
BoundaryTrace boundary_trace(const std::function<double(const AxialPoint&)>& f,
                             const FracParams& params, int n_angular = 32, double delta0 = 1e-3);

}  // namespace fraclane
