#pragma once
// The explicit solution family of the constant-curvature problem
//
//   u_a(x) = 2 log( 2 phi (1-|a|^2) / (phi^2 |1 - conj(a) x|^2 + k |x-a|^2) ),
//
// its Moebius transport, and every closed-form integral the family admits.

#include <Eigen/Dense>

#include <utility>

#include "curvdisk/field.hpp"

namespace curvdisk {

struct BubbleParams {
  Eigen::Vector2d a{0, 0};  // concentration point, |a| < 1
  double phi = 0;           // > 1
  double k = -1;            // frozen Gaussian curvature, < 0
  double hh = 0;            // frozen geodesic curvature, > 1

  // phi = hh + sqrt(hh^2 + k); requires hh^2 + k > 0.
  static BubbleParams from_curvatures(const Eigen::Vector2d& a, double hh,
                                      double k);
  // k = -1 family member: hh = (phi + 1/phi) / 2.
  static BubbleParams from_phi(const Eigen::Vector2d& a, double phi);
};

// Collocation values of u_a. Throws std::invalid_argument
// ("invalid bubble parameters") if the denominator is not positive.
DiskField bubble_field(const BubbleParams& p, const GridSpec& grid);

double bubble_eval(const BubbleParams& p, double x1, double x2);
Eigen::VectorXd bubble_trace_values(const BubbleParams& p, int n_theta);

// Psi(x, phi, lambda) = u_{(lambda,0)} with k = -1.
DiskField psi_field(double phi, double lambda, const GridSpec& grid);

// Closed-form masses of the k = -1 family (lambda-independent):
//   boundary: 2 pi / sqrt(hh^2 - 1),   interior: 2 pi (hh/sqrt(hh^2-1) - 1).
double bubble_boundary_mass(double hh);
double bubble_interior_mass(double hh);

// J_hh(Psi(.,phi,lambda)) = -8 pi (1 + log(phi/2)), no quadrature.
double bubble_energy(double phi);

// |f_a'| at a grid, for the mass identities int |f'|^2 = pi, etc.
DiskField moebius_jacobian_sqrt(const Eigen::Vector2d& a, const GridSpec& g);
Eigen::VectorXd moebius_boundary_jacobian(const Eigen::Vector2d& a,
                                          int n_theta);

// Z_j(x) = x_j / (phi^2 + k |x|^2), the frozen-kernel directions.
std::pair<DiskField, DiskField> kernel_fields(const BubbleParams& p,
                                              const GridSpec& grid);

// (int_D x1 u_a, int_dD x1 u_a) for a = (a, 0); grids are chosen internally
// to resolve the concentration scale 1 - a.
std::pair<double, double> appendix_limits(double a, double phi, double k);

// Largest concentration |a| that a given grid resolves at tail tolerance
// 1e-4 (reported, never enforced).
double resolvable_concentration(const GridSpec& grid, double phi, double k);

}  // namespace curvdisk
