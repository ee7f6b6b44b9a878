#pragma once
// Differential and boundary operators on disk fields: gradient, Laplacian,
// traces, harmonic extension and the Dirichlet-to-Neumann map on the circle.

#include <Eigen/Dense>

#include <utility>

#include "curvdisk/field.hpp"

namespace curvdisk {

// Cartesian components of the gradient.
std::pair<DiskField, DiskField> gradient(const DiskField& f);

DiskField laplacian(const DiskField& f);

BoundaryFunction boundary_trace(const DiskField& f);
Eigen::VectorXd boundary_trace_values(const DiskField& f);

// Outward normal derivative at r = 1 (= d/dr there).
BoundaryFunction normal_deriv(const DiskField& f);
Eigen::VectorXd normal_deriv_values(const DiskField& f);

// d/dtheta of the trace; Nyquist mode differentiates to zero on the grid.
BoundaryFunction tangential_deriv(const BoundaryFunction& g);

// Fourier multiplier |k|; equals normal_deriv(harmonic_extension(g)).
BoundaryFunction dtn(const BoundaryFunction& g);

DiskField harmonic_extension(const BoundaryFunction& g, const GridSpec& spec);

// Spectral interpolation of f at (r, theta), r in [0, 1].
double eval_field(const DiskField& f, double r, double theta);

// f interpolated on the circle of radius r at the grid's theta nodes.
Eigen::VectorXd eval_field_circle(const DiskField& f, double r);

// v(x) = u(f_a(x)) + 2 log |f_a'(x)| with the disk automorphism
// f_a(x) = (a + x) / (1 + conj(a) x). Throws for |a| >= 1.
DiskField moebius_pullback(const DiskField& u, const Eigen::Vector2d& a);

// Raw-matrix kernels shared by the solver (no DiskField wrapping).
namespace detail {
Eigen::MatrixXd dr(const DiskGrid& g, const Eigen::MatrixXd& v);
Eigen::MatrixXd laplacian_raw(const DiskGrid& g, const Eigen::MatrixXd& v);
void gradient_raw(const DiskGrid& g, const Eigen::MatrixXd& v,
                  Eigen::MatrixXd& gx, Eigen::MatrixXd& gy);
// Adjoint of gradient_raw with respect to the plain (unweighted) dot
// product: accumulates gx-part and gy-part transposed actions.
Eigen::MatrixXd gradient_adjoint_raw(const DiskGrid& g,
                                     const Eigen::MatrixXd& gx,
                                     const Eigen::MatrixXd& gy);
// Remove the r = 0 mismatch of angular modes k >= 2 (even-parity profiles
// whose interpolant fails to vanish at the center).
void center_clean(const DiskGrid& g, Eigen::MatrixXd& v);
}  // namespace detail

}  // namespace curvdisk
