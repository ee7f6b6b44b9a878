#pragma once
// Scalar fields on the closed unit disk (collocation values on a DiskGrid)
// and scalar functions on the unit circle (truncated Fourier series).

#include <Eigen/Dense>

#include <complex>
#include <functional>

#include "curvdisk/grid.hpp"

namespace curvdisk {

struct DiskField {
  GridSpec grid;
  Eigen::MatrixXd values;  // n_r x n_theta, values(i, j) = f(r_i, theta_j)
};

// Fourier coefficients c_k, k = 0..n_theta/2, of a real function on the
// circle: f(theta) = c_0 + 2 sum_{0<k<n/2} Re(c_k e^{ik theta})
//                        + Re(c_{n/2}) cos((n/2) theta).
// The conjugate half is implicit, so realness holds by construction.
struct BoundaryFunction {
  int n_theta = 0;
  Eigen::VectorXcd coeffs;
};

DiskField constant_field(const GridSpec& g, double c);
DiskField field_from_xy(const GridSpec& g,
                        const std::function<double(double, double)>& f);
DiskField field_from_polar(const GridSpec& g,
                           const std::function<double(double, double)>& f);

// \int_D f dx with the polar Jacobian. Throws on non-finite values.
double quad_disk(const DiskField& f);

// Pointwise exp with an overflow guard: throws std::runtime_error
// ("field out of exponential range") when sup f > 700.
DiskField exp_field(const DiskField& f);
Eigen::VectorXd exp_checked(const Eigen::VectorXd& v);

BoundaryFunction boundary_from_values(const Eigen::VectorXd& vals);
BoundaryFunction boundary_from_callable(
    int n_theta, const std::function<double(double)>& f_of_theta);
BoundaryFunction boundary_constant(int n_theta, double c);
Eigen::VectorXd boundary_values(const BoundaryFunction& g);
double boundary_eval(const BoundaryFunction& g, double theta);

// \int_{dD} g = 2*pi*c_0.
double quad_circle(const BoundaryFunction& g);
double quad_circle_values(const Eigen::VectorXd& vals);

BoundaryFunction rotate(const BoundaryFunction& g, double alpha);
DiskField rotate_field(const DiskField& f, int theta_steps);

// Fraction of spectral energy sitting in the top quarter of angular modes /
// radial degrees; > 1e-6 flags an under-resolved field.
double resolution_defect(const DiskField& f);

}  // namespace curvdisk
