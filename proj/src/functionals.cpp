#include "curvdisk/functionals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace curvdisk {

namespace {
using Eigen::MatrixXd;
using Eigen::VectorXd;
constexpr double kPi = std::numbers::pi;

double dirichlet_energy(const DiskField& u) {
  const DiskGrid& g = disk_grid(u.grid);
  MatrixXd gx, gy;
  detail::gradient_raw(g, u.values, gx, gy);
  DiskField sq{u.grid, (gx.array().square() + gy.array().square()).matrix()};
  return 0.5 * quad_disk(sq);
}
}  // namespace

EnergyBreakdown energy(const DiskField& u, const PerturbedCoefficients& c) {
  EnergyBreakdown e;
  e.dirichlet = dirichlet_energy(u);
  e.interior_linear = 2.0 * c.K_tilde * quad_disk(u);

  DiskField eu = exp_field(u);
  DiskField keu{u.grid, (c.K_eps.values.array() * eu.values.array()).matrix()};
  e.interior_exp = -2.0 * quad_disk(keu);

  VectorXd tr = boundary_trace_values(u);
  e.boundary_linear = 2.0 * c.h_tilde * quad_circle_values(tr);
  VectorXd he = boundary_values(c.h_eps).array() *
                exp_checked(tr / 2.0).array();
  e.boundary_exp = -4.0 * quad_circle_values(he);

  e.total = e.dirichlet + e.interior_linear + e.interior_exp +
            e.boundary_linear + e.boundary_exp;
  return e;
}

double perturbation_T(const DiskField& u) {
  DiskField eu = exp_field(u);
  DiskField integrand{u.grid, (eu.values - u.values)};
  return dirichlet_energy(u) + quad_disk(integrand);
}

double energy_via_perturbation(const DiskField& u, const CurvatureModel& m,
                               double eps) {
  PerturbedCoefficients c0 = perturb(m, 0.0);
  double base = energy(u, c0).total;
  return (base + eps * perturbation_T(u)) / (1.0 + eps);
}

double aux_energy(const DiskField& u, double hh) {
  DiskField eu = exp_field(u);
  VectorXd tr = boundary_trace_values(u);
  VectorXd eu2 = exp_checked(tr / 2.0);
  return dirichlet_energy(u) + 2.0 * quad_disk(eu) +
         2.0 * quad_circle_values(tr) - 4.0 * hh * quad_circle_values(eu2);
}

double bridge_energy(const DiskField& u, const PerturbedCoefficients& c,
                     double hh) {
  DiskField eu = exp_field(u);
  DiskField kp1{u.grid,
                ((c.K_eps.values.array() + 1.0) * eu.values.array()).matrix()};
  VectorXd tr = boundary_trace_values(u);
  VectorXd eu2 = exp_checked(tr / 2.0);
  VectorXd hm = (boundary_values(c.h_eps).array() - hh) * eu2.array();
  return 2.0 * c.K_tilde * quad_disk(u) - 2.0 * quad_disk(kp1) +
         2.0 * (c.h_tilde - 1.0) * quad_circle_values(tr) -
         4.0 * quad_circle_values(hm);
}

Residual el_residual(const DiskField& u, const PerturbedCoefficients& c) {
  DiskField eu = exp_field(u);
  DiskField lap = laplacian(u);
  Residual r;
  r.interior = DiskField{
      u.grid, (-lap.values.array() + 2.0 * c.K_tilde -
               2.0 * c.K_eps.values.array() * eu.values.array())
                  .matrix()};
  VectorXd tr = boundary_trace_values(u);
  r.boundary_vals = normal_deriv_values(u).array() + 2.0 * c.h_tilde -
                    2.0 * boundary_values(c.h_eps).array() *
                        exp_checked(tr / 2.0).array();
  r.boundary = boundary_from_values(r.boundary_vals);
  return r;
}

Residual hessian_apply(const DiskField& u, const PerturbedCoefficients& c,
                       const DiskField& v) {
  DiskField eu = exp_field(u);
  DiskField lap = laplacian(v);
  Residual r;
  r.interior = DiskField{
      u.grid, (-lap.values.array() -
               2.0 * c.K_eps.values.array() * eu.values.array() *
                   v.values.array())
                  .matrix()};
  VectorXd tru = boundary_trace_values(u);
  VectorXd trv = boundary_trace_values(v);
  r.boundary_vals = normal_deriv_values(v).array() -
                    boundary_values(c.h_eps).array() *
                        exp_checked(tru / 2.0).array() * trv.array();
  r.boundary = boundary_from_values(r.boundary_vals);
  return r;
}

double pair_residual(const Residual& r, const DiskField& v) {
  DiskField prod{v.grid,
                 (r.interior.values.array() * v.values.array()).matrix()};
  VectorXd trv = boundary_trace_values(v);
  return quad_disk(prod) +
         quad_circle_values((r.boundary_vals.array() * trv.array()).matrix());
}

double hessian_form(const DiskField& u, const PerturbedCoefficients& c,
                    const DiskField& v, const DiskField& w) {
  const DiskGrid& g = disk_grid(u.grid);
  MatrixXd gvx, gvy, gwx, gwy;
  detail::gradient_raw(g, v.values, gvx, gvy);
  detail::gradient_raw(g, w.values, gwx, gwy);
  DiskField grads{u.grid,
                  (gvx.array() * gwx.array() + gvy.array() * gwy.array())
                      .matrix()};
  DiskField eu = exp_field(u);
  DiskField bulk{u.grid, (c.K_eps.values.array() * eu.values.array() *
                          v.values.array() * w.values.array())
                             .matrix()};
  VectorXd tru = boundary_trace_values(u);
  VectorXd bnd = boundary_values(c.h_eps).array() *
                 exp_checked(tru / 2.0).array() *
                 boundary_trace_values(v).array() *
                 boundary_trace_values(w).array();
  return quad_disk(grads) - 2.0 * quad_disk(bulk) - quad_circle_values(bnd);
}

ConstraintState constraint_state_values(const VectorXd& trace_vals,
                                        int n_theta) {
  ConstraintState s;
  VectorXd e2 = exp_checked(trace_vals / 2.0);
  const double wt = 2.0 * kPi / n_theta;
  s.A = wt * e2.sum();
  double b1 = 0, b2 = 0;
  for (int j = 0; j < n_theta; ++j) {
    double th = 2.0 * kPi * j / n_theta;
    b1 += std::cos(th) * e2(j);
    b2 += std::sin(th) * e2(j);
  }
  s.B = Eigen::Vector2d(wt * b1, wt * b2);
  s.chi = Eigen::Vector3d(s.A - 1.0, s.B(0), s.B(1));
  return s;
}

ConstraintState constraint_state(const DiskField& u) {
  return constraint_state_values(boundary_trace_values(u), u.grid.n_theta);
}

double lebedev_milin_gap(const DiskField& u) {
  VectorXd tr = boundary_trace_values(u);
  double mass = quad_circle_values(exp_checked(tr / 2.0));
  return 2.0 * dirichlet_energy(u) + 4.0 * quad_circle_values(tr) -
         16.0 * kPi * std::log(mass / (2.0 * kPi));
}

}  // namespace curvdisk
