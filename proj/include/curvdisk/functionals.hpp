#pragma once
// Energies, first variations in strong form, Hessian action and constraint
// maps of the prescribed-curvature problem and its eps-perturbed family.

#include <Eigen/Dense>

#include <utility>

#include "curvdisk/curvature.hpp"
#include "curvdisk/field.hpp"
#include "curvdisk/operators.hpp"

namespace curvdisk {

struct EnergyBreakdown {
  double total = 0;
  double dirichlet = 0;       // (1/2) int |grad u|^2
  double interior_linear = 0; // 2 K_tilde int u
  double interior_exp = 0;    // -2 int K_eps e^u
  double boundary_linear = 0; // 2 h_tilde int_dD u
  double boundary_exp = 0;    // -4 int_dD h_eps e^{u/2}
};

struct ConstraintState {
  double A = 0;               // int_dD e^{u/2}
  Eigen::Vector2d B{0, 0};    // int_dD x e^{u/2}
  Eigen::Vector3d chi{0, 0, 0};  // (A - 1, B1, B2)
};

EnergyBreakdown energy(const DiskField& u, const PerturbedCoefficients& c);

// T(u) = int_D ( |grad u|^2 / 2 + e^u - u ) >= pi.
double perturbation_T(const DiskField& u);

// Two-path identity used as an invariant: I_eps = (I + eps T) / (1 + eps).
double energy_via_perturbation(const DiskField& u, const CurvatureModel& m,
                               double eps);

// Auxiliary constant-curvature energy J_hh and the bridge term B_{eps,hh}
// with I_eps = J_hh + B_{eps,hh}.
double aux_energy(const DiskField& u, double hh);
double bridge_energy(const DiskField& u, const PerturbedCoefficients& c,
                     double hh);

struct Residual {
  DiskField interior;        // -Lap u + 2 K_tilde - 2 K_eps e^u
  BoundaryFunction boundary;  // dnu u + 2 h_tilde - 2 h_eps e^{u/2}
  Eigen::VectorXd boundary_vals;
};

Residual el_residual(const DiskField& u, const PerturbedCoefficients& c);

// Linearization at u: interior -Lap v - 2 K_eps e^u v,
// boundary dnu v - h_eps e^{u/2} v.
Residual hessian_apply(const DiskField& u, const PerturbedCoefficients& c,
                       const DiskField& v);

// Duality pairing <(R_int, R_bc), v> = int_D R_int v + int_dD R_bc v; equals
// the Gateaux derivative of I_eps when R = el_residual(u).
double pair_residual(const Residual& r, const DiskField& v);

// Second-variation quadratic form
//   Q(v, w) = int grad v . grad w - 2 int K_eps e^u v w
//             - int_dD h_eps e^{u/2} v w,
// evaluated in weak form (exactly symmetric).
double hessian_form(const DiskField& u, const PerturbedCoefficients& c,
                    const DiskField& v, const DiskField& w);

ConstraintState constraint_state(const DiskField& u);
ConstraintState constraint_state_values(const Eigen::VectorXd& trace_vals,
                                        int n_theta);

// Mean-normalized trace-inequality gap
//   int |grad u|^2 + 4 int_dD u - 16 pi log( (1/2pi) int_dD e^{u/2} ) >= 0,
// with equality at constants.
double lebedev_milin_gap(const DiskField& u);

}  // namespace curvdisk
