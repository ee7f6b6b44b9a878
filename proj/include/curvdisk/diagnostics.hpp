#pragma once
// Necessary-condition residuals (Gauss-Bonnet, Kazdan-Warner, Pohozaev),
// blow-up profile fitting against the explicit family, concentration
// measures, and the localization checks on Phi at the fitted point.

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>

#include "curvdisk/bubbles.hpp"
#include "curvdisk/curvature.hpp"
#include "curvdisk/expr.hpp"
#include "curvdisk/functionals.hpp"

namespace curvdisk {

struct IdentityResiduals {
  double gauss_bonnet = 0;
  double kazdan_warner = 0;
  std::map<std::string, double> pohozaev;  // field-name -> residual
};

// | int K_eps e^u + int_dD h_eps e^{u/2} - (2 pi h_tilde + pi K_tilde) |.
double gauss_bonnet_residual(const DiskField& u,
                             const PerturbedCoefficients& c);

// |LHS - RHS| of the full identity with F = (1 - x1^2 + x2^2, -2 x1 x2);
// boundary side 4 x2 dtau(h_eps) e^{u/2} - 2 x1 (h_tilde - 1) u + 4 x1 h_tilde,
// interior side 4 x1 K_tilde u + e^u grad K_eps . F - 4 x1 K_tilde.
double kazdan_warner_residual(const DiskField& u,
                              const PerturbedCoefficients& c);

// The reduced constant-coefficient form; agrees with the full form since
// K_tilde, h_tilde are always constants.
double kazdan_warner_residual_reduced(const DiskField& u,
                                      const PerturbedCoefficients& c);

// |boundary side - interior side| for a vector field F given in the
// expression grammar; DF comes from symbolic differentiation.
double pohozaev_residual(const DiskField& u, const PerturbedCoefficients& c,
                         const std::string& F1, const std::string& F2);

IdentityResiduals identity_residuals(const DiskField& u,
                                     const PerturbedCoefficients& c);

struct BlowupFit {
  Eigen::Vector2d a_fit{0, 0};
  double phi_hat = 0;
  double k_hat = 0;
  double h_hat = 0;
  DiskField psi;             // u - u_{a_fit}
  double psi_sup = 0;
  double interior_mass = 0;  // int e^u
  double boundary_mass = 0;  // int_dD e^{u/2}
  Eigen::Vector2d p{1, 0};   // a_fit / |a_fit| ((1,0) when a_fit = 0)
  double dtau_phi_at_p = 0;
  double dnu_phi_at_p = 0;
  bool beyond_resolution = false;  // optimizer pinned at |a| >= 1 - 1e-6
};

// Fits a over the disk minimizing sup |u - u_a| (coordinate descent from the
// boundary-mass barycenter, step tolerance 1e-8), with profile coefficients
// frozen at a/|a| from the eps-perturbed model data.
BlowupFit blowup_fit(const DiskField& u, const CurvatureModel& model,
                     double eps);

struct ConcentrationReport {
  double total_interior = 0;   // int K e^u
  double total_boundary = 0;   // int_dD h e^{u/2}
  double predicted_interior = 0;  // 2 pi (1 - h(p)/sqrt(h^2(p)+K(p)))
  double predicted_boundary = 0;  // 2 pi h(p)/sqrt(h^2(p)+K(p))
  double peak_fraction = 0;    // boundary-mass share of |th - th_p| < 10(1-|a|)
};

ConcentrationReport concentration_masses(const DiskField& u,
                                         const CurvatureModel& model,
                                         const BlowupFit& fit);

struct LocalizationVerdict {
  bool tangential_ok = false;   // |dtau Phi(p)| <= 1e-3 * sup |dtau Phi|
  bool normal_ok = false;       // sign(eps) * dnu Phi(p) >= -1e-6
  bool degenerate = false;      // dtau Phi vanishes identically
  bool consistent = false;      // tangential_ok && normal_ok (or degenerate)
  double dtau_phi = 0;
  double dnu_phi = 0;
  double dtau_scale = 0;
  std::string interpretation;
};

LocalizationVerdict localization_check(const BlowupFit& fit,
                                       const CurvatureModel& model,
                                       double eps);

// Discrete Hoelder quotient max |f(x)-f(y)| / |x-y|^alpha over adjacent
// collocation nodes; a proxy only, no norm equivalence claimed.
double grid_holder_quotient(const DiskField& f, double alpha);

}  // namespace curvdisk
