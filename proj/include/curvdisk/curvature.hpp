#pragma once
// Curvature data (K on the disk, h on the circle), the eps-perturbed
// coefficients, the boundary profile Phi = h + sqrt(h^2 + K) with its
// derivatives, the scale-invariant ratio D = h/sqrt(|K|), and the
// existence/obstruction hypothesis checks.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "curvdisk/expr.hpp"
#include "curvdisk/field.hpp"

namespace curvdisk {

struct CurvatureModel {
  DiskField K;
  BoundaryFunction h;
};

// Builds the model on a grid from closed-form expressions. When assert_H is
// set, K < 0 is verified at every collocation node.
CurvatureModel model_from_exprs(const GridSpec& g, const std::string& K_expr,
                                const std::string& h_expr,
                                bool assert_H = true);

struct PerturbedCoefficients {
  double eps = 0;
  double K_tilde = 0;       // -eps / (2 (1+eps))
  DiskField K_eps;          // (K - eps/2) / (1+eps)
  double h_tilde = 0;       // 1 / (1+eps)
  BoundaryFunction h_eps;   // h / (1+eps)
};

// Throws std::invalid_argument("invalid perturbation") when eps <= -1.
PerturbedCoefficients perturb(const CurvatureModel& model, double eps);

struct PhiProfile {
  int n_theta = 0;
  Eigen::VectorXd phi;       // values on the theta grid; NaN where masked
  Eigen::VectorXd dtau_phi;
  Eigen::VectorXd dnu_phi;   // [Phi dtn(h) + (1/2) dnu(K)] / sqrt(h^2+K)
  Eigen::VectorXd dee;       // h / sqrt(|K|)
  Eigen::VectorXd dtau_dee;
  std::vector<bool> mask;    // true = Phi undefined at that node
  bool fully_defined = true;
};

// Throws std::runtime_error("Phi undefined on dD") when every node is masked.
PhiProfile phi_profile(const CurvatureModel& model);

// Spectral evaluation of Phi = H + sqrt(H^2 + K) on an interior circle, used
// to cross-check dnu_phi by radial differencing.
Eigen::VectorXd phi_on_circle(const CurvatureModel& model, double r);

struct PhiCriticalPoint {
  double theta = 0;
  double dnu_phi = 0;
  double dtau_phi = 0;  // residual at the bisected root
};

struct DeeCrossing {
  double theta = 0;
  double dtau_dee = 0;
};

struct HypothesisReport {
  bool a = false;            // min_dD h > max_dD sqrt(|K|)
  bool b_minus = false;
  bool b_plus = false;
  bool thm21_i = false;      // exists x0 with D(x0) > 1
  bool thm21_ii = false;     // dtau D != 0 wherever D = 1
  bool thm21_iii = false;    // = b_minus
  bool thm22_i = false;      // = a
  bool thm22_ii = false;     // = b_plus
  bool nonexistence = false; // min_dD h < max_disk sqrt(|K|)
  bool degenerate_constant = false;  // dtau Phi == 0 identically
  bool partial = false;              // Phi masked somewhere
  std::vector<PhiCriticalPoint> phi_critical_points;
  std::vector<DeeCrossing> dee_crossings;
  double min_h = 0, max_sqrt_absK_boundary = 0, max_sqrt_absK_disk = 0;
};

HypothesisReport check_hypotheses(const CurvatureModel& model);

}  // namespace curvdisk
