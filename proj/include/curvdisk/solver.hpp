#pragma once
// Critical points of I_eps: gauged Newton iteration on the collocated
// Euler-Lagrange system, continuation in eps, a preconditioned descent flow
// fallback, and the Morse index via a generalized eigensolve.

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "curvdisk/bubbles.hpp"
#include "curvdisk/curvature.hpp"
#include "curvdisk/functionals.hpp"

namespace curvdisk {

enum class Gauge { none, barycenter, mass_barycenter };
enum class Damping { none, armijo };

struct ZeroInit {};
using SolveInit = std::variant<ZeroInit, double, BubbleParams, DiskField>;

struct SolveConfig {
  GridSpec grid;
  double newton_tol = 1e-10;  // sup-norm of the EL residual
  int max_newton = 50;
  Damping damping = Damping::armijo;
  Gauge gauge = Gauge::none;
  SolveInit init = ZeroInit{};
  bool compute_morse = false;
  int morse_n_eigs = 8;
  // Blow-up watch thresholds.
  double watch_sup_u = 40.0;
  double watch_boundary_mass = 1e6;
};

struct SolveReport {
  DiskField u;
  bool converged = false;
  int newton_iters = 0;
  double final_residual = 0;
  std::map<std::string, double> identity_residuals;
  int morse_index = -1;      // -1 = not computed
  int near_zero_modes = -1;
  double eps = 0;
  std::string reason;        // "", "diverged", "singular linearization",
                             // "blow-up watch", "max iterations"
  bool blowup_watch = false;
  double sup_u = 0;
  double interior_mass = 0;  // int e^u
  double boundary_mass = 0;  // int_dD e^{u/2}
  bool resolution_warning = false;
  std::vector<double> residual_history;
  Eigen::VectorXd multipliers;
};

SolveReport newton_solve(const CurvatureModel& model, double eps,
                         const SolveConfig& cfg);

struct ContinuationTrace {
  std::vector<double> eps_schedule;
  std::vector<SolveReport> reports;
  std::vector<double> sup_u_trace;
  std::vector<std::pair<double, double>> mass_trace;  // (area, length)
  bool completed = false;
};

// Default schedule: {sign * 0.1 * 2^-j, j = 0..7, then 0}; must be monotone
// toward 0 and stay above -1.
std::vector<double> default_eps_schedule(int sign_of_eps);

ContinuationTrace continue_in_eps(const CurvatureModel& model, double eps_from,
                                  const SolveConfig& cfg,
                                  const std::vector<double>& schedule);

struct FlowReport {
  SolveReport final_report;
  std::vector<double> energy_trace;
  int steps = 0;
  bool reached_newton_basin = false;
};

// Preconditioned descent on I_eps (H^1-type metric); energy is checked to be
// nonincreasing each step and the step size shrinks on failure; throws
// std::runtime_error("step-size error") at the shrink floor. Hands off to
// Newton once the residual drops below 1e-3.
FlowReport gradient_flow(const CurvatureModel& model, double eps,
                         const SolveConfig& cfg, double dt, double t_max);

struct MorseSpectrum {
  int negative = 0;       // eigenvalues < -1e-6
  int near_zero = 0;      // |eigenvalue| < 1e-6
  std::vector<double> eigenvalues;  // lowest n_eigs, ascending
  std::vector<double> residuals;    // pencil residual per reported eigenpair
};

// Lowest eigenvalues of Q(v,v) relative to the H^1 inner product
// M(v,w) = int grad v . grad w + int v w.
MorseSpectrum morse_index(const DiskField& u, const PerturbedCoefficients& c,
                          int n_eigs);

}  // namespace curvdisk
