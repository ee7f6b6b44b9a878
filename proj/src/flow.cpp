#include <cmath>
#include <limits>
#include <stdexcept>

#include "curvdisk/solver.hpp"
#include "solver_internal.hpp"

namespace curvdisk {

namespace {
using Eigen::MatrixXd;
using Eigen::VectorXd;
}  // namespace

FlowReport gradient_flow(const CurvatureModel& model, double eps,
                         const SolveConfig& cfg, double dt, double t_max) {
  if (!(dt > 0) || !(t_max > 0))
    throw std::invalid_argument("flow: dt and t_max must be positive");
  PerturbedCoefficients coeffs = perturb(model, eps);
  const DiskGrid& g = disk_grid(cfg.grid);
  const int nr = cfg.grid.n_r, nt = cfg.grid.n_theta;

  DiskField u = constant_field(cfg.grid, 0.0);
  if (std::holds_alternative<double>(cfg.init))
    u = constant_field(cfg.grid, std::get<double>(cfg.init));
  else if (std::holds_alternative<BubbleParams>(cfg.init))
    u = bubble_field(std::get<BubbleParams>(cfg.init), cfg.grid);
  else if (std::holds_alternative<DiskField>(cfg.init))
    u = std::get<DiskField>(cfg.init);

  // Fixed H^1-type metric: (-Lap + 1) with Robin boundary (dnu + 1); the
  // preconditioned residual is then a guaranteed descent direction.
  solver_detail::ModePreconditioner metric;
  metric.build(g, VectorXd::Constant(nr, -1.0), -1.0);

  FlowReport rep;
  double e_cur = energy(u, coeffs).total;
  rep.energy_trace.push_back(e_cur);

  double t = 0;
  double step = dt;
  const double step_floor = dt * std::pow(2.0, -40);
  while (t < t_max) {
    Residual r = el_residual(u, coeffs);
    double res_sup = std::max(r.interior.values.array().abs().maxCoeff(),
                              r.boundary_vals.array().abs().maxCoeff());
    if (res_sup < 1e-3) {
      rep.reached_newton_basin = true;
      break;
    }

    MatrixXd stacked(nr, nt);
    stacked.topRows(nr - 1) = r.interior.values.topRows(nr - 1);
    stacked.row(nr - 1) = r.boundary_vals.transpose();
    MatrixXd d = metric.apply(stacked);

    bool accepted = false;
    while (step >= step_floor) {
      DiskField u_try{cfg.grid, u.values - step * d};
      double e_try = std::numeric_limits<double>::infinity();
      try {
        e_try = energy(u_try, coeffs).total;
      } catch (const std::runtime_error&) {
      }
      if (e_try <= e_cur + 1e-12) {
        u = std::move(u_try);
        e_cur = e_try;
        t += step;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) throw std::runtime_error("step-size error");
    ++rep.steps;
    rep.energy_trace.push_back(e_cur);
    if (rep.steps >= 200000) break;
  }

  if (rep.reached_newton_basin) {
    SolveConfig ncfg = cfg;
    ncfg.init = u;
    rep.final_report = newton_solve(model, eps, ncfg);
  } else {
    rep.final_report.u = u;
    rep.final_report.eps = eps;
    rep.final_report.converged = false;
    rep.final_report.reason = "flow: t_max reached outside Newton basin";
    rep.final_report.sup_u = u.values.maxCoeff();
  }
  return rep;
}

}  // namespace curvdisk
