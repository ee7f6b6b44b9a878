#include <cmath>
#include <numbers>
#include <stdexcept>

#include "curvdisk/diagnostics.hpp"
#include "curvdisk/solver.hpp"
#include "solver_internal.hpp"

namespace curvdisk {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using solver_detail::ModePreconditioner;
using solver_detail::gmres;

int constraint_count(Gauge g) {
  switch (g) {
    case Gauge::none: return 0;
    case Gauge::barycenter: return 2;
    case Gauge::mass_barycenter: return 3;
  }
  return 0;
}

// Constraint weight on the boundary circle: chi components are built from
// int_dD w_l(theta) e^{u/2} with w = 1 (mass), cos, sin.
VectorXd constraint_weight(const DiskGrid& g, Gauge gauge, int l) {
  if (gauge == Gauge::mass_barycenter && l == 0)
    return VectorXd::Ones(g.nt());
  int comp = (gauge == Gauge::mass_barycenter) ? l - 1 : l;
  return comp == 0 ? VectorXd(g.cos_theta()) : VectorXd(g.sin_theta());
}

struct NewtonSystem {
  const DiskGrid* g = nullptr;
  GridSpec spec;
  const PerturbedCoefficients* coeffs = nullptr;
  Gauge gauge = Gauge::none;
  int m = 0;  // number of constraints
  int N = 0;

  // State-dependent data refreshed each iteration.
  MatrixXd eu;                 // e^u
  VectorXd e2;                 // e^{u/2} on the boundary
  VectorXd h_eps_vals;
  std::vector<VectorXd> wfun;  // constraint weights on the circle
  ModePreconditioner prec;
  std::vector<VectorXd> prec_G;  // M~^{-1} G_l stacked as N-vectors
  Eigen::FullPivLU<MatrixXd> schur;

  int idx(int i, int j) const { return i * spec.n_theta + j; }

  void refresh(const MatrixXd& u, const VectorXd& lam) {
    (void)lam;
    eu = u.array().exp();
    e2 = (u.row(spec.n_r - 1) / 2.0).array().exp();
    VectorXd c1 = 2.0 *
                  (coeffs->K_eps.values.array() * eu.array()).rowwise().mean();
    double c2 = (h_eps_vals.array() * e2.array()).mean();
    prec.build(*g, c1, c2);

    // Schur complement of the constraint block through the preconditioner.
    prec_G.assign(m, VectorXd());
    if (m > 0) {
      MatrixXd S(m, m);
      for (int l = 0; l < m; ++l) {
        MatrixXd Gl = MatrixXd::Zero(spec.n_r, spec.n_theta);
        Gl.row(spec.n_r - 1) =
            (0.5 * wfun[l].array() * e2.array()).transpose();
        prec_G[l] = to_vector(prec.apply(Gl));
      }
      for (int l = 0; l < m; ++l)
        for (int q = 0; q < m; ++q) S(l, q) = constraint_dot(prec_G[q], l);
      schur.compute(S);
    }
  }

  double constraint_dot(const VectorXd& v, int l) const {
    // d c_l / du applied to v: int_dD (1/2) w_l e^{u/2} v.
    double s = 0;
    for (int j = 0; j < spec.n_theta; ++j)
      s += 0.5 * wfun[l](j) * e2(j) * v(idx(spec.n_r - 1, j));
    return s * g->wtheta();
  }

  MatrixXd to_matrix(const VectorXd& v) const {
    MatrixXd out(spec.n_r, spec.n_theta);
    for (int i = 0; i < spec.n_r; ++i)
      for (int j = 0; j < spec.n_theta; ++j) out(i, j) = v(idx(i, j));
    return out;
  }

  VectorXd to_vector(const MatrixXd& mat) const {
    VectorXd out(N);
    for (int i = 0; i < spec.n_r; ++i)
      for (int j = 0; j < spec.n_theta; ++j) out(idx(i, j)) = mat(i, j);
    return out;
  }

  // Full nonlinear residual, stacked (interior rows, boundary row with
  // multiplier forces, constraints).
  VectorXd residual(const MatrixXd& u, const VectorXd& lam) const {
    const int nr = spec.n_r, nt = spec.n_theta;
    MatrixXd eu_loc = u.array().exp();
    if (!eu_loc.allFinite())
      throw std::runtime_error("field out of exponential range");
    MatrixXd lap = detail::laplacian_raw(*g, u);
    detail::center_clean(*g, lap);
    MatrixXd Rint = (-lap.array() + 2.0 * coeffs->K_tilde -
                     2.0 * coeffs->K_eps.values.array() * eu_loc.array())
                        .matrix();
    VectorXd e2_loc = (u.row(nr - 1) / 2.0).array().exp();
    Eigen::RowVectorXd dnu = g->Dpp().row(nr - 1) * u +
                             g->Dpm().row(nr - 1) * g->shift_half(u);
    VectorXd out(N + m);
    for (int i = 0; i < nr - 1; ++i)
      for (int j = 0; j < nt; ++j) out(idx(i, j)) = Rint(i, j);
    for (int j = 0; j < nt; ++j) {
      double bc = dnu(j) + 2.0 * coeffs->h_tilde -
                  2.0 * h_eps_vals(j) * e2_loc(j);
      for (int l = 0; l < m; ++l)
        bc += lam(l) * 0.5 * wfun[l](j) * e2_loc(j);
      out(idx(nr - 1, j)) = bc;
    }
    for (int l = 0; l < m; ++l) {
      double c = 0;
      for (int j = 0; j < nt; ++j) c += wfun[l](j) * e2_loc(j);
      c *= g->wtheta();
      if (gauge == Gauge::mass_barycenter && l == 0) c -= 1.0;
      out(N + l) = c;
    }
    return out;
  }

  // Jacobian action at the refreshed state.
  VectorXd jacobian_apply(const VectorXd& x, const VectorXd& lam) const {
    const int nr = spec.n_r, nt = spec.n_theta;
    MatrixXd v = to_matrix(x.head(N));
    MatrixXd lap = detail::laplacian_raw(*g, v);
    detail::center_clean(*g, lap);
    MatrixXd Jint = (-lap.array() -
                     2.0 * coeffs->K_eps.values.array() * eu.array() *
                         v.array())
                        .matrix();
    Eigen::RowVectorXd dnu = g->Dpp().row(nr - 1) * v +
                             g->Dpm().row(nr - 1) * g->shift_half(v);
    VectorXd out(N + m);
    for (int i = 0; i < nr - 1; ++i)
      for (int j = 0; j < nt; ++j) out(idx(i, j)) = Jint(i, j);
    for (int j = 0; j < nt; ++j) {
      double tv = v(nr - 1, j);
      double bc = dnu(j) - h_eps_vals(j) * e2(j) * tv;
      for (int l = 0; l < m; ++l) {
        bc += lam(l) * 0.25 * wfun[l](j) * e2(j) * tv;
        bc += x(N + l) * 0.5 * wfun[l](j) * e2(j);
      }
      out(idx(nr - 1, j)) = bc;
    }
    for (int l = 0; l < m; ++l) {
      double c = 0;
      for (int j = 0; j < nt; ++j)
        c += 0.5 * wfun[l](j) * e2(j) * v(nr - 1, j);
      out(N + l) = c * g->wtheta();
    }
    return out;
  }

  // Constraint preconditioner: block elimination with the mode blocks and
  // the small Schur complement.
  VectorXd precondition(const VectorXd& b) const {
    VectorXd y0 = to_vector(prec.apply(to_matrix(b.head(N))));
    if (m == 0) {
      VectorXd out(N);
      out = y0;
      return out;
    }
    VectorXd rhs_mu(m);
    for (int l = 0; l < m; ++l)
      rhs_mu(l) = constraint_dot(y0, l) - b(N + l);
    VectorXd mu = schur.solve(rhs_mu);
    VectorXd v = y0;
    for (int l = 0; l < m; ++l) v -= mu(l) * prec_G[l];
    VectorXd out(N + m);
    out.head(N) = v;
    out.tail(m) = mu;
    return out;
  }
};

double sup_norm(const VectorXd& v) { return v.array().abs().maxCoeff(); }

DiskField initial_field(const SolveInit& init, const GridSpec& spec) {
  if (std::holds_alternative<ZeroInit>(init)) return constant_field(spec, 0.0);
  if (std::holds_alternative<double>(init))
    return constant_field(spec, std::get<double>(init));
  if (std::holds_alternative<BubbleParams>(init))
    return bubble_field(std::get<BubbleParams>(init), spec);
  const DiskField& f = std::get<DiskField>(init);
  if (!(f.grid == spec))
    throw std::invalid_argument("solver: init field grid mismatch");
  return f;
}

}  // namespace

SolveReport newton_solve(const CurvatureModel& model, double eps,
                         const SolveConfig& cfg) {
  validate_spec(cfg.grid);
  if (!(model.K.grid == cfg.grid))
    throw std::invalid_argument("solver: model grid mismatch");
  PerturbedCoefficients coeffs = perturb(model, eps);

  NewtonSystem sys;
  sys.g = &disk_grid(cfg.grid);
  sys.spec = cfg.grid;
  sys.coeffs = &coeffs;
  sys.gauge = cfg.gauge;
  sys.m = constraint_count(cfg.gauge);
  sys.N = cfg.grid.n_r * cfg.grid.n_theta;
  sys.h_eps_vals = boundary_values(coeffs.h_eps);
  for (int l = 0; l < sys.m; ++l)
    sys.wfun.push_back(constraint_weight(*sys.g, cfg.gauge, l));

  SolveReport rep;
  rep.eps = eps;
  DiskField u = initial_field(cfg.init, cfg.grid);
  VectorXd lam = VectorXd::Zero(sys.m);

  VectorXd F;
  try {
    F = sys.residual(u.values, lam);
  } catch (const std::runtime_error&) {
    rep.u = u;
    rep.reason = "diverged";
    return rep;
  }
  double merit = F.norm();
  rep.residual_history.push_back(sup_norm(F.head(sys.N)));

  int grow_count = 0;
  bool singular = false;
  for (int it = 0; it < cfg.max_newton; ++it) {
    // Convergence: EL residual in sup norm plus constraints.
    double el_sup = sup_norm(F.head(sys.N));
    double cons_sup = sys.m > 0 ? sup_norm(F.tail(sys.m)) : 0.0;
    if (el_sup < cfg.newton_tol && cons_sup < 1e-10) {
      rep.converged = true;
      rep.newton_iters = it;
      break;
    }

    sys.refresh(u.values, lam);
    auto op = [&](const VectorXd& x) {
      return sys.precondition(sys.jacobian_apply(x, lam));
    };
    VectorXd rhs = sys.precondition(-F);
    VectorXd delta;
    double lin_res = gmres(op, rhs, delta, 1e-12, 120, 600);
    if (!delta.allFinite() || lin_res > 1e-4) {
      singular = true;
      rep.newton_iters = it;
      break;
    }

    // Backtracking on the stacked residual norm.
    double step = 1.0;
    bool accepted = false;
    VectorXd F_new;
    const int max_back = cfg.damping == Damping::armijo ? 25 : 0;
    for (int back = 0; back <= max_back; ++back) {
      MatrixXd u_try = u.values + step * sys.to_matrix(delta.head(sys.N));
      VectorXd lam_try = lam + step * delta.tail(sys.m);
      double m_try = std::numeric_limits<double>::infinity();
      VectorXd F_try;
      try {
        F_try = sys.residual(u_try, lam_try);
        m_try = F_try.norm();
      } catch (const std::runtime_error&) {
      }
      if (m_try <= (1.0 - 1e-4 * step) * merit ||
          (cfg.damping == Damping::none && std::isfinite(m_try))) {
        u.values = u_try;
        lam = lam_try;
        F = F_try;
        bool grew = m_try > merit;
        merit = m_try;
        accepted = true;
        grow_count = grew ? grow_count + 1 : 0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) ++grow_count;
    rep.residual_history.push_back(sup_norm(F.head(sys.N)));

    // Blow-up watch: route concentrating iterates to the fitter instead of
    // failing opaquely.
    double supu = u.values.maxCoeff();
    double bmass = quad_circle_values(
        (u.values.row(cfg.grid.n_r - 1) / 2.0).array().exp());
    if (supu > cfg.watch_sup_u || bmass > cfg.watch_boundary_mass) {
      rep.blowup_watch = true;
      rep.reason = "diverged";
      rep.newton_iters = it + 1;
      break;
    }
    if (grow_count >= 5) {
      rep.reason = "diverged";
      rep.newton_iters = it + 1;
      break;
    }
    if (it == cfg.max_newton - 1) {
      rep.reason = "max iterations";
      rep.newton_iters = cfg.max_newton;
    }
  }

  // The loop checks convergence on entry; a step accepted on the final pass
  // still needs its own check.
  if (!rep.converged) {
    double el_sup = sup_norm(F.head(sys.N));
    double cons_sup = sys.m > 0 ? sup_norm(F.tail(sys.m)) : 0.0;
    if (el_sup < cfg.newton_tol && cons_sup < 1e-10) {
      rep.converged = true;
      rep.reason.clear();
    }
  }

  if (singular && !rep.converged) rep.reason = "singular linearization";
  if (!rep.converged && rep.reason.empty()) rep.reason = "max iterations";

  rep.u = u;
  rep.multipliers = lam;
  rep.final_residual = rep.residual_history.back();
  rep.sup_u = u.values.maxCoeff();
  try {
    rep.interior_mass = quad_disk(exp_field(u));
    rep.boundary_mass =
        quad_circle_values(exp_checked(boundary_trace_values(u) / 2.0));
  } catch (const std::runtime_error&) {
    rep.interior_mass = rep.boundary_mass =
        std::numeric_limits<double>::quiet_NaN();
  }
  rep.resolution_warning = resolution_defect(u) > 1e-6;

  if (rep.converged) {
    IdentityResiduals ids = identity_residuals(u, coeffs);
    rep.identity_residuals["gauss_bonnet"] = ids.gauss_bonnet;
    rep.identity_residuals["kazdan_warner"] = ids.kazdan_warner;
    rep.identity_residuals["pohozaev_rotation"] = ids.pohozaev.at("rotation");
    if (cfg.compute_morse) {
      MorseSpectrum ms = morse_index(u, coeffs, cfg.morse_n_eigs);
      rep.morse_index = ms.negative;
      rep.near_zero_modes = ms.near_zero;
    }
  }
  return rep;
}

std::vector<double> default_eps_schedule(int sign_of_eps) {
  std::vector<double> s;
  double sign = sign_of_eps < 0 ? -1.0 : 1.0;
  for (int j = 0; j <= 7; ++j) s.push_back(sign * 0.1 * std::pow(2.0, -j));
  s.push_back(0.0);
  return s;
}

ContinuationTrace continue_in_eps(const CurvatureModel& model, double eps_from,
                                  const SolveConfig& cfg,
                                  const std::vector<double>& schedule) {
  if (schedule.empty())
    throw std::invalid_argument("continuation: empty schedule");
  for (size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] <= -1.0)
      throw std::invalid_argument("invalid perturbation");
    if (i > 0 && std::abs(schedule[i]) >= std::abs(schedule[i - 1]))
      throw std::invalid_argument("continuation: schedule must be monotone toward 0");
  }

  ContinuationTrace trace;
  SolveConfig step_cfg = cfg;
  bool first = true;
  double prev_eps = eps_from;
  (void)prev_eps;
  for (double eps : schedule) {
    SolveReport rep = newton_solve(model, eps, step_cfg);
    trace.eps_schedule.push_back(eps);
    trace.sup_u_trace.push_back(rep.sup_u);
    trace.mass_trace.emplace_back(rep.interior_mass, rep.boundary_mass);
    bool ok = rep.converged;
    trace.reports.push_back(std::move(rep));
    if (!ok) {
      if (first)
        throw std::runtime_error(
            "continuation: first solve failed (reason: " +
            trace.reports.back().reason + ")");
      return trace;  // partial trace, completed stays false
    }
    step_cfg.init = trace.reports.back().u;  // warm start
    first = false;
  }
  trace.completed = true;
  return trace;
}

}  // namespace curvdisk
