#include "curvdisk/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "curvdisk/operators.hpp"

namespace curvdisk {

namespace {
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;
constexpr double kPi = std::numbers::pi;
}  // namespace

double gauss_bonnet_residual(const DiskField& u,
                             const PerturbedCoefficients& c) {
  DiskField eu = exp_field(u);
  DiskField keu{u.grid, (c.K_eps.values.array() * eu.values.array()).matrix()};
  VectorXd e2 = exp_checked(boundary_trace_values(u) / 2.0);
  VectorXd he = boundary_values(c.h_eps).array() * e2.array();
  double lhs = quad_disk(keu) + quad_circle_values(he);
  double target = 2.0 * kPi * c.h_tilde + kPi * c.K_tilde;
  return std::abs(lhs - target);
}

namespace {

// The two sides of the conformal-field identity with
// F = (1 - x1^2 + x2^2, -2 x1 x2); full form, the tilde coefficients are
// constants so their tangential/gradient terms vanish identically.
void kazdan_warner_sides(const DiskField& u, const PerturbedCoefficients& c,
                         bool reduced, double& boundary_side,
                         double& interior_side) {
  const DiskGrid& g = disk_grid(u.grid);
  const int nt = u.grid.n_theta;

  VectorXd tr = boundary_trace_values(u);
  VectorXd e2 = exp_checked(tr / 2.0);
  VectorXd dtau_h = boundary_values(tangential_deriv(c.h_eps));
  VectorXd bnd =
      4.0 * g.sin_theta().array() * dtau_h.array() * e2.array() -
      2.0 * g.cos_theta().array() * (c.h_tilde - 1.0) * tr.array();
  if (!reduced)
    bnd += (4.0 * c.h_tilde * g.cos_theta().array()).matrix();
  boundary_side = quad_circle_values(bnd);

  DiskField eu = exp_field(u);
  auto [gKx, gKy] = gradient(c.K_eps);
  MatrixXd F1 =
      (1.0 - g.x1().array().square() + g.x2().array().square()).matrix();
  MatrixXd F2 = (-2.0 * g.x1().array() * g.x2().array()).matrix();
  DiskField interior{
      u.grid,
      (4.0 * c.K_tilde * g.x1().array() * u.values.array() +
       eu.values.array() *
           (gKx.values.array() * F1.array() + gKy.values.array() * F2.array()))
          .matrix()};
  if (!reduced)
    interior.values -= (4.0 * c.K_tilde * g.x1().array()).matrix();
  interior_side = quad_disk(interior);
  (void)nt;
}

}  // namespace

double kazdan_warner_residual(const DiskField& u,
                              const PerturbedCoefficients& c) {
  double b, i;
  kazdan_warner_sides(u, c, false, b, i);
  return std::abs(b - i);
}

double kazdan_warner_residual_reduced(const DiskField& u,
                                      const PerturbedCoefficients& c) {
  double b, i;
  kazdan_warner_sides(u, c, true, b, i);
  return std::abs(b - i);
}

double pohozaev_residual(const DiskField& u, const PerturbedCoefficients& c,
                         const std::string& F1s, const std::string& F2s) {
  const DiskGrid& g = disk_grid(u.grid);
  Expr F1 = Expr::parse(F1s), F2 = Expr::parse(F2s);
  Expr F1x1 = F1.diff("x1"), F1x2 = F1.diff("x2");
  Expr F2x1 = F2.diff("x1"), F2x2 = F2.diff("x2");

  auto eval = [&](const Expr& e) {
    return field_from_xy(u.grid, [&](double a, double b) {
      return e.eval(a, b);
    });
  };
  DiskField f1 = eval(F1), f2 = eval(F2);
  DiskField f1x1 = eval(F1x1), f1x2 = eval(F1x2);
  DiskField f2x1 = eval(F2x1), f2x2 = eval(F2x2);

  auto [ux, uy] = gradient(u);
  DiskField eu = exp_field(u);
  VectorXd tr = boundary_trace_values(u);
  VectorXd e2 = exp_checked(tr / 2.0);
  VectorXd h_eps_vals = boundary_values(c.h_eps);

  // Boundary side.
  VectorXd F1b = boundary_trace_values(f1), F2b = boundary_trace_values(f2);
  VectorXd Fnu =
      F1b.array() * g.cos_theta().array() + F2b.array() * g.sin_theta().array();
  VectorXd uxb = boundary_trace_values(ux), uyb = boundary_trace_values(uy);
  VectorXd graduF = uxb.array() * F1b.array() + uyb.array() * F2b.array();
  VectorXd grad_sq_b = uxb.array().square() + uyb.array().square();
  VectorXd Kb = boundary_trace_values(c.K_eps);
  VectorXd eub = exp_checked(tr);
  VectorXd bnd = 2.0 * Kb.array() * eub.array() * Fnu.array() +
                 (2.0 * h_eps_vals.array() * e2.array() - 2.0 * c.h_tilde) *
                     graduF.array() -
                 0.5 * grad_sq_b.array() * Fnu.array();
  double boundary_side = quad_circle_values(bnd);

  // Interior side.
  auto [gKx, gKy] = gradient(c.K_eps);
  DiskField divF{u.grid, (f1x1.values + f2x2.values)};
  DiskField graduF_d{u.grid, (ux.values.array() * f1.values.array() +
                              uy.values.array() * f2.values.array())
                                 .matrix()};
  DiskField gradK_F{u.grid, (gKx.values.array() * f1.values.array() +
                             gKy.values.array() * f2.values.array())
                                .matrix()};
  // DF(v, v) = sum_ij (dF_j/dx_i) v_i v_j.
  DiskField DFvv{u.grid,
                 (f1x1.values.array() * ux.values.array().square() +
                  f2x1.values.array() * ux.values.array() * uy.values.array() +
                  f1x2.values.array() * uy.values.array() * ux.values.array() +
                  f2x2.values.array() * uy.values.array().square())
                     .matrix()};
  DiskField grad_sq{u.grid,
                    (ux.values.array().square() + uy.values.array().square())
                        .matrix()};
  DiskField interior{
      u.grid,
      (2.0 * c.K_tilde * graduF_d.values.array() +
       2.0 * eu.values.array() *
           (gradK_F.values.array() +
            c.K_eps.values.array() * divF.values.array()) +
       DFvv.values.array() - 0.5 * divF.values.array() * grad_sq.values.array())
          .matrix()};
  double interior_side = quad_disk(interior);
  return std::abs(boundary_side - interior_side);
}

IdentityResiduals identity_residuals(const DiskField& u,
                                     const PerturbedCoefficients& c) {
  IdentityResiduals out;
  out.gauss_bonnet = gauss_bonnet_residual(u, c);
  out.kazdan_warner = kazdan_warner_residual(u, c);
  out.pohozaev["rotation"] = pohozaev_residual(u, c, "-x2", "x1");
  out.pohozaev["conformal"] =
      pohozaev_residual(u, c, "1 - x1^2 + x2^2", "-2*x1*x2");
  return out;
}

namespace {

struct FrozenProfile {
  double phi_hat = 0, k_hat = 0, h_hat = 0;
  bool valid = false;
};

FrozenProfile freeze_at(const PerturbedCoefficients& c, const Vector2d& p) {
  FrozenProfile f;
  double theta = std::atan2(p(1), p(0));
  BoundaryFunction Ktrace = boundary_trace(c.K_eps);
  f.k_hat = boundary_eval(Ktrace, theta);
  f.h_hat = boundary_eval(c.h_eps, theta);
  double disc = f.h_hat * f.h_hat + f.k_hat;
  if (disc > 0) {
    f.phi_hat = f.h_hat + std::sqrt(disc);
    f.valid = f.phi_hat > 1.0 && f.k_hat < 0.0;
  }
  return f;
}

double profile_sup_error(const DiskField& u, const Vector2d& a,
                         const FrozenProfile& fp) {
  if (!fp.valid || a.norm() >= 1.0)
    return std::numeric_limits<double>::infinity();
  const DiskGrid& g = disk_grid(u.grid);
  const std::complex<double> ac(a(0), a(1));
  double num = 2.0 * fp.phi_hat * (1.0 - a.squaredNorm());
  double worst = 0;
  for (int i = 0; i < u.grid.n_r; ++i)
    for (int j = 0; j < u.grid.n_theta; ++j) {
      std::complex<double> x(g.x1()(i, j), g.x2()(i, j));
      double den = fp.phi_hat * fp.phi_hat * std::norm(1.0 - std::conj(ac) * x) +
                   fp.k_hat * std::norm(x - ac);
      if (!(den > 0)) return std::numeric_limits<double>::infinity();
      double ua = 2.0 * std::log(num / den);
      worst = std::max(worst, std::abs(u.values(i, j) - ua));
    }
  return worst;
}

// Golden-section minimization of a 1-D slice.
double line_min(const std::function<double(double)>& f, double lo, double hi,
                double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BlowupFit blowup_fit(const DiskField& u, const CurvatureModel& model,
                     double eps) {
  PerturbedCoefficients coeffs = perturb(model, eps);
  BlowupFit fit;

  VectorXd tr = boundary_trace_values(u);
  VectorXd e2 = exp_checked(tr / 2.0);
  ConstraintState cs = constraint_state_values(tr, u.grid.n_theta);
  Vector2d a = cs.A > 0 ? Vector2d(cs.B / cs.A) : Vector2d(0, 0);
  if (a.norm() >= 1.0 - 1e-6) a *= (1.0 - 1e-6) / a.norm();

  auto objective = [&](const Vector2d& cand) {
    Vector2d p = cand.norm() > 1e-12 ? Vector2d(cand.normalized())
                                     : Vector2d(1, 0);
    return profile_sup_error(u, cand, freeze_at(coeffs, p));
  };

  // Coordinate descent with shrinking golden-section line searches.
  double span = 0.5;
  for (int round = 0; round < 80; ++round) {
    Vector2d before = a;
    for (int axis = 0; axis < 2; ++axis) {
      auto slice = [&](double t) {
        Vector2d cand = a;
        cand(axis) = t;
        if (cand.norm() >= 1.0 - 1e-9)
          return std::numeric_limits<double>::infinity();
        return objective(cand);
      };
      double lo = a(axis) - span, hi = a(axis) + span;
      lo = std::max(lo, -(1.0 - 1e-9));
      hi = std::min(hi, 1.0 - 1e-9);
      a(axis) = line_min(slice, lo, hi, 1e-9);
    }
    double moved = (a - before).norm();
    span = std::max(4.0 * moved, span / 4.0);
    if (moved < 1e-8) break;
  }

  fit.a_fit = a;
  fit.beyond_resolution = a.norm() >= 1.0 - 1e-6;
  fit.p = a.norm() > 1e-12 ? Vector2d(a.normalized()) : Vector2d(1, 0);
  FrozenProfile fp = freeze_at(coeffs, fit.p);
  fit.phi_hat = fp.phi_hat;
  fit.k_hat = fp.k_hat;
  fit.h_hat = fp.h_hat;

  BubbleParams bp;
  bp.a = a;
  bp.phi = fp.phi_hat;
  bp.k = fp.k_hat;
  bp.hh = fp.h_hat;
  DiskField ua = bubble_field(bp, u.grid);
  fit.psi = DiskField{u.grid, u.values - ua.values};
  fit.psi_sup = fit.psi.values.array().abs().maxCoeff();
  fit.interior_mass = quad_disk(exp_field(u));
  fit.boundary_mass = quad_circle_values(e2);

  PhiProfile prof = phi_profile(model);
  double theta_p = std::atan2(fit.p(1), fit.p(0));
  if (prof.fully_defined) {
    fit.dtau_phi_at_p =
        boundary_eval(tangential_deriv(boundary_from_values(prof.phi)), theta_p);
    fit.dnu_phi_at_p =
        boundary_eval(boundary_from_values(prof.dnu_phi), theta_p);
  } else {
    fit.dtau_phi_at_p = fit.dnu_phi_at_p =
        std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

ConcentrationReport concentration_masses(const DiskField& u,
                                         const CurvatureModel& model,
                                         const BlowupFit& fit) {
  ConcentrationReport rep;
  DiskField eu = exp_field(u);
  DiskField keu{u.grid,
                (model.K.values.array() * eu.values.array()).matrix()};
  rep.total_interior = quad_disk(keu);
  VectorXd tr = boundary_trace_values(u);
  VectorXd e2 = exp_checked(tr / 2.0);
  VectorXd hv = boundary_values(model.h);
  rep.total_boundary = quad_circle_values((hv.array() * e2.array()).matrix());

  double theta_p = std::atan2(fit.p(1), fit.p(0));
  double hp = boundary_eval(model.h, theta_p);
  double Kp = boundary_eval(boundary_trace(model.K), theta_p);
  double s = hp * hp + Kp;
  if (s > 0) {
    rep.predicted_boundary = 2.0 * kPi * hp / std::sqrt(s);
    rep.predicted_interior = 2.0 * kPi * (1.0 - hp / std::sqrt(s));
  } else {
    rep.predicted_boundary = rep.predicted_interior =
        std::numeric_limits<double>::quiet_NaN();
  }

  const int nt = u.grid.n_theta;
  double arc = 10.0 * (1.0 - fit.a_fit.norm());
  double inside = 0, total = 0;
  for (int j = 0; j < nt; ++j) {
    double th = 2.0 * kPi * j / nt;
    double d = std::remainder(th - theta_p, 2.0 * kPi);
    total += e2(j);
    if (std::abs(d) < arc) inside += e2(j);
  }
  rep.peak_fraction = total > 0 ? inside / total : 0.0;
  return rep;
}

LocalizationVerdict localization_check(const BlowupFit& fit,
                                       const CurvatureModel& model,
                                       double eps) {
  LocalizationVerdict v;
  PhiProfile prof = phi_profile(model);
  v.dtau_phi = fit.dtau_phi_at_p;
  v.dnu_phi = fit.dnu_phi_at_p;
  double phi_scale = 1.0;
  for (int j = 0; j < prof.n_theta; ++j)
    if (!prof.mask[j]) phi_scale = std::max(phi_scale, std::abs(prof.phi(j)));
  v.dtau_scale = prof.fully_defined
                     ? prof.dtau_phi.array().abs().maxCoeff()
                     : std::numeric_limits<double>::quiet_NaN();

  if (prof.fully_defined && v.dtau_scale < 1e-10 * phi_scale) {
    v.degenerate = true;
    v.tangential_ok = true;
  } else if (std::isfinite(v.dtau_phi)) {
    v.tangential_ok = std::abs(v.dtau_phi) <= 1e-3 * v.dtau_scale;
  }
  double sign = eps > 0 ? 1.0 : (eps < 0 ? -1.0 : 0.0);
  v.normal_ok = sign * v.dnu_phi >= -1e-6;
  v.consistent = v.normal_ok && (v.tangential_ok || v.degenerate);

  if (v.degenerate) {
    v.interpretation = "degenerate: dtau Phi vanishes identically";
  } else if (!v.tangential_ok) {
    v.interpretation =
        "inconsistent: fitted point is not a critical point of Phi";
  } else if (!v.normal_ok) {
    v.interpretation =
        eps > 0 ? "inconsistent with eps > 0: dnu Phi(p) < 0; concentration "
                  "here would require dnu Phi(p) >= 0"
                : "inconsistent with eps < 0: dnu Phi(p) > 0; concentration "
                  "here would require dnu Phi(p) <= 0";
  } else {
    v.interpretation =
        eps > 0 ? "consistent: dnu Phi(p) >= 0; contradicts condition (b-) "
                  "at this point"
                : (eps < 0 ? "consistent: dnu Phi(p) <= 0; contradicts "
                             "condition (b+) at this point"
                           : "consistent (eps = 0 imposes no sign)");
  }
  return v;
}

double grid_holder_quotient(const DiskField& f, double alpha) {
  const DiskGrid& g = disk_grid(f.grid);
  const int nr = g.nr(), nt = g.nt();
  double worst = 0;
  for (int i = 0; i + 1 < nr; ++i) {
    double dist = std::pow(g.r()(i + 1) - g.r()(i), alpha);
    for (int j = 0; j < nt; ++j)
      worst = std::max(
          worst, std::abs(f.values(i + 1, j) - f.values(i, j)) / dist);
  }
  for (int i = 0; i < nr; ++i) {
    double chord = 2.0 * g.r()(i) * std::sin(kPi / nt);
    double dist = std::pow(chord, alpha);
    for (int j = 0; j < nt; ++j)
      worst = std::max(
          worst,
          std::abs(f.values(i, (j + 1) % nt) - f.values(i, j)) / dist);
  }
  return worst;
}

}  // namespace curvdisk
