#include "curvdisk/curvature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "curvdisk/operators.hpp"

namespace curvdisk {

namespace {
using Eigen::VectorXd;
constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

CurvatureModel model_from_exprs(const GridSpec& g, const std::string& K_expr,
                                const std::string& h_expr, bool assert_H) {
  Expr Ke = Expr::parse(K_expr);
  Expr he = Expr::parse(h_expr);
  DiskField K = field_from_xy(g, [&](double x1, double x2) {
    return Ke.eval(x1, x2);
  });
  BoundaryFunction h = boundary_from_callable(g.n_theta, [&](double th) {
    return he.eval(std::cos(th), std::sin(th));
  });
  if (!K.values.allFinite()) throw std::invalid_argument("non-finite field");
  if (assert_H && !(K.values.array() < 0).all())
    throw std::invalid_argument("hypothesis (H) violated: K must be < 0");
  return {std::move(K), std::move(h)};
}

PerturbedCoefficients perturb(const CurvatureModel& model, double eps) {
  if (eps <= -1.0) throw std::invalid_argument("invalid perturbation");
  PerturbedCoefficients c;
  c.eps = eps;
  c.K_tilde = -eps / (2.0 * (1.0 + eps));
  c.h_tilde = 1.0 / (1.0 + eps);
  c.K_eps = {model.K.grid,
             ((model.K.values.array() - eps / 2.0) / (1.0 + eps)).matrix()};
  c.h_eps = model.h;
  c.h_eps.coeffs /= (1.0 + eps);
  return c;
}

Eigen::VectorXd phi_on_circle(const CurvatureModel& model, double r) {
  const int nt = model.h.n_theta, K = nt / 2;
  const DiskGrid& g = disk_grid(model.K.grid);
  VectorXd H = VectorXd::Constant(nt, model.h.coeffs(0).real());
  for (int k = 1; k <= K; ++k) {
    double fac = (k == K) ? 1.0 : 2.0;
    double rk = std::pow(r, k);
    H += fac * rk *
         (model.h.coeffs(k).real() * g.cos_table().col(k) -
          model.h.coeffs(k).imag() * g.sin_table().col(k));
  }
  VectorXd Kv = (r == 1.0) ? boundary_trace_values(model.K)
                           : eval_field_circle(model.K, r);
  VectorXd out(nt);
  for (int j = 0; j < nt; ++j) {
    double s = H(j) * H(j) + Kv(j);
    out(j) = s > 0 ? H(j) + std::sqrt(s) : kNaN;
  }
  return out;
}

PhiProfile phi_profile(const CurvatureModel& model) {
  const int nt = model.h.n_theta;
  PhiProfile p;
  p.n_theta = nt;

  VectorXd hv = boundary_values(model.h);
  VectorXd Kb = boundary_trace_values(model.K);
  VectorXd dtnh = boundary_values(dtn(model.h));
  VectorXd dnuK = normal_deriv_values(model.K);

  p.phi.resize(nt);
  p.dnu_phi.resize(nt);
  p.dee.resize(nt);
  p.mask.assign(nt, false);
  int masked = 0;
  for (int j = 0; j < nt; ++j) {
    double s = hv(j) * hv(j) + Kb(j);
    // Phi is defined only where h^2 + K > 0; treat sqrt below 1e-12 as
    // undefined as well.
    if (!(s > 1e-24)) {
      p.mask[j] = true;
      ++masked;
      p.phi(j) = p.dnu_phi(j) = kNaN;
    } else {
      double root = std::sqrt(s);
      p.phi(j) = hv(j) + root;
      p.dnu_phi(j) = (p.phi(j) * dtnh(j) + 0.5 * dnuK(j)) / root;
    }
    p.dee(j) = hv(j) / std::sqrt(std::abs(Kb(j)));
  }
  p.fully_defined = (masked == 0);
  if (masked == nt) throw std::runtime_error("Phi undefined on dD");

  if (p.fully_defined) {
    p.dtau_phi = boundary_values(tangential_deriv(boundary_from_values(p.phi)));
  } else {
    // Partial profile: centered differences where both neighbors exist.
    p.dtau_phi = VectorXd::Constant(nt, kNaN);
    double dth = 2.0 * kPi / nt;
    for (int j = 0; j < nt; ++j) {
      int jm = (j + nt - 1) % nt, jp = (j + 1) % nt;
      if (!p.mask[j] && !p.mask[jm] && !p.mask[jp])
        p.dtau_phi(j) = (p.phi(jp) - p.phi(jm)) / (2.0 * dth);
    }
  }
  if (p.dee.allFinite())
    p.dtau_dee = boundary_values(tangential_deriv(boundary_from_values(p.dee)));
  else
    p.dtau_dee = VectorXd::Constant(nt, kNaN);
  return p;
}

namespace {

// Bisection for a root of the truncated series g between theta a and b.
double bisect(const BoundaryFunction& g, double a, double b) {
  double fa = boundary_eval(g, a);
  for (int it = 0; it < 200 && (b - a) > 1e-10; ++it) {
    double m = 0.5 * (a + b);
    double fm = boundary_eval(g, m);
    if ((fa <= 0) == (fm <= 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Zeros by sign-change bracketing on a refined sample of the series.
std::vector<double> series_zeros(const BoundaryFunction& g, double scale) {
  const int dense = 4 * g.n_theta;
  std::vector<double> zeros;
  double prev = boundary_eval(g, 0.0);
  for (int j = 1; j <= dense; ++j) {
    double th = 2.0 * kPi * j / dense;
    double cur = boundary_eval(g, th);
    if ((prev <= 0 && cur > 0) || (prev >= 0 && cur < 0)) {
      double still = bisect(g, 2.0 * kPi * (j - 1) / dense, th);
      if (std::abs(boundary_eval(g, still)) <= 1e-6 * scale + 1e-12)
        zeros.push_back(still);
    }
    prev = cur;
  }
  return zeros;
}

}  // namespace

HypothesisReport check_hypotheses(const CurvatureModel& model) {
  HypothesisReport rep;

  VectorXd hv = boundary_values(model.h);
  VectorXd Kb = boundary_trace_values(model.K);
  rep.min_h = hv.minCoeff();
  rep.max_sqrt_absK_boundary = Kb.array().abs().sqrt().maxCoeff();
  rep.max_sqrt_absK_disk = model.K.values.array().abs().sqrt().maxCoeff();
  rep.a = rep.min_h > rep.max_sqrt_absK_boundary;
  rep.thm22_i = rep.a;
  rep.nonexistence = rep.min_h < rep.max_sqrt_absK_disk;

  PhiProfile prof;
  try {
    prof = phi_profile(model);
  } catch (const std::runtime_error&) {
    rep.partial = true;
    return rep;  // Phi nowhere defined: only the D-based verdicts remain
  }
  rep.partial = !prof.fully_defined;

  // D-based conditions.
  rep.thm21_i = prof.dee.maxCoeff() > 1.0;
  if (prof.dee.allFinite()) {
    BoundaryFunction dee_series = boundary_from_values(prof.dee);
    BoundaryFunction dee_m1 = dee_series;
    dee_m1.coeffs(0) -= 1.0;
    double dee_scale = std::max(1.0, prof.dee.array().abs().maxCoeff());
    BoundaryFunction ddee = tangential_deriv(dee_series);
    double ddee_scale = std::max(prof.dtau_dee.array().abs().maxCoeff(), 1e-30);
    rep.thm21_ii = true;
    for (double th : series_zeros(dee_m1, dee_scale)) {
      DeeCrossing c{th, boundary_eval(ddee, th)};
      rep.dee_crossings.push_back(c);
      if (std::abs(c.dtau_dee) <= 1e-8 * std::max(1.0, ddee_scale))
        rep.thm21_ii = false;
    }
  }

  // Phi-based conditions need the full profile.
  if (prof.fully_defined) {
    double phi_scale = std::max(1.0, prof.phi.array().abs().maxCoeff());
    double dtau_scale = prof.dtau_phi.array().abs().maxCoeff();
    if (dtau_scale < 1e-10 * phi_scale) {
      // dtau Phi vanishes identically: every point is critical and the
      // strict-inequality conditions cannot hold.
      rep.degenerate_constant = true;
    } else {
      BoundaryFunction phi_series = boundary_from_values(prof.phi);
      BoundaryFunction dphi = tangential_deriv(phi_series);
      BoundaryFunction dnu_series = boundary_from_values(prof.dnu_phi);
      double dnu_scale =
          std::max(1.0, prof.dnu_phi.array().abs().maxCoeff());
      bool all_neg = true, all_pos = true;
      for (double th : series_zeros(dphi, dtau_scale)) {
        PhiCriticalPoint cp;
        cp.theta = th;
        cp.dnu_phi = boundary_eval(dnu_series, th);
        cp.dtau_phi = boundary_eval(dphi, th);
        rep.phi_critical_points.push_back(cp);
        if (std::abs(cp.dnu_phi) <= 1e-9 * dnu_scale) {
          all_neg = all_pos = false;  // degenerate critical point
        } else if (cp.dnu_phi > 0) {
          all_neg = false;
        } else {
          all_pos = false;
        }
      }
      if (!rep.phi_critical_points.empty()) {
        rep.b_minus = all_neg;
        rep.b_plus = all_pos;
      }
    }
  }
  rep.thm21_iii = rep.b_minus;
  rep.thm22_ii = rep.b_plus;
  return rep;
}

}  // namespace curvdisk
