#include "curvdisk/operators.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace curvdisk {

namespace {
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;
constexpr double kPi = std::numbers::pi;

// Angular Fourier coefficients of every radial row; re/im are n_r x (nk+1).
void analyze_rows(const DiskGrid& g, const MatrixXd& v, MatrixXd& re,
                  MatrixXd& im) {
  const int nt = g.nt();
  re = v * g.cos_table() / nt;
  im = -(v * g.sin_table()) / nt;
}

double synth_factor(int k, int K) { return (k == 0 || k == K) ? 1.0 : 2.0; }
}  // namespace

namespace detail {

MatrixXd dr(const DiskGrid& g, const MatrixXd& v) {
  return g.Dpp() * v + g.Dpm() * g.shift_half(v);
}

MatrixXd laplacian_raw(const DiskGrid& g, const MatrixXd& v) {
  const int nt = g.nt(), K = g.nk();
  MatrixXd vh = g.shift_half(v);
  MatrixXd out = g.D2pp() * v + g.D2pm() * vh;
  MatrixXd fr = g.Dpp() * v + g.Dpm() * vh;
  out.array() += fr.array().colwise() / g.r().array();

  // Angular part in mode space with a machine-noise gate: coefficients at
  // the rounding floor would otherwise be amplified by k^2 / r^2 at the
  // innermost nodes and dominate the pointwise residual there.
  MatrixXd re = v * g.cos_table() / nt;
  MatrixXd im = -(v * g.sin_table()) / nt;
  const double gate = 256.0 * std::numeric_limits<double>::epsilon() *
                      v.array().abs().maxCoeff();
  MatrixXd A(g.nr(), K + 1), B(g.nr(), K + 1);
  for (int k = 0; k <= K; ++k) {
    double fac = -double(k) * double(k) * synth_factor(k, K);
    A.col(k) = fac * (re.col(k).array().abs() > gate)
                         .select(re.col(k), 0.0);
    B.col(k) = -fac * (im.col(k).array().abs() > gate)
                          .select(im.col(k), 0.0);
  }
  MatrixXd ftt =
      A * g.cos_table().transpose() + B * g.sin_table().transpose();
  out.array() += ftt.array().colwise() / g.r().array().square();
  return out;
}

void gradient_raw(const DiskGrid& g, const MatrixXd& v, MatrixXd& gx,
                  MatrixXd& gy) {
  MatrixXd fr = dr(g, v);
  MatrixXd ft_over_r = v * g.dtheta_t();
  ft_over_r.array().colwise() /= g.r().array();
  gx = (fr.array().rowwise() * g.cos_theta().transpose().array() -
        ft_over_r.array().rowwise() * g.sin_theta().transpose().array())
           .matrix();
  gy = (fr.array().rowwise() * g.sin_theta().transpose().array() +
        ft_over_r.array().rowwise() * g.cos_theta().transpose().array())
           .matrix();
}

MatrixXd gradient_adjoint_raw(const DiskGrid& g, const MatrixXd& gx,
                              const MatrixXd& gy) {
  // <grad v, (gx, gy)> = <v, adjoint(gx, gy)> in the plain dot product.
  MatrixXd xr = gx.array().rowwise() * g.cos_theta().transpose().array();
  MatrixXd yr = gy.array().rowwise() * g.sin_theta().transpose().array();
  MatrixXd from_r = xr + yr;
  MatrixXd acc = g.Dpp().transpose() * from_r +
                 g.Dpm().transpose() * g.shift_half(from_r);

  MatrixXd xt = gx.array().rowwise() * g.sin_theta().transpose().array();
  MatrixXd yt = gy.array().rowwise() * g.cos_theta().transpose().array();
  MatrixXd from_t = yt - xt;
  from_t.array().colwise() /= g.r().array();
  acc += from_t * g.dtheta_t().transpose();
  return acc;
}

void center_clean(const DiskGrid& g, MatrixXd& v) {
  // Even angular modes k >= 2 must have radial profiles vanishing at r = 0
  // for a single-valued field. Profiles whose extrapolated center value
  // exceeds the 1e-10 tolerance (relative to the field scale) get that
  // value subtracted; resolved fields sit far below the threshold and pass
  // through untouched.
  const int nt = g.nt(), K = g.nk();
  const double scale = std::max(v.array().abs().maxCoeff(), 1e-300);
  MatrixXd re, im;
  analyze_rows(g, v, re, im);
  RowVectorXd corr = RowVectorXd::Zero(nt);
  bool any = false;
  for (int k = 2; k <= K; k += 2) {
    double re0 = g.even_profile_at_zero() * re.col(k);
    double im0 = g.even_profile_at_zero() * im.col(k);
    if (std::abs(re0) <= 1e-10 * scale && std::abs(im0) <= 1e-10 * scale)
      continue;
    any = true;
    double fac = synth_factor(k, K);
    for (int j = 0; j < nt; ++j)
      corr(j) += fac * (re0 * std::cos(k * g.theta()(j)) -
                        im0 * std::sin(k * g.theta()(j)));
  }
  if (any) v.rowwise() -= corr;
}

}  // namespace detail

std::pair<DiskField, DiskField> gradient(const DiskField& f) {
  const DiskGrid& g = disk_grid(f.grid);
  MatrixXd gx, gy;
  detail::gradient_raw(g, f.values, gx, gy);
  detail::center_clean(g, gx);
  detail::center_clean(g, gy);
  return {DiskField{f.grid, std::move(gx)}, DiskField{f.grid, std::move(gy)}};
}

DiskField laplacian(const DiskField& f) {
  const DiskGrid& g = disk_grid(f.grid);
  MatrixXd out = detail::laplacian_raw(g, f.values);
  detail::center_clean(g, out);
  return {f.grid, std::move(out)};
}

Eigen::VectorXd boundary_trace_values(const DiskField& f) {
  return f.values.row(f.grid.n_r - 1).transpose();
}

BoundaryFunction boundary_trace(const DiskField& f) {
  return boundary_from_values(boundary_trace_values(f));
}

Eigen::VectorXd normal_deriv_values(const DiskField& f) {
  const DiskGrid& g = disk_grid(f.grid);
  const int last = g.nr() - 1;
  RowVectorXd row = g.Dpp().row(last) * f.values +
                    g.Dpm().row(last) * g.shift_half(f.values);
  return row.transpose();
}

BoundaryFunction normal_deriv(const DiskField& f) {
  return boundary_from_values(normal_deriv_values(f));
}

BoundaryFunction tangential_deriv(const BoundaryFunction& g) {
  const int K = g.n_theta / 2;
  BoundaryFunction out{g.n_theta, Eigen::VectorXcd::Zero(K + 1)};
  const std::complex<double> I(0, 1);
  for (int k = 1; k < K; ++k) out.coeffs(k) = I * double(k) * g.coeffs(k);
  out.coeffs(K) = 0.0;  // Nyquist sine is invisible on the grid
  return out;
}

BoundaryFunction dtn(const BoundaryFunction& g) {
  const int K = g.n_theta / 2;
  BoundaryFunction out{g.n_theta, Eigen::VectorXcd::Zero(K + 1)};
  for (int k = 1; k <= K; ++k) out.coeffs(k) = double(k) * g.coeffs(k);
  return out;
}

DiskField harmonic_extension(const BoundaryFunction& g, const GridSpec& spec) {
  if (g.n_theta != spec.n_theta)
    throw std::invalid_argument("harmonic_extension: grid mismatch");
  const DiskGrid& grid = disk_grid(spec);
  const int nr = grid.nr(), K = grid.nk();
  MatrixXd A(nr, K + 1), B(nr, K + 1);
  for (int k = 0; k <= K; ++k) {
    double fac = synth_factor(k, K);
    A.col(k) = fac * g.coeffs(k).real() * grid.rpow_table().col(k);
    B.col(k) = -fac * g.coeffs(k).imag() * grid.rpow_table().col(k);
  }
  MatrixXd vals = A * grid.cos_table().transpose() +
                  B * grid.sin_table().transpose();
  return {spec, std::move(vals)};
}

double eval_field(const DiskField& f, double r, double theta) {
  const DiskGrid& g = disk_grid(f.grid);
  const int K = g.nk();
  MatrixXd re, im;
  analyze_rows(g, f.values, re, im);

  RowVectorXd we, wo;
  g.interp_rows(r, we, wo);

  double val = 0.0;
  for (int k = 0; k <= K; ++k) {
    const RowVectorXd& wrow = (k % 2 == 0) ? we : wo;
    double rk = wrow * re.col(k);
    double ik = wrow * im.col(k);
    val += synth_factor(k, K) *
           (rk * std::cos(k * theta) - ik * std::sin(k * theta));
  }
  return val;
}

Eigen::VectorXd eval_field_circle(const DiskField& f, double r) {
  const DiskGrid& g = disk_grid(f.grid);
  const int nt = g.nt(), K = g.nk();
  MatrixXd re, im;
  analyze_rows(g, f.values, re, im);

  RowVectorXd we, wo;
  g.interp_rows(r, we, wo);

  VectorXd out = VectorXd::Zero(nt);
  for (int k = 0; k <= K; ++k) {
    const RowVectorXd& wrow = (k % 2 == 0) ? we : wo;
    double rk = wrow * re.col(k);
    double ik = wrow * im.col(k);
    double fac = synth_factor(k, K);
    out += fac * (rk * g.cos_table().col(k) - ik * g.sin_table().col(k));
  }
  return out;
}

DiskField moebius_pullback(const DiskField& u, const Eigen::Vector2d& a) {
  if (a.norm() >= 1.0)
    throw std::invalid_argument("invalid Moebius parameter");
  const DiskGrid& g = disk_grid(u.grid);
  const int nr = g.nr(), nt = g.nt(), K = g.nk();
  const std::complex<double> ac(a(0), a(1));
  const double one_m = 1.0 - std::norm(ac);

  MatrixXd re, im;
  analyze_rows(g, u.values, re, im);

  DiskField out{u.grid, MatrixXd(nr, nt)};
  RowVectorXd we(nr), wo(nr);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nt; ++j) {
      std::complex<double> x(g.x1()(i, j), g.x2()(i, j));
      std::complex<double> denom = 1.0 + std::conj(ac) * x;
      std::complex<double> fx = (ac + x) / denom;
      double rs = std::min(std::abs(fx), 1.0);
      double ths = std::arg(fx);
      g.interp_rows(rs, we, wo);

      double val = 0.0;
      for (int k = 0; k <= K; ++k) {
        const RowVectorXd& wrow = (k % 2 == 0) ? we : wo;
        double rk = wrow * re.col(k);
        double ik = wrow * im.col(k);
        val += synth_factor(k, K) *
               (rk * std::cos(k * ths) - ik * std::sin(k * ths));
      }
      double jac = one_m / std::norm(denom);  // |f_a'(x)|
      out.values(i, j) = val + 2.0 * std::log(jac);
    }
  }
  return out;
}

}  // namespace curvdisk
