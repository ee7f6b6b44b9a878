#include "curvdisk/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace curvdisk {

namespace {
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
constexpr double kPi = std::numbers::pi;
}  // namespace

DiskField constant_field(const GridSpec& g, double c) {
  validate_spec(g);
  return {g, MatrixXd::Constant(g.n_r, g.n_theta, c)};
}

DiskField field_from_xy(const GridSpec& g,
                        const std::function<double(double, double)>& f) {
  const DiskGrid& grid = disk_grid(g);
  DiskField out{g, MatrixXd(g.n_r, g.n_theta)};
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      out.values(i, j) = f(grid.x1()(i, j), grid.x2()(i, j));
  return out;
}

DiskField field_from_polar(const GridSpec& g,
                           const std::function<double(double, double)>& f) {
  const DiskGrid& grid = disk_grid(g);
  DiskField out{g, MatrixXd(g.n_r, g.n_theta)};
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      out.values(i, j) = f(grid.r()(i), grid.theta()(j));
  return out;
}

double quad_disk(const DiskField& f) {
  if (!f.values.allFinite()) throw std::runtime_error("non-finite field");
  const DiskGrid& g = disk_grid(f.grid);
  return g.wtheta() * (g.wr().transpose() * f.values).sum();
}

DiskField exp_field(const DiskField& f) {
  if (f.values.maxCoeff() > 700.0)
    throw std::runtime_error("field out of exponential range");
  return {f.grid, f.values.array().exp().matrix()};
}

Eigen::VectorXd exp_checked(const Eigen::VectorXd& v) {
  if (v.maxCoeff() > 700.0)
    throw std::runtime_error("field out of exponential range");
  return v.array().exp();
}

BoundaryFunction boundary_from_values(const VectorXd& vals) {
  const int n = static_cast<int>(vals.size());
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("boundary data size must be even and >= 8");
  const int K = n / 2;
  BoundaryFunction g{n, VectorXcd::Zero(K + 1)};
  for (int k = 0; k <= K; ++k) {
    double re = 0, im = 0;
    for (int j = 0; j < n; ++j) {
      double ang = 2.0 * kPi * k * j / n;
      re += vals(j) * std::cos(ang);
      im -= vals(j) * std::sin(ang);
    }
    g.coeffs(k) = std::complex<double>(re / n, k == K ? 0.0 : im / n);
  }
  return g;
}

BoundaryFunction boundary_from_callable(
    int n_theta, const std::function<double(double)>& f_of_theta) {
  VectorXd vals(n_theta);
  for (int j = 0; j < n_theta; ++j)
    vals(j) = f_of_theta(2.0 * kPi * j / n_theta);
  return boundary_from_values(vals);
}

BoundaryFunction boundary_constant(int n_theta, double c) {
  BoundaryFunction g{n_theta, VectorXcd::Zero(n_theta / 2 + 1)};
  g.coeffs(0) = c;
  return g;
}

double boundary_eval(const BoundaryFunction& g, double theta) {
  const int K = g.n_theta / 2;
  double v = g.coeffs(0).real();
  for (int k = 1; k < K; ++k)
    v += 2.0 * (g.coeffs(k).real() * std::cos(k * theta) -
                g.coeffs(k).imag() * std::sin(k * theta));
  v += g.coeffs(K).real() * std::cos(K * theta);
  return v;
}

VectorXd boundary_values(const BoundaryFunction& g) {
  VectorXd vals(g.n_theta);
  for (int j = 0; j < g.n_theta; ++j)
    vals(j) = boundary_eval(g, 2.0 * kPi * j / g.n_theta);
  return vals;
}

double quad_circle(const BoundaryFunction& g) {
  if (!g.coeffs.allFinite()) throw std::runtime_error("non-finite field");
  return 2.0 * kPi * g.coeffs(0).real();
}

double quad_circle_values(const VectorXd& vals) {
  if (!vals.allFinite()) throw std::runtime_error("non-finite field");
  return 2.0 * kPi * vals.mean();
}

BoundaryFunction rotate(const BoundaryFunction& g, double alpha) {
  // f(theta - alpha); the Nyquist mode keeps only its cos part, exact for
  // rotations by grid multiples.
  BoundaryFunction out = g;
  const int K = g.n_theta / 2;
  const std::complex<double> I(0, 1);
  for (int k = 1; k < K; ++k) out.coeffs(k) = g.coeffs(k) * std::exp(-I * (k * alpha));
  out.coeffs(K) = g.coeffs(K).real() * std::cos(K * alpha);
  return out;
}

DiskField rotate_field(const DiskField& f, int theta_steps) {
  const int nt = f.grid.n_theta;
  int s = ((theta_steps % nt) + nt) % nt;
  DiskField out{f.grid, MatrixXd(f.values.rows(), nt)};
  // rotation by s steps: g(r, theta_j) = f(r, theta_{j-s})
  for (int j = 0; j < nt; ++j) out.values.col(j) = f.values.col((j - s + nt) % nt);
  return out;
}

double resolution_defect(const DiskField& f) {
  const DiskGrid& g = disk_grid(f.grid);
  const int nr = g.nr(), nt = g.nt(), K = g.nk();

  // Angular coefficients per radius, via the trig tables.
  MatrixXd re = f.values * g.cos_table() / nt;         // nr x (K+1)
  MatrixXd im = -(f.values * g.sin_table()) / nt;      // nr x (K+1)
  // Mode weights in the energy: 1 for k=0 and Nyquist, 2 otherwise.
  VectorXd mw = VectorXd::Constant(K + 1, 2.0);
  mw(0) = 1.0;
  mw(K) = 1.0;

  // Radial modal fit per Fourier mode in the parity-respecting polynomial
  // basis: even modes P_m(2r^2-1), odd modes r P_m(2r^2-1).
  MatrixXd phi_even(nr, nr), phi_odd(nr, nr);
  for (int i = 0; i < nr; ++i) {
    double xx = 2.0 * g.r()(i) * g.r()(i) - 1.0;
    double pm1 = 0.0, p = 1.0;
    for (int m = 0; m < nr; ++m) {
      phi_even(i, m) = p;
      phi_odd(i, m) = g.r()(i) * p;
      double pn = ((2.0 * m + 1.0) * xx * p - m * pm1) / (m + 1.0);
      pm1 = p;
      p = pn;
    }
  }
  VectorXd sw = g.wr().array().sqrt();
  Eigen::ColPivHouseholderQR<MatrixXd> qr_even(sw.asDiagonal() * phi_even);
  Eigen::ColPivHouseholderQR<MatrixXd> qr_odd(sw.asDiagonal() * phi_odd);

  const int ang_tail = (3 * (K + 1)) / 4;
  const int rad_tail = (3 * nr) / 4;
  double total = 0.0, tail = 0.0;
  for (int k = 0; k <= K; ++k) {
    for (int part = 0; part < 2; ++part) {
      VectorXd prof = part == 0 ? re.col(k) : im.col(k);
      if (part == 1 && (k == 0 || k == K)) continue;
      VectorXd rhs = sw.asDiagonal() * prof;
      VectorXd coef = (k % 2 == 0) ? qr_even.solve(rhs) : qr_odd.solve(rhs);
      for (int m = 0; m < nr; ++m) {
        double e = mw(k) * coef(m) * coef(m);
        total += e;
        if (m >= rad_tail || k >= ang_tail) tail += e;
      }
    }
  }
  return total > 0 ? tail / total : 0.0;
}

}  // namespace curvdisk
