#include "curvdisk/bubbles.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "curvdisk/operators.hpp"

namespace curvdisk {

namespace {
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;
constexpr double kPi = std::numbers::pi;

void check_params(const BubbleParams& p) {
  if (!(p.a.norm() < 1.0) || !(p.phi > 1.0) || !(p.k < 0.0) || !(p.hh > 1.0))
    throw std::invalid_argument("invalid bubble parameters");
}

double denom_at(const BubbleParams& p, double x1, double x2) {
  const std::complex<double> a(p.a(0), p.a(1)), x(x1, x2);
  return p.phi * p.phi * std::norm(1.0 - std::conj(a) * x) +
         p.k * std::norm(x - a);
}
}  // namespace

BubbleParams BubbleParams::from_curvatures(const Vector2d& a, double hh,
                                           double k) {
  double disc = hh * hh + k;
  if (!(disc > 0))
    throw std::invalid_argument("invalid bubble parameters");
  BubbleParams p;
  p.a = a;
  p.hh = hh;
  p.k = k;
  p.phi = hh + std::sqrt(disc);
  check_params(p);
  return p;
}

BubbleParams BubbleParams::from_phi(const Vector2d& a, double phi) {
  BubbleParams p;
  p.a = a;
  p.phi = phi;
  p.k = -1.0;
  p.hh = 0.5 * (phi + 1.0 / phi);
  check_params(p);
  return p;
}

double bubble_eval(const BubbleParams& p, double x1, double x2) {
  double num = 2.0 * p.phi * (1.0 - p.a.squaredNorm());
  double den = denom_at(p, x1, x2);
  return 2.0 * std::log(num / den);
}

DiskField bubble_field(const BubbleParams& p, const GridSpec& grid) {
  check_params(p);
  const DiskGrid& g = disk_grid(grid);
  DiskField out{grid, MatrixXd(grid.n_r, grid.n_theta)};
  const double num = 2.0 * p.phi * (1.0 - p.a.squaredNorm());
  for (int i = 0; i < grid.n_r; ++i)
    for (int j = 0; j < grid.n_theta; ++j) {
      double den = denom_at(p, g.x1()(i, j), g.x2()(i, j));
      if (!(den > 0.0))
        throw std::invalid_argument("invalid bubble parameters");
      out.values(i, j) = 2.0 * std::log(num / den);
    }
  return out;
}

VectorXd bubble_trace_values(const BubbleParams& p, int n_theta) {
  VectorXd out(n_theta);
  for (int j = 0; j < n_theta; ++j) {
    double th = 2.0 * kPi * j / n_theta;
    out(j) = bubble_eval(p, std::cos(th), std::sin(th));
  }
  return out;
}

DiskField psi_field(double phi, double lambda, const GridSpec& grid) {
  if (!(phi > 1.0) || !(lambda >= 0.0) || !(lambda < 1.0))
    throw std::invalid_argument("invalid bubble parameters");
  return bubble_field(BubbleParams::from_phi({lambda, 0.0}, phi), grid);
}

double bubble_boundary_mass(double hh) {
  return 2.0 * kPi / std::sqrt(hh * hh - 1.0);
}

double bubble_interior_mass(double hh) {
  return 2.0 * kPi * (hh / std::sqrt(hh * hh - 1.0) - 1.0);
}

double bubble_energy(double phi) {
  return -8.0 * kPi * (1.0 + std::log(phi / 2.0));
}

DiskField moebius_jacobian_sqrt(const Vector2d& a, const GridSpec& grid) {
  const DiskGrid& g = disk_grid(grid);
  const std::complex<double> ac(a(0), a(1));
  const double one_m = 1.0 - std::norm(ac);
  DiskField out{grid, MatrixXd(grid.n_r, grid.n_theta)};
  for (int i = 0; i < grid.n_r; ++i)
    for (int j = 0; j < grid.n_theta; ++j) {
      std::complex<double> x(g.x1()(i, j), g.x2()(i, j));
      out.values(i, j) = one_m / std::norm(1.0 + std::conj(ac) * x);
    }
  return out;
}

VectorXd moebius_boundary_jacobian(const Vector2d& a, int n_theta) {
  const std::complex<double> ac(a(0), a(1));
  const double one_m = 1.0 - std::norm(ac);
  VectorXd out(n_theta);
  for (int j = 0; j < n_theta; ++j) {
    double th = 2.0 * kPi * j / n_theta;
    std::complex<double> x(std::cos(th), std::sin(th));
    out(j) = one_m / std::norm(1.0 + std::conj(ac) * x);
  }
  return out;
}

std::pair<DiskField, DiskField> kernel_fields(const BubbleParams& p,
                                              const GridSpec& grid) {
  const DiskGrid& g = disk_grid(grid);
  DiskField z1{grid, MatrixXd(grid.n_r, grid.n_theta)};
  DiskField z2{grid, MatrixXd(grid.n_r, grid.n_theta)};
  for (int i = 0; i < grid.n_r; ++i)
    for (int j = 0; j < grid.n_theta; ++j) {
      double r2 = g.r()(i) * g.r()(i);
      double den = p.phi * p.phi + p.k * r2;
      z1.values(i, j) = g.x1()(i, j) / den;
      z2.values(i, j) = g.x2()(i, j) / den;
    }
  return {std::move(z1), std::move(z2)};
}

std::pair<double, double> appendix_limits(double a, double phi, double k) {
  if (!(a >= 0.0) || !(a < 1.0) || !(phi > 1.0) || !(k < 0.0))
    throw std::invalid_argument("invalid bubble parameters");
  // Resolution scales with the concentration length 1 - a; accumulate the
  // tensor quadrature directly so these grids never enter the cache.
  const double gap = 1.0 - a;
  int nt = std::max(256, int(std::ceil(16.0 / gap)));
  nt = std::min(nt, 1 << 14);
  if (nt % 2) ++nt;
  int nr = std::clamp(int(std::ceil(9.0 / std::sqrt(gap))) + 32, 96, 512);

  VectorXd r, wr;
  radial_rule(nr, RadialMap::gauss_radau, r, wr);

  BubbleParams p;
  p.a = Vector2d(a, 0.0);
  p.phi = phi;
  p.k = k;
  p.hh = 1.5;  // not used by the evaluation

  const double wt = 2.0 * kPi / nt;
  double interior = 0.0;
  for (int i = 0; i < nr; ++i) {
    double row = 0.0;
    for (int j = 0; j < nt; ++j) {
      double th = wt * j;
      double x1 = r(i) * std::cos(th), x2 = r(i) * std::sin(th);
      row += x1 * bubble_eval(p, x1, x2);
    }
    interior += wr(i) * row;
  }
  interior *= wt;

  double boundary = 0.0;
  for (int j = 0; j < nt; ++j) {
    double th = wt * j;
    boundary += std::cos(th) * bubble_eval(p, std::cos(th), std::sin(th));
  }
  boundary *= wt;
  return {interior, boundary};
}

double resolvable_concentration(const GridSpec& grid, double phi, double k) {
  double best = 0.0;
  for (int j = 1; j <= 14; ++j) {
    double a = 1.0 - std::pow(2.0, -j);
    BubbleParams p;
    p.a = Vector2d(a, 0.0);
    p.phi = phi;
    p.k = k;
    p.hh = 1.5;
    DiskField f = bubble_field(p, grid);
    if (resolution_defect(f) < 1e-4)
      best = a;
    else
      break;
  }
  return best;
}

}  // namespace curvdisk
