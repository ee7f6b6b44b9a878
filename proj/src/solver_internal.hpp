#pragma once
// Shared internals of the solver family: the per-Fourier-mode block
// preconditioner and a restarted GMRES. Not part of the public interface.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "curvdisk/grid.hpp"

namespace curvdisk::solver_detail {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Robin-type per-mode blocks: interior rows of
//   -(f'' + f'/r - k^2 f / r^2) - c1(r) f,
// boundary row f'(1) - c2 f(1). Exact for angularly constant coefficients.
struct ModePreconditioner {
  std::vector<Eigen::PartialPivLU<MatrixXd>> lu;
  const DiskGrid* grid = nullptr;

  void build(const DiskGrid& g, const VectorXd& c1, double c2) {
    grid = &g;
    const int nr = g.nr(), K = g.nk();
    lu.clear();
    lu.reserve(K + 1);
    VectorXd inv_r = g.r().array().inverse();
    VectorXd inv_r2 = inv_r.array().square();
    for (int k = 0; k <= K; ++k) {
      MatrixXd D1 = g.radial_d1(k % 2);
      MatrixXd D2 = g.radial_d2(k % 2);
      MatrixXd L = -(D2 + inv_r.asDiagonal() * D1);
      L.diagonal().array() += double(k) * double(k) * inv_r2.array();
      L -= MatrixXd(c1.asDiagonal());
      MatrixXd Mk(nr, nr);
      Mk.topRows(nr - 1) = L.topRows(nr - 1);
      Mk.row(nr - 1) = D1.row(nr - 1);
      Mk(nr - 1, nr - 1) -= c2;
      Eigen::PartialPivLU<MatrixXd> fac(Mk);
      // A vanishing pivot only occurs for degenerate coefficient data; a
      // tiny ridge keeps the block usable.
      if (!(std::abs(fac.matrixLU().diagonal().minCoeff()) > 1e-13)) {
        Mk.diagonal().array() += 1e-10;
        fac.compute(Mk);
      }
      lu.push_back(std::move(fac));
    }
  }

  MatrixXd apply(const MatrixXd& b) const {
    const DiskGrid& g = *grid;
    const int nt = g.nt(), K = g.nk();
    MatrixXd re = b * g.cos_table() / nt;
    MatrixXd im = -(b * g.sin_table()) / nt;
    MatrixXd A(g.nr(), K + 1), B(g.nr(), K + 1);
    for (int k = 0; k <= K; ++k) {
      double fac = (k == 0 || k == K) ? 1.0 : 2.0;
      A.col(k) = fac * lu[k].solve(re.col(k));
      B.col(k) = -fac * lu[k].solve(im.col(k));
    }
    return A * g.cos_table().transpose() + B * g.sin_table().transpose();
  }
};

// Restarted GMRES with modified Gram-Schmidt (one reorthogonalization pass)
// and Givens rotations; returns the achieved relative residual.
template <typename ApplyOp>
double gmres(const ApplyOp& apply, const VectorXd& rhs, VectorXd& x,
             double rtol, int restart, int maxit) {
  const int n = static_cast<int>(rhs.size());
  x = VectorXd::Zero(n);
  double bnorm = rhs.norm();
  if (bnorm == 0) return 0.0;

  double res = 1.0;
  int total = 0;
  while (total < maxit) {
    VectorXd r = rhs - apply(x);
    double beta = r.norm();
    res = beta / bnorm;
    if (res < rtol) return res;

    const int m = std::min(restart, maxit - total);
    MatrixXd V(n, m + 1);
    MatrixXd H = MatrixXd::Zero(m + 1, m);
    VectorXd cs = VectorXd::Zero(m), sn = VectorXd::Zero(m);
    VectorXd gamma = VectorXd::Zero(m + 1);
    V.col(0) = r / beta;
    gamma(0) = beta;

    int j = 0;
    for (; j < m; ++j, ++total) {
      VectorXd w = apply(V.col(j));
      for (int i = 0; i <= j; ++i) {
        double hij = V.col(i).dot(w);
        w -= hij * V.col(i);
        H(i, j) = hij;
      }
      for (int i = 0; i <= j; ++i) {
        double corr = V.col(i).dot(w);
        w -= corr * V.col(i);
        H(i, j) += corr;
      }
      H(j + 1, j) = w.norm();
      if (H(j + 1, j) > 0) V.col(j + 1) = w / H(j + 1, j);

      for (int i = 0; i < j; ++i) {
        double t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
        H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
        H(i, j) = t;
      }
      double denom = std::hypot(H(j, j), H(j + 1, j));
      if (denom == 0) {
        ++j;
        break;
      }
      cs(j) = H(j, j) / denom;
      sn(j) = H(j + 1, j) / denom;
      H(j, j) = denom;
      H(j + 1, j) = 0;
      gamma(j + 1) = -sn(j) * gamma(j);
      gamma(j) = cs(j) * gamma(j);
      res = std::abs(gamma(j + 1)) / bnorm;
      if (res < rtol) {
        ++j;
        break;
      }
    }

    VectorXd y = VectorXd::Zero(j);
    for (int i = j - 1; i >= 0; --i) {
      double s = gamma(i);
      for (int l = i + 1; l < j; ++l) s -= H(i, l) * y(l);
      y(i) = s / H(i, i);
    }
    for (int i = 0; i < j; ++i) x += y(i) * V.col(i);
    if (res < rtol) return res;
    if (j == 0) break;
  }
  return res;
}

}  // namespace curvdisk::solver_detail
