#include <cmath>
#include <stdexcept>
#include <vector>

#include "curvdisk/solver.hpp"
#include "solver_internal.hpp"

namespace curvdisk {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Pencil eigenvalues of (Q, M) with rank-deflated M (handles nearly
// dependent basis vectors from enrichment).
void deflated_pencil(const MatrixXd& Q, const MatrixXd& M, VectorXd& theta,
                     MatrixXd& y) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> esM(M);
  const VectorXd& ev = esM.eigenvalues();
  double cut = 1e-12 * ev.maxCoeff();
  int keep = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > cut) ++keep;
  MatrixXd P(M.rows(), keep);
  int c = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > cut)
      P.col(c++) = esM.eigenvectors().col(i) / std::sqrt(ev(i));
  MatrixXd Qp = P.transpose() * Q * P;
  Qp = 0.5 * (Qp + Qp.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> esQ(Qp);
  theta = esQ.eigenvalues();
  y = P * esQ.eigenvectors();
}

}  // namespace

MorseSpectrum morse_index(const DiskField& u, const PerturbedCoefficients& c,
                          int n_eigs) {
  const DiskGrid& g = disk_grid(u.grid);
  const int nr = g.nr(), nt = g.nt(), K = g.nk(), N = nr * nt;
  n_eigs = std::max(1, std::min(n_eigs, 64));

  MatrixXd eu = u.values.array().exp();
  if (!eu.allFinite())
    throw std::runtime_error("field out of exponential range");
  MatrixXd cI = 2.0 * (c.K_eps.values.array() * eu.array()).matrix();
  VectorXd tr = u.values.row(nr - 1).transpose();
  VectorXd cB = boundary_values(c.h_eps).array() * (tr / 2.0).array().exp();
  VectorXd c1bar = cI.rowwise().mean();
  double c2bar = cB.mean();

  // Seed subspace: low radial eigenvectors of the angularly averaged pencil,
  // one block per Fourier mode (exact when u and the data are radial).
  int k_max = std::min(K, 32);
  int me = std::max(4, std::min(10, n_eigs));
  while (double(N) * (2.0 * k_max + 1) * me * 8.0 > 2.0e8 && k_max > 8)
    k_max /= 2;

  const VectorXd& wr = g.wr();
  VectorXd wr_inv_r2 = wr.array() / g.r().array().square();

  struct Entry {
    int k;
    bool is_sin;
    VectorXd radial;
  };
  std::vector<Entry> seeds;
  for (int k = 0; k <= k_max; ++k) {
    MatrixXd D1 = g.radial_d1(k % 2);
    MatrixXd Sr = D1.transpose() * wr.asDiagonal() * D1;
    Sr += (double(k) * double(k) * wr_inv_r2).asDiagonal();
    MatrixXd Mk = Sr + MatrixXd(wr.asDiagonal());
    MatrixXd Qk = Sr - MatrixXd((wr.array() * c1bar.array()).matrix().asDiagonal());
    Qk(nr - 1, nr - 1) -= c2bar;
    VectorXd th;
    MatrixXd y;
    deflated_pencil(Qk, Mk, th, y);
    for (int m = 0; m < std::min<int>(me, th.size()); ++m) {
      seeds.push_back({k, false, y.col(m)});
      if (k > 0 && k < K) seeds.push_back({k, true, y.col(m)});
    }
  }

  // Basis fields and their weighted gradients, flattened column-major.
  MatrixXd Wmat(nr, nt);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) Wmat(i, j) = wr(i) * g.wtheta();
  MatrixXd sqW = Wmat.array().sqrt();

  auto flatten = [N](const MatrixXd& m) {
    return VectorXd(Eigen::Map<const VectorXd>(m.data(), N));
  };

  int nb = static_cast<int>(seeds.size());
  MatrixXd B(N, nb), GXw(N, nb), GYw(N, nb);
  for (int n = 0; n < nb; ++n) {
    MatrixXd f(nr, nt);
    const Entry& e = seeds[n];
    for (int j = 0; j < nt; ++j) {
      double trig = e.is_sin ? std::sin(e.k * g.theta()(j))
                             : std::cos(e.k * g.theta()(j));
      f.col(j) = e.radial * trig;
    }
    MatrixXd gx, gy;
    detail::gradient_raw(g, f, gx, gy);
    B.col(n) = flatten(f);
    GXw.col(n) = flatten((sqW.array() * gx.array()).matrix());
    GYw.col(n) = flatten((sqW.array() * gy.array()).matrix());
  }

  VectorXd wvec = flatten(Wmat);
  VectorXd wcI = flatten((Wmat.array() * cI.array()).matrix());

  auto boundary_rowsum = [&](const MatrixXd& basis, int col_a, int col_b) {
    // int_dD cB tr(a) tr(b); traces sit at flat indices (nr-1) + j*nr.
    double s = 0;
    for (int j = 0; j < nt; ++j) {
      int idx = (nr - 1) + j * nr;
      s += cB(j) * basis(idx, col_a) * basis(idx, col_b);
    }
    return s * g.wtheta();
  };

  MorseSpectrum out;
  solver_detail::ModePreconditioner metric;
  metric.build(g, VectorXd::Constant(nr, -1.0), -1.0);

  for (int round = 0;; ++round) {
    nb = static_cast<int>(B.cols());
    MatrixXd grad_gram = GXw.transpose() * GXw + GYw.transpose() * GYw;
    MatrixXd Q = grad_gram - B.transpose() * (wcI.asDiagonal() * B);
    MatrixXd M = grad_gram + B.transpose() * (wvec.asDiagonal() * B);
    for (int a = 0; a < nb; ++a)
      for (int b = a; b < nb; ++b) {
        double s = boundary_rowsum(B, a, b);
        Q(a, b) -= s;
        if (b != a) Q(b, a) -= s;
      }
    Q = 0.5 * (Q + Q.transpose());
    M = 0.5 * (M + M.transpose());

    VectorXd theta;
    MatrixXd y;
    deflated_pencil(Q, M, theta, y);

    out.negative = 0;
    out.near_zero = 0;
    for (int i = 0; i < theta.size(); ++i) {
      if (theta(i) < -1e-6) ++out.negative;
      if (std::abs(theta(i)) < 1e-6) ++out.near_zero;
    }
    const int L = std::min<int>(std::max(n_eigs, out.negative + out.near_zero + 2),
                                theta.size());

    // Certify the lowest L Ritz pairs against the full pencil.
    out.eigenvalues.clear();
    out.residuals.clear();
    std::vector<MatrixXd> enrich;
    double worst = 0;
    for (int l = 0; l < L; ++l) {
      VectorXd v = B * y.col(l);
      MatrixXd V = Eigen::Map<const MatrixXd>(v.data(), nr, nt);
      MatrixXd gx, gy;
      detail::gradient_raw(g, V, gx, gy);
      MatrixXd grad_adj = detail::gradient_adjoint_raw(
          g, (Wmat.array() * gx.array()).matrix(),
          (Wmat.array() * gy.array()).matrix());
      MatrixXd QV = grad_adj - (Wmat.array() * cI.array() * V.array()).matrix();
      QV.row(nr - 1) -=
          g.wtheta() * (cB.array() * V.row(nr - 1).transpose().array())
                           .matrix()
                           .transpose();
      MatrixXd MV = grad_adj + (Wmat.array() * V.array()).matrix();
      MatrixXd R = QV - theta(l) * MV;
      double rel = R.norm() / std::max(MV.norm(), 1e-300);
      worst = std::max(worst, rel);
      if (l < n_eigs) {
        out.eigenvalues.push_back(theta(l));
        out.residuals.push_back(rel);
      }
      if (rel > 1e-6) enrich.push_back((R.array() / Wmat.array()).matrix());
    }

    if (enrich.empty()) return out;
    if (round >= 4)
      throw std::runtime_error(
          "eigensolver non-convergence: worst pencil residual " +
          std::to_string(worst) + " after " + std::to_string(round) +
          " enrichment rounds, subspace " + std::to_string(nb));

    int add = static_cast<int>(enrich.size());
    B.conservativeResize(Eigen::NoChange, nb + add);
    GXw.conservativeResize(Eigen::NoChange, nb + add);
    GYw.conservativeResize(Eigen::NoChange, nb + add);
    for (int a = 0; a < add; ++a) {
      MatrixXd d = metric.apply(enrich[a]);
      double nrm = flatten(d).norm();
      if (nrm > 0) d /= nrm;
      MatrixXd gx, gy;
      detail::gradient_raw(g, d, gx, gy);
      B.col(nb + a) = flatten(d);
      GXw.col(nb + a) = flatten((sqW.array() * gx.array()).matrix());
      GYw.col(nb + a) = flatten((sqW.array() * gy.array()).matrix());
    }
  }
}

}  // namespace curvdisk
