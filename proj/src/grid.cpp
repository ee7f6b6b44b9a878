#include "curvdisk/grid.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace curvdisk {

namespace {

using Eigen::MatrixXd;
using Eigen::MatrixXcd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

constexpr double kPi = std::numbers::pi;

// Gauss-Radau rule in s on [0, 1] with the endpoint s = 1 preassigned
// (Legendre weight; Golub's modified-Jacobi-matrix construction). Exact for
// polynomials of degree <= 2n - 2.
void gauss_radau_rule_s(int n, VectorXd& s, VectorXd& ws) {
  VectorXd a = VectorXd::Zero(n), b(n);
  b(0) = 2.0;  // total mass of dx on [-1, 1]
  for (int k = 1; k < n; ++k) b(k) = k * k / (4.0 * k * k - 1.0);

  double pkm1 = 0.0, pk = 1.0;  // monic p_{-1}(1), p_0(1)
  for (int k = 0; k + 1 < n; ++k) {
    double pkp1 = (1.0 - a(k)) * pk - (k > 0 ? b(k) : 0.0) * pkm1;
    pkm1 = pk;
    pk = pkp1;
  }
  double a_last = 1.0 - b(n - 1) * pkm1 / pk;

  MatrixXd J = MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) J(k, k) = (k == n - 1) ? a_last : a(k);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(b(k));

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(J);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("grid: Radau eigensolve failed");
  VectorXd x = es.eigenvalues();
  s.resize(n);
  ws.resize(n);
  for (int i = 0; i < n; ++i) {
    double q = es.eigenvectors()(0, i);
    s(i) = (x(i) + 1.0) / 2.0;
    ws(i) = b(0) * q * q / 2.0;  // maps dx/2 to ds
  }
  s(n - 1) = 1.0;
}

// Chebyshev extrema: r_m = cos(pi m / (2n-1)), the positive extrema of
// T_{2n-1}, so s = r^2 follows the arcsine distribution on (0, 1] with s = 1
// included and s = 0 excluded. Weights are moment-fitted in the shifted
// Legendre basis (positive for this family, exact through s-degree n-1).
void cheb_extrema_rule_s(int n, VectorXd& s, VectorXd& ws) {
  s.resize(n);
  for (int i = 0; i < n; ++i)
    s(i) = (1.0 + std::cos(2.0 * kPi * (n - 1 - i) / (2 * n - 1))) / 2.0;
  s(n - 1) = 1.0;

  MatrixXd V(n, n);
  for (int i = 0; i < n; ++i) {
    double xx = 2.0 * s(i) - 1.0;
    double pm1 = 0.0, p = 1.0;
    for (int m = 0; m < n; ++m) {
      V(m, i) = p;
      double pn = ((2.0 * m + 1.0) * xx * p - m * pm1) / (m + 1.0);
      pm1 = p;
      p = pn;
    }
  }
  VectorXd mom = VectorXd::Zero(n);
  mom(0) = 1.0;  // int_0^1 ds
  ws = V.colPivHouseholderQr().solve(mom);
  if (!(ws.array() > 0).all())
    throw std::runtime_error("grid: nonpositive radial quadrature weight");
}

// Barycentric weights, normalized in log space so products of node gaps
// cannot under/overflow for large node counts.
VectorXd bary_weights(const VectorXd& x) {
  const int n = static_cast<int>(x.size());
  VectorXd logw(n), sign(n);
  for (int i = 0; i < n; ++i) {
    double lg = 0.0, sgn = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double d = x(i) - x(j);
      sgn *= (d > 0 ? 1.0 : -1.0);
      lg += std::log(std::abs(d));
    }
    logw(i) = -lg;
    sign(i) = sgn;
  }
  double mean = logw.mean();
  VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = sign(i) * std::exp(logw(i) - mean);
  return w;
}

MatrixXd bary_diff1(const VectorXd& x, const VectorXd& w) {
  const int n = static_cast<int>(x.size());
  MatrixXd D(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      D(i, j) = (w(j) / w(i)) / (x(i) - x(j));
      diag -= D(i, j);
    }
    D(i, i) = diag;
  }
  return D;
}

MatrixXd bary_diff2(const VectorXd& x, const MatrixXd& D1) {
  const int n = static_cast<int>(x.size());
  MatrixXd D2(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      D2(i, j) = 2.0 * D1(i, j) * (D1(i, i) - 1.0 / (x(i) - x(j)));
      diag -= D2(i, j);
    }
    D2(i, i) = diag;
  }
  return D2;
}

}  // namespace

std::string to_string(RadialMap m) {
  return m == RadialMap::gauss_radau ? "gauss_radau" : "chebyshev_extrema";
}

RadialMap radial_map_from_string(const std::string& s) {
  if (s == "gauss_radau") return RadialMap::gauss_radau;
  if (s == "chebyshev_extrema") return RadialMap::chebyshev_extrema;
  throw std::invalid_argument("unknown radial map: " + s);
}

void validate_spec(const GridSpec& spec) {
  if (spec.n_theta < 8 || spec.n_theta % 2 != 0)
    throw std::invalid_argument("grid: n_theta must be even and >= 8");
  if (spec.n_r < 4) throw std::invalid_argument("grid: n_r must be >= 4");
}

DiskGrid::DiskGrid(const GridSpec& spec) : spec_(spec) {
  validate_spec(spec);
  const int nr = spec.n_r, nt = spec.n_theta;

  VectorXd ws;
  if (spec.r_map == RadialMap::gauss_radau)
    gauss_radau_rule_s(nr, s_, ws);
  else
    cheb_extrema_rule_s(nr, s_, ws);
  r_ = s_.array().sqrt();
  r_(nr - 1) = 1.0;
  // int_0^1 f(r) r dr = (1/2) int_0^1 g(s) ds on even profiles, which is all
  // the polar quadrature ever sees (odd angular modes integrate to zero).
  wr_ = ws / 2.0;
  if (!(wr_.array() > 0).all())
    throw std::runtime_error("grid: nonpositive radial quadrature weight");

  theta_.resize(nt);
  for (int j = 0; j < nt; ++j) theta_(j) = 2.0 * kPi * j / nt;
  wtheta_ = 2.0 * kPi / nt;
  cos_t_ = theta_.array().cos();
  sin_t_ = theta_.array().sin();

  x1_.resize(nr, nt);
  x2_.resize(nr, nt);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j) {
      x1_(i, j) = r_(i) * cos_t_(j);
      x2_(i, j) = r_(i) * sin_t_(j);
    }

  // Differentiation through the s = r^2 representation:
  //   even profile f = g(s):   f' = 2 r g',        f'' = 2 g' + 4 s g'';
  //   odd profile  f = r g(s): f' = g + 2 s g',    f'' = 6 r g' + 4 r s g''.
  wbs_ = bary_weights(s_);
  MatrixXd Ds = bary_diff1(s_, wbs_);
  MatrixXd Ds2 = bary_diff2(s_, Ds);
  VectorXd inv_r = r_.array().inverse();

  De_ = 2.0 * (r_.asDiagonal() * Ds);
  D2e_ = 2.0 * Ds + 4.0 * (s_.asDiagonal() * Ds2);
  Do_ = (MatrixXd::Identity(nr, nr) + 2.0 * (s_.asDiagonal() * Ds)) *
        inv_r.asDiagonal();
  D2o_ = (6.0 * (r_.asDiagonal() * Ds) +
          4.0 * ((r_.array() * s_.array()).matrix().asDiagonal() * Ds2)) *
         inv_r.asDiagonal();

  Dpp_ = 0.5 * (De_ + Do_);
  Dpm_ = 0.5 * (De_ - Do_);
  D2pp_ = 0.5 * (D2e_ + D2o_);
  D2pm_ = 0.5 * (D2e_ - D2o_);

  // Barycentric evaluation of an even profile at s = 0.
  VectorXd coef(nr);
  double total = 0.0;
  for (int i = 0; i < nr; ++i) {
    coef(i) = wbs_(i) / (0.0 - s_(i));
    total += coef(i);
  }
  at_zero_ = (coef / total).transpose();
}

void DiskGrid::interp_rows(double r, Eigen::RowVectorXd& we,
                           Eigen::RowVectorXd& wo) const {
  const int nr = spec_.n_r;
  const double s = r * r;
  we.setZero(nr);
  wo.setZero(nr);
  int hit = -1;
  for (int i = 0; i < nr; ++i)
    if (std::abs(s - s_(i)) < 1e-15) hit = i;
  if (hit >= 0) {
    we(hit) = 1.0;
    wo(hit) = (r_(hit) > 0) ? r / r_(hit) : 0.0;
    return;
  }
  VectorXd t(nr);
  double denom = 0.0;
  for (int i = 0; i < nr; ++i) {
    t(i) = wbs_(i) / (s - s_(i));
    denom += t(i);
  }
  for (int i = 0; i < nr; ++i) {
    we(i) = t(i) / denom;
    wo(i) = r * t(i) / (denom * r_(i));
  }
}

void DiskGrid::build_angular() const {
  const int nt = spec_.n_theta, K = nt / 2;
  MatrixXcd E(K + 1, nt), S(nt, K + 1);
  const std::complex<double> I(0, 1);
  for (int k = 0; k <= K; ++k)
    for (int j = 0; j < nt; ++j) {
      E(k, j) = std::exp(-I * (k * theta_(j))) / double(nt);
      double factor = (k == 0 || k == K) ? 1.0 : 2.0;
      S(j, k) = factor * std::exp(I * (k * theta_(j)));
    }
  Eigen::VectorXcd d1(K + 1), d2(K + 1);
  for (int k = 0; k <= K; ++k) {
    d1(k) = (k == K) ? 0.0 : I * double(k);  // Nyquist differentiates to 0
    d2(k) = -double(k) * double(k);
  }
  dtheta_t_ = (S * d1.asDiagonal() * E).real().transpose();
  dtheta2_t_ = (S * d2.asDiagonal() * E).real().transpose();
}

void DiskGrid::build_trig() const {
  const int nt = spec_.n_theta, K = nt / 2;
  cos_table_.resize(nt, K + 1);
  sin_table_.resize(nt, K + 1);
  for (int j = 0; j < nt; ++j)
    for (int k = 0; k <= K; ++k) {
      cos_table_(j, k) = std::cos(k * theta_(j));
      sin_table_(j, k) = std::sin(k * theta_(j));
    }
}

void DiskGrid::build_rpow() const {
  const int nr = spec_.n_r, K = spec_.n_theta / 2;
  rpow_.resize(nr, K + 1);
  for (int i = 0; i < nr; ++i) {
    rpow_(i, 0) = 1.0;
    for (int k = 1; k <= K; ++k) rpow_(i, k) = rpow_(i, k - 1) * r_(i);
  }
}

const Eigen::MatrixXd& DiskGrid::dtheta_t() const {
  std::call_once(angular_once_, [this] { build_angular(); });
  return dtheta_t_;
}

const Eigen::MatrixXd& DiskGrid::dtheta2_t() const {
  std::call_once(angular_once_, [this] { build_angular(); });
  return dtheta2_t_;
}

const Eigen::MatrixXd& DiskGrid::cos_table() const {
  std::call_once(trig_once_, [this] { build_trig(); });
  return cos_table_;
}

const Eigen::MatrixXd& DiskGrid::sin_table() const {
  std::call_once(trig_once_, [this] { build_trig(); });
  return sin_table_;
}

const Eigen::MatrixXd& DiskGrid::rpow_table() const {
  std::call_once(rpow_once_, [this] { build_rpow(); });
  return rpow_;
}

Eigen::MatrixXd DiskGrid::shift_half(const Eigen::MatrixXd& v) const {
  const int nt = spec_.n_theta, half = nt / 2;
  Eigen::MatrixXd out(v.rows(), nt);
  out.leftCols(nt - half) = v.rightCols(nt - half);
  out.rightCols(half) = v.leftCols(half);
  return out;
}

void radial_rule(int n_r, RadialMap map, Eigen::VectorXd& r,
                 Eigen::VectorXd& wr) {
  VectorXd s, ws;
  if (map == RadialMap::gauss_radau)
    gauss_radau_rule_s(n_r, s, ws);
  else
    cheb_extrema_rule_s(n_r, s, ws);
  r = s.array().sqrt();
  r(n_r - 1) = 1.0;
  wr = ws / 2.0;
}

const DiskGrid& disk_grid(const GridSpec& spec) {
  static std::mutex mtx;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<DiskGrid>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_tuple(spec.n_theta, spec.n_r, int(spec.r_map));
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<DiskGrid>(spec)).first;
  return *it->second;
}

}  // namespace curvdisk
