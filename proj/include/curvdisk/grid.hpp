#pragma once
// Spectral collocation machinery for the closed unit disk in polar
// coordinates: equispaced Fourier nodes in angle, polynomial nodes in radius
// with the boundary circle r = 1 collocated and r = 0 excluded.
//
// Radial representation uses the parity trick in the squared radius: an
// angular mode of order k has a radial profile of parity (-1)^k, i.e. g(r^2)
// for even k and r g(r^2) for odd k with g a polynomial. Nodes are placed in
// s = r^2 (Gauss-Radau or Chebyshev extrema there, boundary s = 1 fixed), so
// interpolation and differentiation in s stay well conditioned across the
// coordinate singularity.

#include <Eigen/Dense>

#include <memory>
#include <mutex>
#include <string>

namespace curvdisk {

enum class RadialMap { chebyshev_extrema, gauss_radau };

std::string to_string(RadialMap m);
RadialMap radial_map_from_string(const std::string& s);

struct GridSpec {
  int n_theta = 128;
  int n_r = 64;
  RadialMap r_map = RadialMap::gauss_radau;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Throws std::invalid_argument when n_theta is odd or < 8, or n_r < 4.
void validate_spec(const GridSpec& spec);

// Precomputed node/weight/derivative data shared by every field on the same
// spec. Heavy angular tables are built lazily so that quadrature-only use of
// very fine grids stays cheap.
class DiskGrid {
 public:
  explicit DiskGrid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int nr() const { return spec_.n_r; }
  int nt() const { return spec_.n_theta; }
  int nk() const { return spec_.n_theta / 2; }

  const Eigen::VectorXd& r() const { return r_; }        // ascending, back()=1
  const Eigen::VectorXd& wr() const { return wr_; }      // includes Jacobian r
  const Eigen::VectorXd& theta() const { return theta_; }
  double wtheta() const { return wtheta_; }

  const Eigen::MatrixXd& x1() const { return x1_; }
  const Eigen::MatrixXd& x2() const { return x2_; }
  const Eigen::VectorXd& cos_theta() const { return cos_t_; }
  const Eigen::VectorXd& sin_theta() const { return sin_t_; }

  // d/dr V = Dpp*V + Dpm*shift_half(V); d2/dr2 likewise with D2. The
  // half-shift supplies the antipodal column, f(-r, theta) = f(r, theta+pi),
  // which resolves both parities at once.
  const Eigen::MatrixXd& Dpp() const { return Dpp_; }
  const Eigen::MatrixXd& Dpm() const { return Dpm_; }
  const Eigen::MatrixXd& D2pp() const { return D2pp_; }
  const Eigen::MatrixXd& D2pm() const { return D2pm_; }

  // Parity-resolved radial derivative matrices for a single Fourier mode
  // (parity 0: even, 1: odd).
  const Eigen::MatrixXd& radial_d1(int parity) const {
    return parity % 2 == 0 ? De_ : Do_;
  }
  const Eigen::MatrixXd& radial_d2(int parity) const {
    return parity % 2 == 0 ? D2e_ : D2o_;
  }

  // Row vector evaluating an even-parity radial profile at r = 0.
  const Eigen::RowVectorXd& even_profile_at_zero() const { return at_zero_; }

  // Barycentric interpolation rows at radius r in [0, 1]: f(r) = we . f_nodes
  // for even-parity profiles, wo . f_nodes for odd-parity ones.
  void interp_rows(double r, Eigen::RowVectorXd& we,
                   Eigen::RowVectorXd& wo) const;

  // Angular derivatives, stored pre-transposed: V_theta = V * dtheta_t().
  const Eigen::MatrixXd& dtheta_t() const;
  const Eigen::MatrixXd& dtheta2_t() const;

  // Trig synthesis tables, cos(k*theta_j) and sin(k*theta_j), n_theta x (nk+1).
  const Eigen::MatrixXd& cos_table() const;
  const Eigen::MatrixXd& sin_table() const;

  // r_i^k table, n_r x (nk+1), for harmonic extension.
  const Eigen::MatrixXd& rpow_table() const;

  // Columns j -> j + n_theta/2 (mod n_theta), i.e. theta -> theta + pi.
  Eigen::MatrixXd shift_half(const Eigen::MatrixXd& v) const;

 private:
  GridSpec spec_;
  Eigen::VectorXd r_, wr_, theta_;
  double wtheta_ = 0;
  Eigen::VectorXd cos_t_, sin_t_;
  Eigen::MatrixXd x1_, x2_;
  Eigen::MatrixXd De_, Do_, D2e_, D2o_;
  Eigen::MatrixXd Dpp_, Dpm_, D2pp_, D2pm_;
  Eigen::RowVectorXd at_zero_;
  Eigen::VectorXd s_, wbs_;  // s = r^2 nodes and barycentric weights there

  mutable std::once_flag angular_once_, trig_once_, rpow_once_;
  mutable Eigen::MatrixXd dtheta_t_, dtheta2_t_;
  mutable Eigen::MatrixXd cos_table_, sin_table_;
  mutable Eigen::MatrixXd rpow_;

  void build_angular() const;
  void build_trig() const;
  void build_rpow() const;
};

// Process-wide cache keyed by spec; safe for concurrent use.
const DiskGrid& disk_grid(const GridSpec& spec);

// Radial nodes/weights alone (weights include the Jacobian r), for
// high-resolution quadrature that should not enter the grid cache.
void radial_rule(int n_r, RadialMap map, Eigen::VectorXd& r,
                 Eigen::VectorXd& wr);

}  // namespace curvdisk
