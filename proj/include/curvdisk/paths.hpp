#pragma once
// The explicit min-max geometry for eps < 0: the four test functions, the
// three-segment paths gamma_p, the sphere map Lambda, the constraint map
// chi = (A - 1, B), and the Brouwer degree of chi . Lambda on S^2.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "curvdisk/curvature.hpp"
#include "curvdisk/functionals.hpp"
#include "curvdisk/solver.hpp"

namespace curvdisk {

struct LinkingConfig {
  double sigma = 0.05;       // in (0,1)
  double delta = 0.2;        // in (0, delta0); delta0 is not computable
  double hh0 = 2.0;          // > 1
  double hh = 1.5;           // in (1, hh0)
  double normalization_shift = 0.0;  // the rescaling constant c
  double phi0() const;       // hh0 + sqrt(hh0^2 - 1)
  void validate() const;     // throws std::invalid_argument
};

// Smallest nonnegative c with K e^{-c} >= -1 + margin and h e^{-c/2} >= 1 +
// margin pointwise (margin 0.05); throws if no such c exists. The shifted
// model replaces (K, h) by (K e^{-c}, h e^{-c/2}).
double normalization_shift(const CurvatureModel& model, double margin = 0.05);
CurvatureModel shifted_model(const CurvatureModel& model, double c);

enum class PathSegment { g1, g2, g3 };

struct PathSample {
  double tau = 0;
  PathSegment segment = PathSegment::g1;
  double seg_t = 0;       // parameter inside the segment
  double phi = 0;         // bubble parameters where applicable
  double lambda = 0;
  double energy = 0;
  double aux_energy = 0;   // J_hh
  double bridge = 0;       // B_{eps,hh}
  ConstraintState constraint;
  bool resolved = true;
};

// u0 = 3 log sigma, u1 = Psi(phi0, 1-sigma), u2 = Psi(1+sigma, 1-sigma),
// u3 = Psi(1+sigma, 0).
struct TestFunctions {
  DiskField u0, u1, u2, u3;
};
TestFunctions test_functions(const LinkingConfig& cfg, const GridSpec& grid);

// gamma_p(tau) for tau in [0,1]; p a unit vector. Segment boundaries at
// tau = 1/3 and 2/3.
DiskField gamma_path(const LinkingConfig& cfg, const Eigen::Vector2d& p,
                     double tau, const GridSpec& grid);

// Boundary trace of gamma_p(tau) on a dedicated theta grid (exact closed
// forms; no disk-grid resolution limits). Used by constraint evaluations.
Eigen::VectorXd gamma_trace_values(const LinkingConfig& cfg,
                                   const Eigen::Vector2d& p, double tau,
                                   int n_theta);

struct PathProfile {
  std::vector<PathSample> samples;
  double max_energy = 0;       // over resolved samples
  int unresolved = 0;
  double alpha = 0;            // 8 pi delta / (2 + delta)
  double beta = 0;             // 8 pi r, r = post-shift margin (l = 1/2)
};

PathProfile path_energy_profile(const CurvatureModel& model, double eps,
                                const LinkingConfig& cfg,
                                const Eigen::Vector2d& p, int n_samples,
                                const GridSpec& grid);

// Cylindrical decomposition y = (t, sqrt(1-t^2) p); poles map to u0 / u3.
DiskField lambda_map(const LinkingConfig& cfg, const Eigen::Vector3d& y,
                     const GridSpec& grid);

// chi(Lambda(y)) evaluated through boundary traces only.
Eigen::Vector3d chi_of_lambda(const LinkingConfig& cfg,
                              const Eigen::Vector3d& y, int n_theta);

struct DegreeReport {
  int degree = 0;
  double min_chi_norm = 0;
  double min_homotopy_norm = 0;  // min over mesh x 11 s-values of |H(y,s)|
  int refinement = 0;
  bool admissible = false;
};

// Brouwer degree of chi . Lambda : S^2 -> R^3 \ {0} by signed solid angles
// over an icosphere mesh. Throws std::runtime_error
// ("degree undefined at this resolution") if chi vanishes on the mesh.
DegreeReport degree_of_chi_lambda(const CurvatureModel& model,
                                  const LinkingConfig& cfg, int mesh_refinement);

// Icosphere triangulation of S^2 (refinement >= 0) and the solid-angle sum
// for an arbitrary vertex-image map; exposed for the degree fixtures.
struct SphereMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Eigen::Vector3i> faces;  // outward-oriented
};
SphereMesh icosphere(int refinement);
double winding_sum(const SphereMesh& mesh,
                   const std::vector<Eigen::Vector3d>& images);

}  // namespace curvdisk
