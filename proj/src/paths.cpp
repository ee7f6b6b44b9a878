#include "curvdisk/paths.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "curvdisk/bubbles.hpp"
#include "curvdisk/operators.hpp"

namespace curvdisk {

namespace {
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::VectorXd;
constexpr double kPi = std::numbers::pi;
}  // namespace

double LinkingConfig::phi0() const { return hh0 + std::sqrt(hh0 * hh0 - 1.0); }

void LinkingConfig::validate() const {
  if (!(sigma > 0) || !(sigma < 1))
    throw std::invalid_argument("linking: sigma must be in (0,1)");
  if (!(delta > 0)) throw std::invalid_argument("linking: delta must be > 0");
  if (!(hh0 > 1)) throw std::invalid_argument("linking: hh0 must be > 1");
  if (!(hh > 1) || !(hh < hh0))
    throw std::invalid_argument("linking: hh must be in (1, hh0)");
  if (!(phi0() > 1 + sigma))
    throw std::invalid_argument("linking: phi0 must exceed 1 + sigma");
}

double normalization_shift(const CurvatureModel& model, double margin) {
  double maxAbsK = model.K.values.array().abs().maxCoeff();
  double c = std::max(0.0, std::log(maxAbsK / (1.0 - margin)));
  double min_h = boundary_values(model.h).minCoeff();
  if (!(min_h * std::exp(-c / 2.0) >= 1.0 + margin))
    throw std::invalid_argument(
        "normalization shift infeasible: h margin fails at c = " +
        std::to_string(c));
  return c;
}

CurvatureModel shifted_model(const CurvatureModel& model, double c) {
  CurvatureModel out;
  out.K = model.K;
  out.K.values *= std::exp(-c);
  out.h = model.h;
  out.h.coeffs *= std::exp(-c / 2.0);
  return out;
}

TestFunctions test_functions(const LinkingConfig& cfg, const GridSpec& grid) {
  cfg.validate();
  TestFunctions tf;
  tf.u0 = constant_field(grid, 3.0 * std::log(cfg.sigma));
  tf.u1 = psi_field(cfg.phi0(), 1.0 - cfg.sigma, grid);
  tf.u2 = psi_field(1.0 + cfg.sigma, 1.0 - cfg.sigma, grid);
  tf.u3 = psi_field(1.0 + cfg.sigma, 0.0, grid);
  return tf;
}

namespace {

struct SegmentPoint {
  PathSegment segment;
  double t;       // parameter inside the segment
  double phi;     // bubble parameters (g2/g3 and the u1 endpoint of g1)
  double lambda;
};

SegmentPoint locate(const LinkingConfig& cfg, double tau) {
  if (!(tau >= 0.0) && !(tau <= 1.0))
    throw std::invalid_argument("path parameter out of [0,1]");
  tau = std::clamp(tau, 0.0, 1.0);
  if (tau <= 1.0 / 3.0) {
    return {PathSegment::g1, 3.0 * tau, cfg.phi0(), 1.0 - cfg.sigma};
  }
  if (tau <= 2.0 / 3.0) {
    double t = 3.0 * tau - 1.0;
    double phi = (1.0 - t) * cfg.phi0() + t * (1.0 + cfg.sigma);
    return {PathSegment::g2, t, phi, 1.0 - cfg.sigma};
  }
  double t = 3.0 * tau - 2.0;
  return {PathSegment::g3, t, 1.0 + cfg.sigma, (1.0 - t) * (1.0 - cfg.sigma)};
}

Vector2d unit_or_default(const Vector2d& p) {
  double n = p.norm();
  if (n < 1e-14) return Vector2d(1.0, 0.0);
  return p / n;
}

}  // namespace

DiskField gamma_path(const LinkingConfig& cfg, const Vector2d& p_in, double tau,
                     const GridSpec& grid) {
  cfg.validate();
  Vector2d p = unit_or_default(p_in);
  SegmentPoint sp = locate(cfg, tau);
  if (sp.segment == PathSegment::g1) {
    DiskField u1 = bubble_field(
        BubbleParams::from_phi((1.0 - cfg.sigma) * p, cfg.phi0()), grid);
    double u0 = 3.0 * std::log(cfg.sigma);
    u1.values = ((1.0 - sp.t) * u0 + sp.t * u1.values.array()).matrix();
    return u1;
  }
  return bubble_field(BubbleParams::from_phi(sp.lambda * p, sp.phi), grid);
}

VectorXd gamma_trace_values(const LinkingConfig& cfg, const Vector2d& p_in,
                            double tau, int n_theta) {
  cfg.validate();
  Vector2d p = unit_or_default(p_in);
  SegmentPoint sp = locate(cfg, tau);
  if (sp.segment == PathSegment::g1) {
    VectorXd u1 = bubble_trace_values(
        BubbleParams::from_phi((1.0 - cfg.sigma) * p, cfg.phi0()), n_theta);
    double u0 = 3.0 * std::log(cfg.sigma);
    return ((1.0 - sp.t) * u0 + sp.t * u1.array()).matrix();
  }
  return bubble_trace_values(BubbleParams::from_phi(sp.lambda * p, sp.phi),
                             n_theta);
}

PathProfile path_energy_profile(const CurvatureModel& model, double eps,
                                const LinkingConfig& cfg, const Vector2d& p,
                                int n_samples, const GridSpec& grid) {
  cfg.validate();
  if (n_samples < 2) throw std::invalid_argument("need at least 2 samples");
  PerturbedCoefficients coeffs = perturb(model, eps);

  PathProfile prof;
  prof.alpha = 8.0 * kPi * cfg.delta / (2.0 + cfg.delta);
  // Post-shift margin r over the boundary and the outer annulus (l = 1/2).
  VectorXd h_eps_vals = boundary_values(coeffs.h_eps);
  double r_margin = h_eps_vals.minCoeff() - cfg.hh0;
  const DiskGrid& g = disk_grid(grid);
  for (int i = 0; i < grid.n_r; ++i) {
    if (g.r()(i) < 0.5) continue;
    r_margin = std::min(r_margin,
                        coeffs.K_eps.values.row(i).minCoeff() + 1.0);
  }
  prof.beta = 8.0 * kPi * std::max(r_margin, 0.0);

  const int nb = std::max(grid.n_theta, 2048);
  prof.max_energy = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    double tau = double(s) / (n_samples - 1);
    SegmentPoint sp = locate(cfg, tau);
    PathSample sample;
    sample.tau = tau;
    sample.segment = sp.segment;
    sample.seg_t = sp.t;
    sample.phi = sp.phi;
    sample.lambda = sp.lambda;

    DiskField u = gamma_path(cfg, p, tau, grid);
    try {
      sample.energy = energy(u, coeffs).total;
      sample.aux_energy = aux_energy(u, cfg.hh);
      sample.bridge = bridge_energy(u, coeffs, cfg.hh);
    } catch (const std::runtime_error&) {
      sample.resolved = false;
      ++prof.unresolved;
    }
    sample.constraint =
        constraint_state_values(gamma_trace_values(cfg, p, tau, nb), nb);
    if (sample.resolved)
      prof.max_energy = std::max(prof.max_energy, sample.energy);
    prof.samples.push_back(std::move(sample));
  }
  return prof;
}

DiskField lambda_map(const LinkingConfig& cfg, const Vector3d& y,
                     const GridSpec& grid) {
  if (std::abs(y.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("lambda_map: |y| must be 1");
  double t = std::clamp(y(0), -1.0, 1.0);
  Vector2d p = unit_or_default(Vector2d(y(1), y(2)));
  return gamma_path(cfg, p, (t + 1.0) / 2.0, grid);
}

Vector3d chi_of_lambda(const LinkingConfig& cfg, const Vector3d& y,
                       int n_theta) {
  double t = std::clamp(y(0), -1.0, 1.0);
  Vector2d p = unit_or_default(Vector2d(y(1), y(2)));
  VectorXd tr = gamma_trace_values(cfg, p, (t + 1.0) / 2.0, n_theta);
  return constraint_state_values(tr, n_theta).chi;
}

SphereMesh icosphere(int refinement) {
  if (refinement < 0) throw std::invalid_argument("refinement must be >= 0");
  SphereMesh mesh;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  auto add = [&](double a, double b, double c) {
    mesh.vertices.push_back(Vector3d(a, b, c).normalized());
  };
  add(-1, phi, 0); add(1, phi, 0); add(-1, -phi, 0); add(1, -phi, 0);
  add(0, -1, phi); add(0, 1, phi); add(0, -1, -phi); add(0, 1, -phi);
  add(phi, 0, -1); add(phi, 0, 1); add(-phi, 0, -1); add(-phi, 0, 1);
  int fc[20][3] = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10},
                   {0, 10, 11}, {1, 5, 9},   {5, 11, 4},  {11, 10, 2},
                   {10, 7, 6},  {7, 1, 8},   {3, 9, 4},   {3, 4, 2},
                   {3, 2, 6},   {3, 6, 8},   {3, 8, 9},   {4, 9, 5},
                   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},   {9, 8, 1}};
  for (auto& f : fc) mesh.faces.push_back(Eigen::Vector3i(f[0], f[1], f[2]));

  for (int level = 0; level < refinement; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vector3d m = (mesh.vertices[a] + mesh.vertices[b]).normalized();
      mesh.vertices.push_back(m);
      int idx = static_cast<int>(mesh.vertices.size()) - 1;
      midpoint[key] = idx;
      return idx;
    };
    std::vector<Eigen::Vector3i> next;
    next.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      int ab = mid(f(0), f(1)), bc = mid(f(1), f(2)), ca = mid(f(2), f(0));
      next.push_back({f(0), ab, ca});
      next.push_back({f(1), bc, ab});
      next.push_back({f(2), ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(next);
  }

  // Enforce outward orientation.
  for (auto& f : mesh.faces) {
    const Vector3d &a = mesh.vertices[f(0)], &b = mesh.vertices[f(1)],
                   &c = mesh.vertices[f(2)];
    if ((b - a).cross(c - a).dot(a + b + c) < 0) std::swap(f(1), f(2));
  }
  return mesh;
}

double winding_sum(const SphereMesh& mesh,
                   const std::vector<Vector3d>& images) {
  if (images.size() != mesh.vertices.size())
    throw std::invalid_argument("winding_sum: image count mismatch");
  double total = 0;
  for (const auto& f : mesh.faces) {
    const Vector3d &a = images[f(0)], &b = images[f(1)], &c = images[f(2)];
    double la = a.norm(), lb = b.norm(), lc = c.norm();
    double det = a.dot(b.cross(c));
    double denom =
        la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
    total += 2.0 * std::atan2(det, denom);
  }
  return total;
}

DegreeReport degree_of_chi_lambda(const CurvatureModel& model,
                                  const LinkingConfig& cfg,
                                  int mesh_refinement) {
  cfg.validate();
  // The map chi . Lambda is built from the universal test paths; the model
  // enters through the post-shift margin requirements, which we verify.
  PerturbedCoefficients coeffs = perturb(model, -0.75 * cfg.delta);
  if (!(boundary_values(coeffs.h_eps).minCoeff() > cfg.hh0))
    throw std::invalid_argument(
        "degree: model violates h_eps > hh0 after shift");

  const int nb = 2048;
  for (int refine = std::max(mesh_refinement, 1); refine <= mesh_refinement + 2;
       ++refine) {
    SphereMesh mesh = icosphere(refine);
    std::vector<Vector3d> images(mesh.vertices.size());
    double min_chi = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
      images[i] = chi_of_lambda(cfg, mesh.vertices[i], nb);
      min_chi = std::min(min_chi, images[i].norm());
    }
    if (!(min_chi > 1e-12)) continue;  // refine and retry

    DegreeReport rep;
    rep.refinement = refine;
    rep.min_chi_norm = min_chi;
    double ws = winding_sum(mesh, images) / (4.0 * kPi);
    rep.degree = static_cast<int>(std::lround(ws));
    if (std::abs(ws - rep.degree) > 1e-6) continue;  // face grazed the origin

    double min_h = std::numeric_limits<double>::infinity();
    for (int si = 0; si <= 10; ++si) {
      double s = si / 10.0;
      for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        double n = ((1.0 - s) * images[i] + s * mesh.vertices[i]).norm();
        min_h = std::min(min_h, n);
      }
    }
    rep.min_homotopy_norm = min_h;
    rep.admissible = min_h > 1e-12;
    return rep;
  }
  throw std::runtime_error("degree undefined at this resolution");
}

}  // namespace curvdisk
