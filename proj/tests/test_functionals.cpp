#include <doctest.h>

#include "curvdisk/bubbles.hpp"
#include "curvdisk/functionals.hpp"
#include "oracles.hpp"

using namespace curvdisk;
using testutil::kPi;

namespace {
const GridSpec g128{128, 64};
const GridSpec g64{64, 32};

CurvatureModel bench() { return testutil::constant_model(g128, -1.0, 2.0); }
}  // namespace

TEST_CASE("energy of the zero field, by hand") {
  // I(0) = -2 int K + int_dD(0 - 4 h) = 2 pi - 16 pi = -14 pi.
  EnergyBreakdown e = energy(constant_field(g128, 0.0), perturb(bench(), 0.0));
  CHECK(std::abs(e.dirichlet) < 1e-13);
  CHECK(e.interior_exp == doctest::Approx(2 * kPi).epsilon(1e-13));
  CHECK(e.boundary_exp == doctest::Approx(-16 * kPi).epsilon(1e-13));
  CHECK(e.total == doctest::Approx(-14 * kPi).epsilon(1e-13));
  CHECK(e.total == doctest::Approx(e.dirichlet + e.interior_linear +
                                   e.interior_exp + e.boundary_linear +
                                   e.boundary_exp));
}

TEST_CASE("energy of the bubble family matches the closed form") {
  double phi = 2.0 + std::sqrt(3.0);
  PerturbedCoefficients c = perturb(bench(), 0.0);
  for (double lam : {0.0, 0.7}) {
    GridSpec g{256, 128};
    DiskField psi = psi_field(phi, lam, g);
    CurvatureModel m = testutil::constant_model(g, -1.0, 2.0);
    EnergyBreakdown e = energy(psi, perturb(m, 0.0));
    CHECK(e.total == doctest::Approx(bubble_energy(phi)).epsilon(1e-7));
  }
  (void)c;
}

TEST_CASE("the constant ray runs to minus infinity") {
  // I_eps(-n) = -2n (K_tilde pi + 2 pi h_tilde) + o(1): decreasing once the
  // exponential terms have died off, with the stated linear slope.
  PerturbedCoefficients c = perturb(bench(), 0.05);
  double prev = energy(constant_field(g128, -3.0), c).total;
  for (int n = 4; n <= 12; ++n) {
    double e = energy(constant_field(g128, -double(n)), c).total;
    CHECK(e < prev);
    prev = e;
  }
  double e18 = energy(constant_field(g128, -18.0), c).total;
  double e19 = energy(constant_field(g128, -19.0), c).total;
  double slope = e19 - e18;
  double expect = -2.0 * (c.K_tilde * kPi + 2.0 * kPi * c.h_tilde);
  CHECK(slope == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("perturbation functional closed forms and lower bound") {
  CHECK(perturbation_T(constant_field(g128, 0.0)) ==
        doctest::Approx(kPi).epsilon(1e-13));
  CHECK(perturbation_T(constant_field(g128, 1.0)) ==
        doctest::Approx(kPi * (std::exp(1.0) - 1.0)).epsilon(1e-13));
  std::mt19937_64 rng(23);
  for (int t = 0; t < 20; ++t) {
    DiskField u = testutil::random_poly(g64, rng, 4);
    CHECK(perturbation_T(u) >= kPi - 1e-10);
  }
}

TEST_CASE("two evaluation paths of I_eps agree") {
  std::mt19937_64 rng(29);
  CurvatureModel m = model_from_exprs(g64, "-1 - 0.2*x1^2", "2 + 0.3*x2");
  for (double eps : {0.1, -0.1, 0.01, -0.01}) {
    DiskField u = testutil::random_poly(g64, rng, 4);
    double direct = energy(u, perturb(m, eps)).total;
    double via = energy_via_perturbation(u, m, eps);
    CHECK(direct == doctest::Approx(via).epsilon(1e-10));
  }
}

TEST_CASE("I_eps decomposes as J_hh plus the bridge term") {
  std::mt19937_64 rng(31);
  CurvatureModel m = model_from_exprs(g64, "-0.5 - 0.1*x2^2", "2 + 0.2*x1");
  double hh = 1.5;
  for (double eps : {-0.15, -0.08}) {
    PerturbedCoefficients c = perturb(m, eps);
    DiskField u = testutil::random_poly(g64, rng, 4);
    double lhs = energy(u, c).total;
    double rhs = aux_energy(u, hh) + bridge_energy(u, c, hh);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("Euler-Lagrange residual: hand values and exact solutions") {
  PerturbedCoefficients c = perturb(bench(), 0.0);
  Residual r0 = el_residual(constant_field(g128, 0.0), c);
  CHECK((r0.interior.values.array() - 2.0).abs().maxCoeff() < 1e-11);
  CHECK((r0.boundary_vals.array() + 2.0).abs().maxCoeff() < 1e-11);

  DiskField u =
      bubble_field(BubbleParams::from_curvatures({0.5, 0.0}, 2.0, -1.0), g128);
  Residual rb = el_residual(u, c);
  CHECK(rb.interior.values.array().abs().maxCoeff() < 1e-7);
  CHECK(rb.boundary_vals.array().abs().maxCoeff() < 1e-7);
}

TEST_CASE("residual is the Gateaux derivative of the energy") {
  std::mt19937_64 rng(37);
  CurvatureModel m = model_from_exprs(g64, "-1 - 0.3*x2^2", "2 + 0.25*x1");
  PerturbedCoefficients c = perturb(m, 0.05);
  DiskField u = testutil::random_poly(g64, rng, 4);
  Residual r = el_residual(u, c);
  const double t = 1e-4;
  for (int trial = 0; trial < 5; ++trial) {
    DiskField v = testutil::random_poly(g64, rng, 4);
    DiskField up{g64, u.values + t * v.values};
    DiskField um{g64, u.values - t * v.values};
    double fd = (energy(up, c).total - energy(um, c).total) / (2 * t);
    double pairing = pair_residual(r, v);
    // central difference carries O(t^2) truncation
    CHECK(fd == doctest::Approx(pairing).epsilon(1e-6));
  }
}

TEST_CASE("hessian: symmetry, FD consistency, and weak-strong agreement") {
  std::mt19937_64 rng(41);
  CurvatureModel m = model_from_exprs(g64, "-1 - 0.3*x2^2", "2 + 0.25*x1");
  PerturbedCoefficients c = perturb(m, 0.05);
  DiskField u = testutil::random_poly(g64, rng, 3);

  DiskField v = testutil::random_poly(g64, rng, 4);
  DiskField w = testutil::random_poly(g64, rng, 4);

  // weak form is exactly symmetric; the strong-form pairing agrees with it
  // up to the discrete Green identity.
  double qvw = hessian_form(u, c, v, w);
  double qwv = hessian_form(u, c, w, v);
  CHECK(qvw == doctest::Approx(qwv).epsilon(1e-12));
  double strong = pair_residual(hessian_apply(u, c, v), w);
  CHECK(strong == doctest::Approx(qvw).epsilon(1e-8));

  // one-sided FD of the residual matches the Hessian action to O(t).
  const double t = 1e-4;
  DiskField ut{g64, u.values + t * v.values};
  Residual rp = el_residual(ut, c);
  Residual r0 = el_residual(u, c);
  Residual hv = hessian_apply(u, c, v);
  double worst_int =
      ((rp.interior.values - r0.interior.values) / t - hv.interior.values)
          .array()
          .abs()
          .maxCoeff();
  double worst_bnd =
      ((rp.boundary_vals - r0.boundary_vals) / t - hv.boundary_vals)
          .array()
          .abs()
          .maxCoeff();
  CHECK(worst_int < 1e-2);
  CHECK(worst_bnd < 1e-2);
}

TEST_CASE("hessian annihilates the conformal family tangents at the bubble") {
  GridSpec g{128, 64};
  CurvatureModel m = testutil::constant_model(g, -1.0, 2.0);
  PerturbedCoefficients c = perturb(m, 0.0);
  DiskField u =
      bubble_field(BubbleParams::from_curvatures({0, 0}, 2.0, -1.0), g);

  const double d = 1e-3;
  auto tangent = [&](int axis) {
    Eigen::Vector2d ap = Eigen::Vector2d::Zero(), am = Eigen::Vector2d::Zero();
    ap(axis) = d;
    am(axis) = -d;
    DiskField fp = bubble_field(BubbleParams::from_curvatures(ap, 2.0, -1.0), g);
    DiskField fm = bubble_field(BubbleParams::from_curvatures(am, 2.0, -1.0), g);
    DiskField z{g, (fp.values - fm.values) / (2 * d)};
    double nrm = std::sqrt(quad_disk(DiskField{g, z.values.array().square().matrix()}));
    z.values /= nrm;
    return z;
  };
  std::mt19937_64 rng(43);
  DiskField wrand = testutil::random_poly(g, rng, 4);
  double wn = std::sqrt(
      quad_disk(DiskField{g, wrand.values.array().square().matrix()}));
  wrand.values /= wn;
  for (int axis = 0; axis < 2; ++axis) {
    DiskField z = tangent(axis);
    CHECK(std::abs(hessian_form(u, c, z, z)) < 1e-5);
    CHECK(std::abs(hessian_form(u, c, z, wrand)) < 1e-5);
  }
}

TEST_CASE("constraint state closed forms") {
  ConstraintState s0 = constraint_state(constant_field(g128, 0.0));
  CHECK(s0.A == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(s0.B.norm() < 1e-14);
  CHECK(s0.chi(0) == doctest::Approx(2 * kPi - 1).epsilon(1e-14));

  // u0 = 3 log sigma: A = 2 pi sigma^{3/2}.
  double sigma = 0.01;
  ConstraintState su0 =
      constraint_state(constant_field(g128, 3.0 * std::log(sigma)));
  CHECK(su0.A == doctest::Approx(2 * kPi * std::pow(sigma, 1.5)).epsilon(1e-12));

  // u3 = Psi(1+sigma, 0): A = 4 pi (1+sigma) / ((1+sigma)^2 - 1).
  DiskField u3 = psi_field(1.0 + sigma, 0.0, g128);
  ConstraintState su3 = constraint_state(u3);
  double expect = 4 * kPi * (1 + sigma) / ((1 + sigma) * (1 + sigma) - 1);
  CHECK(su3.A == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("normalized trace-inequality gap") {
  CHECK(std::abs(lebedev_milin_gap(constant_field(g128, 0.0))) < 1e-10);
  CHECK(std::abs(lebedev_milin_gap(constant_field(g128, -3.7))) < 1e-9);

  DiskField x1ext = field_from_xy(g128, [](double a, double) { return a; });
  CHECK(lebedev_milin_gap(x1ext) > 0.0);

  // shift invariance
  std::mt19937_64 rng(47);
  DiskField u = testutil::random_poly(g64, rng, 4);
  DiskField shifted{g64, (u.values.array() + 2.3).matrix()};
  CHECK(lebedev_milin_gap(u) ==
        doctest::Approx(lebedev_milin_gap(shifted)).epsilon(1e-9));

  // nonnegativity over the random corpus
  for (int t = 0; t < 100; ++t) {
    DiskField f = testutil::random_poly(g64, rng, 5);
    CHECK(lebedev_milin_gap(f) >= -1e-8);
  }
}

TEST_CASE("exponential overflow guard") {
  DiskField big = constant_field(g64, 800.0);
  CHECK_THROWS_WITH_AS(exp_field(big), "field out of exponential range",
                       std::runtime_error);
  CHECK_THROWS_AS(energy(big, perturb(testutil::constant_model(g64, -1, 2), 0)),
                  std::runtime_error);
}
