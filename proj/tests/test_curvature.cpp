#include <doctest.h>

#include "curvdisk/curvature.hpp"
#include "curvdisk/operators.hpp"
#include "oracles.hpp"

using namespace curvdisk;
using testutil::kPi;

namespace {
const GridSpec g64{64, 32};
}

TEST_CASE("perturbed coefficients: closed forms and sign relation") {
  CurvatureModel m = testutil::constant_model(g64, -1.0, 2.0);

  PerturbedCoefficients c0 = perturb(m, 0.0);
  CHECK(c0.K_tilde == 0.0);
  CHECK(c0.h_tilde == 1.0);
  CHECK((c0.K_eps.values.array() + 1.0).abs().maxCoeff() < 1e-15);
  CHECK((boundary_values(c0.h_eps).array() - 2.0).abs().maxCoeff() < 5e-14);

  PerturbedCoefficients c1 = perturb(m, 0.1);
  CHECK(c1.K_tilde == doctest::Approx(-1.0 / 22.0).epsilon(1e-15));
  CHECK(c1.h_tilde == doctest::Approx(1.0 / 1.1).epsilon(1e-15));
  CHECK(c1.K_eps.values(0, 0) == doctest::Approx(-1.05 / 1.1).epsilon(1e-15));

  for (double eps : {0.3, 0.05, -0.05, -0.3}) {
    PerturbedCoefficients c = perturb(m, eps);
    CHECK(c.K_tilde * eps < 0);
    CHECK((c.h_tilde - 1.0) * eps < 0);
  }
  CHECK_THROWS_WITH_AS(perturb(m, -1.0), "invalid perturbation",
                       std::invalid_argument);
}

TEST_CASE("perturb is affine in (K, h) for fixed eps") {
  CurvatureModel m1 = model_from_exprs(g64, "-1 - 0.3*x1^2", "2 + 0.5*x1");
  CurvatureModel m2 = model_from_exprs(g64, "-2 + 0.4*x2^2", "3 - 0.2*x2");
  const double t = 0.37, eps = 0.07;
  CurvatureModel blend;
  blend.K = DiskField{g64, t * m1.K.values + (1 - t) * m2.K.values};
  blend.h = m1.h;
  blend.h.coeffs = t * m1.h.coeffs + (1 - t) * m2.h.coeffs;

  PerturbedCoefficients cb = perturb(blend, eps);
  PerturbedCoefficients c1 = perturb(m1, eps), c2 = perturb(m2, eps);
  CHECK((cb.K_eps.values - (t * c1.K_eps.values + (1 - t) * c2.K_eps.values))
            .array()
            .abs()
            .maxCoeff() < 1e-14);
  CHECK((cb.h_eps.coeffs - (t * c1.h_eps.coeffs + (1 - t) * c2.h_eps.coeffs))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("phi profile for constant data is constant and flat") {
  CurvatureModel m = testutil::constant_model(g64, -1.0, 2.0);
  PhiProfile p = phi_profile(m);
  REQUIRE(p.fully_defined);
  double phi_exact = 2.0 + std::sqrt(3.0);
  CHECK((p.phi.array() - phi_exact).abs().maxCoeff() < 1e-13);
  CHECK(p.dtau_phi.array().abs().maxCoeff() < 5e-12);
  CHECK(p.dnu_phi.array().abs().maxCoeff() < 1e-12);
  CHECK((p.dee.array() - 2.0).abs().maxCoeff() < 1e-13);
}

TEST_CASE("phi profile for K=-1, h=3+x1: critical points and signs") {
  CurvatureModel m = model_from_exprs(g64, "-1", "3 + x1");
  PhiProfile p = phi_profile(m);
  REQUIRE(p.fully_defined);

  BoundaryFunction dnu_series = boundary_from_values(p.dnu_phi);
  double at0 = boundary_eval(dnu_series, 0.0);
  double atpi = boundary_eval(dnu_series, kPi);
  // dnu Phi(1,0) = 1 + 4/sqrt(15) (hand-differentiated closed form);
  // dnu Phi(-1,0) = -(2+sqrt(3))/sqrt(3).
  CHECK(at0 == doctest::Approx(1.0 + 4.0 / std::sqrt(15.0)).epsilon(1e-10));
  CHECK(atpi == doctest::Approx(-(2.0 + std::sqrt(3.0)) / std::sqrt(3.0))
                    .epsilon(1e-10));
  CHECK(at0 > 0);
  CHECK(atpi < 0);
}

TEST_CASE("half-Laplacian identity against radial differencing of H+sqrt(H^2+K)") {
  // Fixtures with harmonic-linear h keep the second radial derivative of
  // Phi small, so the one-sided difference at delta = 1e-3 resolves the
  // identity to the stated 1e-4 relative accuracy.
  for (const char* hexpr : {"3 + x1", "3 + 0.5*(x1 + x2)"}) {
    CurvatureModel m = model_from_exprs(g64, "-1", hexpr);
    PhiProfile p = phi_profile(m);
    REQUIRE(p.fully_defined);
    Eigen::VectorXd phi1 = phi_on_circle(m, 1.0);
    Eigen::VectorXd phi9 = phi_on_circle(m, 1.0 - 1e-3);
    Eigen::VectorXd fd = (phi1 - phi9) / 1e-3;
    double scale = p.dnu_phi.array().abs().maxCoeff();
    CHECK((fd - p.dnu_phi).array().abs().maxCoeff() < 1e-4 * scale);
  }
}

TEST_CASE("check_hypotheses on the benchmark models") {
  // Constant data: (a) holds, everything tangentially degenerate.
  HypothesisReport r1 =
      check_hypotheses(testutil::constant_model(g64, -1.0, 2.0));
  CHECK(r1.a);
  CHECK(r1.degenerate_constant);
  CHECK_FALSE(r1.b_minus);
  CHECK_FALSE(r1.b_plus);
  CHECK_FALSE(r1.nonexistence);
  CHECK(r1.thm21_i);
  CHECK(r1.thm21_ii);

  // The obstruction example: neither (b-) nor (b+).
  HypothesisReport r2 = check_hypotheses(model_from_exprs(g64, "-1", "3 + x1"));
  CHECK(r2.a);
  CHECK_FALSE(r2.b_minus);
  CHECK_FALSE(r2.b_plus);
  REQUIRE(r2.phi_critical_points.size() == 2);
  for (const auto& cp : r2.phi_critical_points) {
    double d0 = std::abs(std::remainder(cp.theta, 2 * kPi));
    double dpi = std::abs(std::remainder(cp.theta - kPi, 2 * kPi));
    CHECK(std::min(d0, dpi) < 1e-9);
    if (d0 < dpi) CHECK(cp.dnu_phi > 0);
    else CHECK(cp.dnu_phi < 0);
  }

  // Nonexistence regime: min h = 1.5 < max sqrt|K| = 2.
  HypothesisReport r3 =
      check_hypotheses(testutil::constant_model(g64, -4.0, 1.5));
  CHECK(r3.nonexistence);
  CHECK_FALSE(r3.a);

  // A model satisfying (b+): radially increasing K with angular variation.
  HypothesisReport r4 = check_hypotheses(model_from_exprs(
      g64, "-2 + 0.4*(x1^2 + x2^2) + 0.2*(x1^2 - x2^2)", "2"));
  CHECK(r4.a);
  CHECK(r4.b_plus);
  CHECK_FALSE(r4.b_minus);
  CHECK(r4.thm22_i);
  CHECK(r4.thm22_ii);

  // And its (b-) mirror: radially decreasing K.
  HypothesisReport r5 = check_hypotheses(model_from_exprs(
      g64, "-1.4 - 0.4*(x1^2 + x2^2) - 0.2*(x1^2 - x2^2)", "2"));
  CHECK(r5.a);
  CHECK(r5.b_minus);
  CHECK_FALSE(r5.b_plus);
  CHECK(r5.thm21_iii);
}

TEST_CASE("D = 1 crossings feed thm21_ii") {
  // D = 2 + 1.5 cos(theta) passes through 1 with nonzero slope.
  CurvatureModel m = model_from_exprs(g64, "-1", "2 + 1.5*x1");
  HypothesisReport r = check_hypotheses(m);
  CHECK(r.thm21_i);
  CHECK(r.thm21_ii);
  CHECK(r.dee_crossings.size() == 2);
  for (const auto& c : r.dee_crossings) {
    CHECK(std::cos(c.theta) == doctest::Approx(-2.0 / 3.0).epsilon(1e-8));
    CHECK(std::abs(c.dtau_dee) > 0.1);
  }
}

TEST_CASE("verdicts are invariant under rotation of the data") {
  const int steps = g64.n_theta / 8;
  double alpha = 2 * kPi * steps / g64.n_theta;
  CurvatureModel m = model_from_exprs(
      g64, "-2 + 0.4*(x1^2 + x2^2) + 0.2*(x1^2 - x2^2)", "2 + 0.1*x1");
  CurvatureModel rot;
  rot.K = rotate_field(m.K, steps);
  rot.h = rotate(m.h, alpha);

  HypothesisReport a = check_hypotheses(m);
  HypothesisReport b = check_hypotheses(rot);
  CHECK(a.a == b.a);
  CHECK(a.b_minus == b.b_minus);
  CHECK(a.b_plus == b.b_plus);
  CHECK(a.thm21_i == b.thm21_i);
  CHECK(a.thm21_ii == b.thm21_ii);
  CHECK(a.nonexistence == b.nonexistence);
  REQUIRE(a.phi_critical_points.size() == b.phi_critical_points.size());
  for (const auto& cp : a.phi_critical_points) {
    double target = std::remainder(cp.theta + alpha, 2 * kPi);
    bool found = false;
    for (const auto& cq : b.phi_critical_points)
      if (std::abs(std::remainder(cq.theta - target, 2 * kPi)) < 1e-8)
        found = true;
    CHECK(found);
  }
}

TEST_CASE("masked profile where h^2 + K dips below zero") {
  CurvatureModel m = model_from_exprs(g64, "-0.25", "0.2 + 0.5*x1");
  PhiProfile p = phi_profile(m);
  CHECK_FALSE(p.fully_defined);
  bool some_defined = false, some_masked = false;
  for (int j = 0; j < p.n_theta; ++j) {
    if (p.mask[j]) some_masked = true;
    else some_defined = true;
  }
  CHECK(some_defined);
  CHECK(some_masked);
  HypothesisReport r = check_hypotheses(m);
  CHECK(r.partial);

  CurvatureModel bad = testutil::constant_model(g64, -4.0, 0.5);
  CHECK_THROWS_WITH_AS(phi_profile(bad), "Phi undefined on dD",
                       std::runtime_error);
}

TEST_CASE("model construction guards") {
  CHECK_THROWS_AS(model_from_exprs(g64, "1", "2", true), std::invalid_argument);
  CHECK_NOTHROW(model_from_exprs(g64, "1 - 2*x1^2 - 2*x2^2", "2", false));
}
