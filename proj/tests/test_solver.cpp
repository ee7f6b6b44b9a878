#include <doctest.h>

#include "curvdisk/diagnostics.hpp"
#include "curvdisk/operators.hpp"
#include "curvdisk/solver.hpp"
#include "oracles.hpp"

using namespace curvdisk;
using testutil::kPi;

namespace {
const GridSpec g64{64, 32};

SolveConfig gauged_cfg(const GridSpec& g) {
  SolveConfig cfg;
  cfg.grid = g;
  cfg.gauge = Gauge::barycenter;
  cfg.damping = Damping::armijo;
  return cfg;
}
}  // namespace

TEST_CASE("Newton converges to the radial bubble under the barycenter gauge") {
  CurvatureModel m = testutil::constant_model(g64, -1.0, 2.0);
  SolveReport rep = newton_solve(m, 0.0, gauged_cfg(g64));
  REQUIRE(rep.converged);
  CHECK(rep.newton_iters <= 15);
  CHECK(rep.final_residual < 1e-10);

  DiskField exact =
      bubble_field(BubbleParams::from_curvatures({0, 0}, 2.0, -1.0), g64);
  CHECK((rep.u.values - exact.values).array().abs().maxCoeff() < 1e-7);
  CHECK(rep.multipliers.cwiseAbs().maxCoeff() < 1e-9);

  // necessary-condition identities hold at the solution
  CHECK(rep.identity_residuals.at("gauss_bonnet") < 1e-7);
  CHECK(rep.identity_residuals.at("kazdan_warner") < 1e-7);
  CHECK(rep.identity_residuals.at("pohozaev_rotation") < 1e-7);
}

TEST_CASE("Newton reproduces the h = 1.05 bubble and its boundary mass") {
  CurvatureModel m = testutil::constant_model(g64, -1.0, 1.05);
  SolveReport rep = newton_solve(m, 0.0, gauged_cfg(g64));
  REQUIRE(rep.converged);
  double hh = 1.05;
  DiskField exact =
      bubble_field(BubbleParams::from_curvatures({0, 0}, hh, -1.0), g64);
  CHECK((rep.u.values - exact.values).array().abs().maxCoeff() < 1e-6);
  CHECK(rep.boundary_mass ==
        doctest::Approx(bubble_boundary_mass(hh)).epsilon(1e-6));
  CHECK(rep.boundary_mass == doctest::Approx(19.625).epsilon(1e-3));
}

TEST_CASE("Newton fails honestly in the nonexistence regime h < sqrt(|K|)") {
  CurvatureModel m = testutil::constant_model(g64, -1.0, 0.5);
  for (SolveInit init :
       {SolveInit{ZeroInit{}}, SolveInit{-2.0}, SolveInit{2.0}}) {
    SolveConfig cfg = gauged_cfg(g64);
    cfg.init = init;
    cfg.max_newton = 40;
    SolveReport rep = newton_solve(m, 0.0, cfg);
    CHECK_FALSE(rep.converged);
    CHECK_FALSE(rep.reason.empty());
  }
}

TEST_CASE("terminal Newton convergence is quadratic") {
  CurvatureModel m = testutil::constant_model(g64, -1.0, 2.0);
  SolveReport rep = newton_solve(m, 0.0, gauged_cfg(g64));
  REQUIRE(rep.converged);
  // pick consecutive residuals inside the quadratic window
  bool seen = false;
  for (size_t i = 0; i + 1 < rep.residual_history.size(); ++i) {
    double rk = rep.residual_history[i], rk1 = rep.residual_history[i + 1];
    if (rk < 1e-2 && rk > 1e-8 && rk1 > 0) {
      CHECK(rk1 / (rk * rk) < 1e3);
      seen = true;
    }
  }
  CHECK(seen);
}

TEST_CASE("converged solutions are grid-stable") {
  CurvatureModel m64 = testutil::constant_model(g64, -1.0, 2.0);
  SolveReport r64 = newton_solve(m64, 0.0, gauged_cfg(g64));
  GridSpec g96{96, 48};
  CurvatureModel m96 = testutil::constant_model(g96, -1.0, 2.0);
  SolveReport r96 = newton_solve(m96, 0.0, gauged_cfg(g96));
  REQUIRE(r64.converged);
  REQUIRE(r96.converged);
  // compare off-node through the spectral interpolants
  double worst = 0;
  for (double r : {0.15, 0.5, 0.85})
    for (double th : {0.3, 2.0, 4.4})
      worst = std::max(worst, std::abs(eval_field(r64.u, r, th) -
                                       eval_field(r96.u, r, th)));
  CHECK(worst < 1e-6);
}

TEST_CASE("Newton handles nonconstant data without a gauge") {
  GridSpec g{96, 48};
  CurvatureModel m = model_from_exprs(g, "-1", "3 + 0.2*x1");
  SolveConfig cfg;
  cfg.grid = g;
  cfg.gauge = Gauge::none;
  cfg.damping = Damping::armijo;
  SolveReport rep = newton_solve(m, 0.0, cfg);
  REQUIRE(rep.converged);
  CHECK(rep.final_residual < 1e-10);
  PerturbedCoefficients c = perturb(m, 0.0);
  CHECK(gauss_bonnet_residual(rep.u, c) < 1e-7);
  CHECK(kazdan_warner_residual(rep.u, c) < 1e-7);
}

TEST_CASE("continuation toward eps = 0 stays bounded and keeps the identities") {
  CurvatureModel m = testutil::constant_model(g64, -1.0, 2.0);
  SolveConfig cfg = gauged_cfg(g64);
  std::vector<double> schedule{0.1, 0.05, 0.01, 0.0};
  ContinuationTrace tr = continue_in_eps(m, 0.1, cfg, schedule);
  REQUIRE(tr.completed);
  REQUIRE(tr.reports.size() == 4);
  double lo = *std::min_element(tr.sup_u_trace.begin(), tr.sup_u_trace.end());
  double hi = *std::max_element(tr.sup_u_trace.begin(), tr.sup_u_trace.end());
  CHECK(hi - lo < 0.5);

  for (const auto& rep : tr.reports) {
    // perturbed mass identity at each eps (exactly the Gauss-Bonnet residual)
    PerturbedCoefficients c = perturb(m, rep.eps);
    CHECK(gauss_bonnet_residual(rep.u, c) < 1e-8);
  }
  // eps = 0 endpoint carries the 2 pi mass identity
  const SolveReport& last = tr.reports.back();
  DiskField Keu{g64, (m.K.values.array() * exp_field(last.u).values.array()).matrix()};
  double gb = quad_disk(Keu) +
              quad_circle_values(
                  (boundary_values(m.h).array() *
                   exp_checked(boundary_trace_values(last.u) / 2.0).array())
                      .matrix());
  CHECK(gb == doctest::Approx(2 * kPi).epsilon(1e-8));

  CHECK_THROWS_AS(continue_in_eps(m, 0.1, cfg, {0.1, 0.2, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("gradient flow descends into the Newton basin") {
  CurvatureModel m = testutil::constant_model(g64, -1.0, 2.0);
  SolveConfig cfg = gauged_cfg(g64);
  FlowReport fr = gradient_flow(m, 0.0, cfg, 0.5, 400.0);
  CHECK(fr.reached_newton_basin);
  REQUIRE(fr.final_report.converged);
  for (size_t i = 1; i < fr.energy_trace.size(); ++i)
    CHECK(fr.energy_trace[i] <= fr.energy_trace[i - 1] + 1e-12);

  SolveReport direct = newton_solve(m, 0.0, cfg);
  CHECK((fr.final_report.u.values - direct.u.values).array().abs().maxCoeff() <
        1e-7);
}

TEST_CASE("one descent step from a critical point is inert") {
  CurvatureModel m = testutil::constant_model(g64, -1.0, 2.0);
  SolveConfig cfg = gauged_cfg(g64);
  SolveReport rep = newton_solve(m, 0.0, cfg);
  REQUIRE(rep.converged);
  cfg.init = rep.u;
  double dt = 0.25;
  FlowReport fr = gradient_flow(m, 0.0, cfg, dt, dt * 1.5);
  // at the solution the flow stops immediately (residual below handoff)
  CHECK(fr.steps == 0);
  CHECK((fr.final_report.u.values - rep.u.values).array().abs().maxCoeff() <
        dt * 1e-9);
}

TEST_CASE("energy trace is nonincreasing over many small steps") {
  CurvatureModel m = testutil::constant_model(g64, -1.0, 2.0);
  SolveConfig cfg = gauged_cfg(g64);
  cfg.init = 1.0;  // start away from the solution
  FlowReport fr = gradient_flow(m, 0.0, cfg, 1e-3, 1.0);
  CHECK(fr.steps >= 1000);
  for (size_t i = 1; i < fr.energy_trace.size(); ++i)
    CHECK(fr.energy_trace[i] <= fr.energy_trace[i - 1] + 1e-12);
}

TEST_CASE("Morse data at the radial bubble: two kernel modes, stable index") {
  CurvatureModel m64 = testutil::constant_model(g64, -1.0, 2.0);
  SolveReport rep = newton_solve(m64, 0.0, gauged_cfg(g64));
  REQUIRE(rep.converged);
  MorseSpectrum ms = morse_index(rep.u, perturb(m64, 0.0), 8);
  CHECK(ms.near_zero == 2);
  int near_1e5 = 0;
  for (double ev : ms.eigenvalues)
    if (std::abs(ev) < 1e-5) ++near_1e5;
  CHECK(near_1e5 == 2);
  CHECK(ms.negative >= 1);

  GridSpec g2{128, 64};
  CurvatureModel m2 = testutil::constant_model(g2, -1.0, 2.0);
  SolveReport rep2 = newton_solve(m2, 0.0, gauged_cfg(g2));
  REQUIRE(rep2.converged);
  MorseSpectrum ms2 = morse_index(rep2.u, perturb(m2, 0.0), 8);
  CHECK(ms2.negative == ms.negative);
  CHECK(ms2.near_zero == 2);
}

TEST_CASE("pure Dirichlet-energy pencil is nonnegative") {
  // Zeroed coefficients leave Q(v,v) = int |grad v|^2 >= 0: no negative
  // directions, one flat direction (constants).
  PerturbedCoefficients c;
  c.eps = 0.0;
  c.K_tilde = 0.0;
  c.h_tilde = 1.0;
  c.K_eps = constant_field(g64, 0.0);
  c.h_eps = boundary_constant(g64.n_theta, 0.0);
  MorseSpectrum ms = morse_index(constant_field(g64, 0.0), c, 6);
  CHECK(ms.negative == 0);
  for (double ev : ms.eigenvalues) CHECK(ev > -1e-9);
  CHECK(ms.near_zero == 1);
}

TEST_CASE("Morse index is invariant under data rotation") {
  GridSpec g{48, 24};
  CurvatureModel m = model_from_exprs(g, "-1", "3 + 0.2*x1");
  SolveConfig cfg;
  cfg.grid = g;
  SolveReport rep = newton_solve(m, 0.0, cfg);
  REQUIRE(rep.converged);
  MorseSpectrum ms = morse_index(rep.u, perturb(m, 0.0), 6);

  CurvatureModel mr = model_from_exprs(g, "-1", "3 + 0.2*x2");
  SolveReport repr = newton_solve(mr, 0.0, cfg);
  REQUIRE(repr.converged);
  MorseSpectrum msr = morse_index(repr.u, perturb(mr, 0.0), 6);
  CHECK(ms.negative == msr.negative);
  CHECK(ms.near_zero == msr.near_zero);
  for (size_t i = 0; i < ms.eigenvalues.size(); ++i)
    CHECK(ms.eigenvalues[i] ==
          doctest::Approx(msr.eigenvalues[i]).epsilon(1e-6));
}

TEST_CASE("solver config guards") {
  CurvatureModel m = testutil::constant_model(g64, -1.0, 2.0);
  SolveConfig cfg = gauged_cfg(g64);
  CHECK_THROWS_WITH_AS(newton_solve(m, -1.5, cfg), "invalid perturbation",
                       std::invalid_argument);
  SolveConfig bad = cfg;
  bad.grid = GridSpec{32, 16};
  CHECK_THROWS_AS(newton_solve(m, 0.0, bad), std::invalid_argument);
}
