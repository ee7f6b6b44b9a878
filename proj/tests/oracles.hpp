#pragma once
// Shared test fixtures: closed-form oracles and reproducible random fields.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "curvdisk/curvature.hpp"
#include "curvdisk/field.hpp"

namespace testutil {

constexpr double kPi = std::numbers::pi;

inline curvdisk::GridSpec spec(int nt, int nr,
                               curvdisk::RadialMap m =
                                   curvdisk::RadialMap::gauss_radau) {
  return curvdisk::GridSpec{nt, nr, m};
}

// Random bivariate polynomial of the given degree; exactly representable on
// any grid, so operator identities hold to quadrature accuracy.
inline curvdisk::DiskField random_poly(const curvdisk::GridSpec& g,
                                       std::mt19937_64& rng, int degree = 5) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<std::array<double, 3>> terms;
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; i + j <= degree; ++j)
      terms.push_back({unif(rng) / (1.0 + i + j), double(i), double(j)});
  return curvdisk::field_from_xy(g, [terms](double a, double b) {
    double s = 0;
    for (const auto& t : terms)
      s += t[0] * std::pow(a, t[1]) * std::pow(b, t[2]);
    return s;
  });
}

// Adaptive Simpson quadrature, used as an independent 1-D oracle.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, double tol = 1e-11, int depth = 24) {
  std::function<double(double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi,
          int d) -> double {
    double mid = 0.5 * (lo + hi);
    double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
    double flm = f(lmid), frm = f(rmid);
    double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, flo, flm, fmid, d - 1) +
           rec(mid, hi, fmid, frm, fhi, d - 1);
  };
  double mid = 0.5 * (a + b);
  return rec(a, b, f(a), f(mid), f(b), depth);
}

// int_0^{2pi} cos(theta) log(A - B cos(theta)) dtheta = -2 pi (A - sqrt(A^2 -
// B^2)) / B for A > |B| > 0.
inline double cos_log_integral(double A, double B) {
  return -2.0 * kPi * (A - std::sqrt(A * A - B * B)) / B;
}

inline curvdisk::CurvatureModel constant_model(const curvdisk::GridSpec& g,
                                               double K, double h) {
  return curvdisk::model_from_exprs(g, std::to_string(K), std::to_string(h),
                                    K < 0);
}

}  // namespace testutil
