#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ek/wave1d.hpp"

using namespace ek;

namespace {
FluidModel gp() { return rescale(gross_pitaevskii_model(1.0), 1.0); }
FluidModel bubble() { return rescale(cubic_vdw_model(3.6, 1.6), 1.0); }

// Bisection oracle for zeros of F, independent of the production scan.
double bisect_F(const FluidModel& m, double c, double lo, double hi) {
  double flo = potential_F(m, c, lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = potential_F(m, c, mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}
}  // namespace

TEST_CASE("potential F values and factorization root for GP") {
  auto m = gp();
  // F(rho_inf) = 0 for any speed
  CHECK(potential_F(m, 0.3, 1.0) == doctest::Approx(0.0));
  CHECK(potential_F(m, 0.9, 1.0) == doctest::Approx(0.0));
  // GP factorization F = (rho-1)^2 (rho - c^2) / (2 rho): root at rho = c^2
  CHECK(potential_F(m, 0.5, 0.25) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(bisect_F(m, 0.5, 0.1, 0.9) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(potential_F(m, 0.9, 0.5) == doctest::Approx(-0.0775));
  CHECK_THROWS_AS(potential_F(m, 0.5, -1.0), Error);
}

TEST_CASE("turning points for GP") {
  auto m = gp();
  auto rep = find_turning_points(m, 0.5);
  REQUIRE(rep.rho_m.has_value());
  CHECK(*rep.rho_m == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rep.slope_m > 0.0);
  CHECK(rep.classification == OrbitKind::HomoclinicDepression);
  CHECK_FALSE(rep.rho_M.has_value());

  auto sonic = find_turning_points(m, 1.0);
  CHECK(sonic.classification == OrbitKind::None);
  auto super = find_turning_points(m, 1.7);
  CHECK(super.classification == OrbitKind::None);
}

TEST_CASE("heteroclinic flag at a tuned double root") {
  // Tune b so the interior dip of F just touches zero; the sup-root is then a
  // near-double root whose slope falls under the tolerance.
  const double a = 6.67, c = 0.1;
  auto dip_min = [&](double b) {
    auto m = rescale(cubic_vdw_model(a, b), 1.0);
    double fmin = 1e300;
    for (int i = 0; i <= 4000; ++i)
      fmin = std::min(fmin, potential_F(m, c, 0.3 + 0.5 * i / 4000.0));
    return fmin;
  };
  double blo = 8.5, bhi = 11.0;
  REQUIRE(dip_min(blo) < -4e-6);
  REQUIRE(dip_min(bhi) > 0.0);
  for (int i = 0; i < 60; ++i) {
    const double bm = 0.5 * (blo + bhi);
    ((dip_min(bm) < -4e-6) ? blo : bhi) = bm;
  }
  auto m = rescale(cubic_vdw_model(a, blo), 1.0);
  auto rep = find_turning_points(m, c, 1e-2);
  CHECK(rep.classification == OrbitKind::Heteroclinic);
  REQUIRE(rep.rho_m.has_value());
  CHECK(*rep.rho_m > 0.3);
  CHECK(std::abs(rep.slope_m) < 1e-2);
}

TEST_CASE("profile hits the turning point and decays at the ends") {
  auto m = gp();
  ProfileOptions opts;
  opts.n_half = 1024;
  auto p = build_profile(m, 0.5, opts);
  CHECK(p.rho[opts.n_half] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::abs(p.rho.front() - 1.0) < opts.tail_tol);
  CHECK(std::abs(p.rho.back() - 1.0) < opts.tail_tol);
  CHECK(std::abs(p.u.front()) < opts.tail_tol);
  // even symmetry is exact by construction; guard regressions
  for (int j = 0; j <= opts.n_half; ++j) {
    CHECK(p.rho[opts.n_half + j] == p.rho[opts.n_half - j]);
    CHECK(p.u[opts.n_half + j] == p.u[opts.n_half - j]);
  }
  // mass equation identity u = c (rho - 1)/rho holds pointwise as imposed
  for (std::size_t j = 0; j < p.rho.size(); j += 97) {
    CHECK(p.u[j] == doctest::Approx(p.c * (p.rho[j] - 1.0) / p.rho[j]).epsilon(1e-12));
  }
  CHECK(p.rho[0] > 0.0);
}

TEST_CASE("ODE residual small and 2nd-order convergent") {
  auto m = gp();
  ProfileOptions o1;
  o1.n_half = 1024;
  auto p1 = build_profile(m, 0.5, o1);
  ProfileOptions o2;
  o2.n_half = 2048;
  auto p2 = build_profile(m, 0.5, o2);
  const double r1 = ode_residual_max(p1, m);
  const double r2 = ode_residual_max(p2, m);
  CHECK(r2 < 1e-6);
  CHECK(r2 < r1 / 4.0);  // at least 2nd order under refinement
}

TEST_CASE("momentum: odd in c, both quadrature routes agree") {
  auto m = gp();
  // rho-route vs x-route at c = 0.5 (frozen oracle: scipy adaptive quadrature)
  const double P_rho = momentum_of_speed(m, 0.5);
  CHECK(P_rho == doctest::Approx(1.438650915834).epsilon(1e-9));
  ProfileOptions opts;
  opts.n_half = 4096;
  auto p = build_profile(m, 0.5, opts);
  const double P_x = momentum_on_profile(p);
  CHECK(std::abs(P_x - P_rho) < 1e-8 * std::abs(P_rho));
  // P(-c) = -P(c): the x-route with u flipped realizes the -c wave
  auto pm = p;
  for (auto& u : pm.u) u = -u;
  CHECK(momentum_on_profile(pm) == doctest::Approx(-P_rho).epsilon(1e-10));
}

TEST_CASE("momentum decays toward the sonic limit") {
  auto m = gp();
  double prev = momentum_of_speed(m, 0.9);
  for (double c : {0.95, 0.99}) {
    const double P = momentum_of_speed(m, c);
    CHECK(P < prev);
    prev = P;
  }
  CHECK(prev < 0.1);
}

TEST_CASE("energy identities on the profile") {
  auto m = gp();
  const double E_rho = energy_of_speed(m, 0.5);
  CHECK(E_rho == doctest::Approx(1.076280022991).epsilon(1e-9));
  CHECK(E_rho > 0.0);
  ProfileOptions opts;
  opts.n_half = 4096;
  auto p = build_profile(m, 0.5, opts);
  CHECK(std::abs(energy_on_profile(p, m) - E_rho) < 1e-8 * E_rho);

  // d=1 Pohozaev: int K rho'^2 + rho u^2 = 2 int G; and cP = int rho u^2
  std::vector<double> d1(p.rho.size()), d2v;
  {
    // centered 4th-order interior differences
    const double h = p.h;
    for (std::size_t j = 2; j + 2 < p.rho.size(); ++j)
      d1[j] = (p.rho[j - 2] - 8 * p.rho[j - 1] + 8 * p.rho[j + 1] - p.rho[j + 2]) / (12 * h);
  }
  double iK = 0, iU = 0, iG = 0;
  for (std::size_t j = 2; j + 2 < p.rho.size(); ++j) {
    iK += m.K(p.rho[j]) * d1[j] * d1[j] * p.h;
    iU += p.rho[j] * p.u[j] * p.u[j] * p.h;
    iG += m.G(p.rho[j]) * p.h;
  }
  CHECK(std::abs(iK + iU - 2.0 * iG) < 1e-6 * std::abs(2.0 * iG));
  const double P = momentum_on_profile(p);
  CHECK(std::abs(p.c * P - iU) < 1e-6 * std::abs(iU));
}

TEST_CASE("x-route quadrature converges at 2nd order or better") {
  auto m = gp();
  double P[3];
  int idx = 0;
  for (int n : {512, 1024, 2048}) {
    ProfileOptions opts;
    opts.n_half = n;
    P[idx++] = momentum_on_profile(build_profile(m, 0.5, opts));
  }
  const double d1 = std::abs(P[1] - P[0]);
  const double d2 = std::abs(P[2] - P[1]);
  CHECK(d2 < d1 / 3.5);
}

TEST_CASE("capillarity scaling symmetry") {
  // K -> 4K stretches x by 2 and doubles P and E
  auto m1 = gp();
  auto m4 = rescale(gross_pitaevskii_model(4.0), 1.0);
  const double P1 = momentum_of_speed(m1, 0.5);
  const double P4 = momentum_of_speed(m4, 0.5);
  CHECK(P4 == doctest::Approx(2.0 * P1).epsilon(1e-8));
  const double E1 = energy_of_speed(m1, 0.5);
  const double E4 = energy_of_speed(m4, 0.5);
  CHECK(E4 == doctest::Approx(2.0 * E1).epsilon(1e-8));
  ProfileOptions opts;
  opts.n_half = 512;
  auto p1 = build_profile(m1, 0.5, opts);
  auto p4 = build_profile(m4, 0.5, opts);
  CHECK(p4.rho[100] == doctest::Approx(p1.rho[100]).epsilon(1e-8));
}

TEST_CASE("speed curve identities and verdict") {
  auto m = gp();
  std::vector<double> cs;
  for (int i = 0; i < 11; ++i) cs.push_back(0.3 + 0.05 * i);
  auto curve = speed_curve(m, cs);
  REQUIRE(curve.rows.size() == 11);
  for (const auto& row : curve.rows) {
    REQUIRE(row.flags.empty());
    CHECK(row.m == row.E - row.c * row.P);  // exact as computed
    CHECK(row.P > 0.0);
    // E'(c) - c P'(c) = 0
    CHECK(std::abs(row.dEdc - row.c * row.dPdc) < 1e-4 * std::abs(row.dEdc));
  }
  // m''(c) = -P'(c) at an interior node
  const double m2 = moment_second_derivative(m, 0.5);
  const double dP = curve.rows[4].dPdc;  // c = 0.5
  CHECK(std::abs(m2 + dP) < 1e-4 * std::abs(dP));

  // measured signs: GP K=1 is unstable at c=0.3, stable at c=0.5 and up
  CHECK(stability_verdict(curve, 0.3).verdict == Verdict::Unstable);
  CHECK(stability_verdict(curve, 0.5).verdict == Verdict::Stable);
  CHECK(stability_verdict(curve, 0.7).verdict == Verdict::Stable);
  CHECK_THROWS_AS(stability_verdict(curve, 0.95), Error);

  // verdict invariant under doubled c-resolution
  std::vector<double> cs2;
  for (int i = 0; i < 21; ++i) cs2.push_back(0.3 + 0.025 * i);
  auto curve2 = speed_curve(m, cs2);
  CHECK(stability_verdict(curve2, 0.5).verdict == Verdict::Stable);
  CHECK(stability_verdict(curve2, 0.3).verdict == Verdict::Unstable);
}

TEST_CASE("bubble family has a positive dPdc window") {
  auto m = bubble();
  auto curve = speed_curve(m, {0.05, 0.1, 0.15, 0.2});
  for (const auto& row : curve.rows) {
    REQUIRE(row.flags.empty());
    CHECK(row.dPdc > 0.0);
  }
  CHECK(curve.rows[1].P == doctest::Approx(0.1166345518).epsilon(1e-7));
  CHECK(stability_verdict(curve, 0.1).verdict == Verdict::Unstable);
}
