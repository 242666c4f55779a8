#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ek/kp_lump.hpp"
#include "ek/minimize2d.hpp"

using namespace ek;

namespace {
FluidModel gp() { return rescale(gross_pitaevskii_model(1.0), 1.0); }

struct Rng {
  std::mt19937_64 g{42};
  double operator()() { return double(g() >> 11) / double(1ull << 53) - 0.5; }
};

TorusField2D random_field(const Spectral2D& sp, double n_torus, double amp, Rng& rng) {
  TorusField2D f;
  f.n = n_torus;
  f.N1 = sp.n1();
  f.N2 = sp.n2();
  f.rho.resize(sp.size());
  f.phi.resize(sp.size());
  // band-limited random fields so spectral identities are clean
  const double L = sp.length();
  std::vector<double> ar(5), br(5), cr(5);
  for (int m = 0; m < 5; ++m) {
    ar[m] = rng();
    br[m] = rng();
    cr[m] = rng();
  }
  for (int i = 0; i < sp.n1(); ++i) {
    for (int j = 0; j < sp.n2(); ++j) {
      const double x = i * sp.h1(), y = j * sp.h2();
      double s1 = 0.0, s2 = 0.0;
      for (int m = 1; m <= 4; ++m) {
        s1 += ar[m] * std::sin(2 * M_PI * m * x / L) * std::cos(2 * M_PI * m * y / L) +
              br[m] * std::cos(2 * M_PI * m * x / L);
        s2 += cr[m] * std::sin(2 * M_PI * m * (x + y) / L) +
              ar[m] * std::cos(2 * M_PI * m * y / L);
      }
      f.rho[std::size_t(i) * sp.n2() + j] = 1.0 + amp * s1;
      f.phi[std::size_t(i) * sp.n2() + j] = amp * s2;
    }
  }
  double mean = 0.0;
  for (double v : f.phi) mean += v;
  mean /= double(sp.size());
  for (auto& v : f.phi) v -= mean;
  return f;
}
}  // namespace

TEST_CASE("lump closed-form derivatives match the symbolic reference") {
  // frozen values computed with an independent computer-algebra evaluation
  struct Row {
    double x1, x2, w, w1, w111, v2, v22;
  };
  const Row rows[] = {
      {0.7, -1.3, -3.75665240530105349e+00, 3.28284039021803853e+00,
       -9.43160035986868373e+00, -1.62788270896378995e+00, -3.81950501954676058e-01},
      {2.5, 0.4, 8.37510912148312414e-01, 4.65173427400968897e-01,
       2.11778631338189172e+00, 5.42078260290169922e-01, 1.26302506449117713e+00},
      {-1.1, 3.3, -1.33467830358317618e+00, -6.20481674005816664e-01,
       6.44115249913547183e-01, -7.64177009780273031e-01, 4.36453495852831053e-01},
      {0.0, 0.0, -8.0, 0.0, 0.0, 0.0, 0.0},
      {5.0, -2.0, 4.21875000000000000e-01, -2.92968750000000000e-02,
       7.55310058593750000e-02, -4.68750000000000000e-01, 1.17187500000000000e-01},
  };
  for (const auto& r : rows) {
    CHECK(kp_lump_w(r.x1, r.x2) == doctest::Approx(r.w).epsilon(1e-14));
    CHECK(kp_lump_w_d1(r.x1, r.x2) == doctest::Approx(r.w1).epsilon(1e-13));
    CHECK(kp_lump_w_d111(r.x1, r.x2) == doctest::Approx(r.w111).epsilon(1e-12));
    CHECK(kp_lump_v_d2(r.x1, r.x2) == doctest::Approx(r.v2).epsilon(1e-14));
    CHECK(kp_lump_v_d22(r.x1, r.x2) == doctest::Approx(r.v22).epsilon(1e-13));
  }
}

TEST_CASE("lump satisfies the normalized equation and its energy identity") {
  LumpGrid grid;  // 512^2 over [-40, 40)^2
  auto s = sample_lump(grid);
  CHECK(lump_residual_l2(s) < 1e-6);
  const double E = lump_energy(s);
  const double n2 = lump_l2sq(s);
  CHECK(E < 0.0);
  CHECK(std::abs(E + n2 / 6.0) < 0.01 * std::abs(E));
  // continuum norm: ||w||^2 = 96 pi (truncation at the 1/r^2 tails ~ 0.5%)
  CHECK(n2 == doctest::Approx(96.0 * M_PI).epsilon(0.01));
  // even symmetry in x2 on the sampled grid
  for (int i = 0; i < s.n1; i += 37) {
    for (int j = 1; j < s.n2 / 2; j += 41) {
      CHECK(s.w[std::size_t(i) * s.n2 + j] ==
            doctest::Approx(s.w[std::size_t(i) * s.n2 + (s.n2 - j)]).epsilon(1e-13));
    }
  }
  LumpGrid tiny;
  tiny.half_extent = 5.0;  // |w| ~ 0.75 at the boundary
  CHECK_THROWS_AS(sample_lump(tiny), Error);
}

TEST_CASE("spectral antiderivative matches the closed form away from the boundary") {
  const int n = 256;
  Spectral2D sp(n, n, 120.0);
  std::vector<double> w(sp.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x1 = i * sp.h1() - 60.0, x2 = j * sp.h2() - 60.0;
      w[std::size_t(i) * n + j] = kp_lump_w(x1, x2);
    }
  auto v = spectral_d1_inverse(sp, w);
  double worst = 0.0;
  for (int i = n / 4; i < 3 * n / 4; ++i)
    for (int j = n / 4; j < 3 * n / 4; ++j) {
      const double x1 = i * sp.h1() - 60.0, x2 = j * sp.h2() - 60.0;
      worst = std::max(worst,
                       std::abs(v[std::size_t(i) * n + j] - kp_lump_v(x1, x2)));
    }
  // algebraic tails wrap around the torus; interior agreement is few-percent
  CHECK(worst < 0.05 * 24.0 / std::sqrt(3.0));
}

TEST_CASE("ansatz hits the target momentum exactly and is a tight initializer") {
  auto m = gp();
  const double p = 0.3;
  Minimizer2D mz(m, CutoffSpec{}, p);
  auto f = mz.ansatz_from_lump();
  CHECK(std::abs(mz.momentum(f) - p) < 1e-10);
  const double E = mz.modified_energy(f, 0.0);
  CHECK(E < p);
  CHECK(E > p - 1e-4);
}

TEST_CASE("ansatz cubic deficit tracks the lump energy constant") {
  auto m = gp();
  // (E(ansatz) - p)/p^3 -> -|E_KP~(A)|/||A||_2^6 with A = w/gamma, K = 1
  const double gamma = 3.0;
  const double nA2 = 96.0 * M_PI / (gamma * gamma);
  const double kp_const = (96.0 * M_PI / 6.0 / (gamma * gamma)) / (nA2 * nA2 * nA2);
  for (double p : {0.4, 0.3}) {
    Minimizer2D mz(m, CutoffSpec{}, p);
    auto f = mz.ansatz_from_lump();
    const double ratio = (mz.modified_energy(f, 0.0) - p) / (p * p * p);
    CHECK(std::abs(ratio + kp_const) < 0.25 * kp_const);
  }
}

TEST_CASE("momentum functional basics") {
  auto m = gp();
  Spectral2D sp(64, 64, 50.0);
  MinimizeOptions o;
  o.N1 = 64;
  o.N2 = 64;
  o.n_torus = 50.0 / (2 * M_PI);
  Minimizer2D mz(m, CutoffSpec{}, 0.0, o);
  Rng rng;
  auto f = random_field(mz.spectral(), mz.torus_n(), 1e-2, rng);
  // constant phi has zero momentum
  auto f0 = f;
  std::fill(f0.phi.begin(), f0.phi.end(), 0.4);
  CHECK(std::abs(mz.momentum(f0)) < 1e-14);
  // reflection x1 -> -x1 flips the sign
  auto fr = f;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      fr.rho[std::size_t(i) * 64 + j] = f.rho[std::size_t((64 - i) % 64) * 64 + j];
      fr.phi[std::size_t(i) * 64 + j] = f.phi[std::size_t((64 - i) % 64) * 64 + j];
    }
  CHECK(mz.momentum(fr) == doctest::Approx(-mz.momentum(f)).epsilon(1e-10));
}

TEST_CASE("modified energy: zero at the constant state, coercive on random fields") {
  auto m = gp();
  MinimizeOptions o;
  o.N1 = 64;
  o.N2 = 64;
  o.n_torus = 40.0 / (2 * M_PI);
  Minimizer2D mz(m, CutoffSpec{}, 0.0, o);
  TorusField2D cst;
  cst.n = mz.torus_n();
  cst.N1 = 64;
  cst.N2 = 64;
  cst.rho.assign(64 * 64, 1.0);
  cst.phi.assign(64 * 64, 0.0);
  double ereg = 0.0;
  CHECK(mz.modified_energy(cst, 1e-2, &ereg) == doctest::Approx(0.0));
  CHECK(ereg == doctest::Approx(0.0));

  const auto& ext = mz.extension();
  const double Kmin = std::min(m.K(0.5), std::min(m.K(1.0), m.K(2.0)));
  const double c0 = std::min({0.25, 0.5 * Kmin, ext.c1()});
  Rng rng;
  const auto& sp = mz.spectral();
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_field(sp, mz.torus_n(), 0.05 + 0.2 * (trial % 5), rng);
    std::vector<double> rx, ry, px, py;
    sp.d1(f.rho, rx);
    sp.d2(f.rho, ry);
    sp.d1(f.phi, px);
    sp.d2(f.phi, py);
    double h1 = 0.0, gp2 = 0.0;
    for (std::size_t i = 0; i < sp.size(); ++i) {
      h1 += std::pow(f.rho[i] - 1.0, 2) + rx[i] * rx[i] + ry[i] * ry[i];
      gp2 += px[i] * px[i] + py[i] * py[i];
    }
    h1 *= sp.cell();
    gp2 *= sp.cell();
    CHECK(mz.modified_energy(f, 0.0) >= c0 * (h1 + gp2) - 1e-12);
  }
}

TEST_CASE("modified energy equals plain energy inside the cutoff window") {
  auto m = gp();
  MinimizeOptions o;
  o.N1 = 64;
  o.N2 = 64;
  o.n_torus = 40.0 / (2 * M_PI);
  Minimizer2D mz(m, CutoffSpec{}, 0.0, o);
  Rng rng;
  auto f = random_field(mz.spectral(), mz.torus_n(), 2e-2, rng);
  double sup = 0.0;
  for (double r : f.rho) sup = std::max(sup, std::abs(r - 1.0));
  REQUIRE(sup < 1.0 / 3.0);
  CHECK(mz.modified_energy(f, 0.0) == mz.plain_energy(f));
}

TEST_CASE("variational gradient passes the directional derivative oracle") {
  auto m = gp();
  MinimizeOptions o;
  o.N1 = 48;
  o.N2 = 48;
  o.n_torus = 30.0 / (2 * M_PI);
  Minimizer2D mz(m, CutoffSpec{}, 0.0, o);
  Rng rng;
  auto f = random_field(mz.spectral(), mz.torus_n(), 0.08, rng);
  const double eps_reg = 1e-3;
  std::vector<double> dE_rho, dE_phi, dP_rho, dP_phi;
  mz.variational_gradient(f, eps_reg, dE_rho, dE_phi, dP_rho, dP_phi);
  const double cell = mz.spectral().cell();
  const double t = 1e-5;
  for (int dir = 0; dir < 20; ++dir) {
    auto h = random_field(mz.spectral(), mz.torus_n(), 1.0, rng);
    auto fp = f, fm = f;
    for (std::size_t i = 0; i < f.rho.size(); ++i) {
      fp.rho[i] += t * (h.rho[i] - 1.0);
      fp.phi[i] += t * h.phi[i];
      fm.rho[i] -= t * (h.rho[i] - 1.0);
      fm.phi[i] -= t * h.phi[i];
    }
    double erp = 0.0, erm = 0.0;
    mz.modified_energy(fp, eps_reg, &erp);
    mz.modified_energy(fm, eps_reg, &erm);
    const double fd = (erp - erm) / (2.0 * t);
    double ip = 0.0;
    for (std::size_t i = 0; i < f.rho.size(); ++i)
      ip += dE_rho[i] * (h.rho[i] - 1.0) + dE_phi[i] * h.phi[i];
    ip *= cell;
    CHECK(fd == doctest::Approx(ip).epsilon(1e-5));

    // momentum is bilinear: its finite difference is exact
    const double pp = mz.momentum(fp), pm = mz.momentum(fm);
    double ipP = 0.0;
    for (std::size_t i = 0; i < f.rho.size(); ++i)
      ipP += dP_rho[i] * (h.rho[i] - 1.0) + dP_phi[i] * h.phi[i];
    ipP *= cell;
    CHECK((pp - pm) / (2.0 * t) == doctest::Approx(ipP).epsilon(1e-9));
  }
  // constant state has zero gradients
  TorusField2D cst = f;
  std::fill(cst.rho.begin(), cst.rho.end(), 1.0);
  std::fill(cst.phi.begin(), cst.phi.end(), 0.0);
  mz.variational_gradient(cst, eps_reg, dE_rho, dE_phi, dP_rho, dP_phi);
  for (std::size_t i = 0; i < cst.rho.size(); i += 117) {
    CHECK(std::abs(dE_rho[i]) < 1e-12);
    CHECK(std::abs(dE_phi[i]) < 1e-12);
  }
}

TEST_CASE("gauge and translation invariance of energy and momentum") {
  auto m = gp();
  MinimizeOptions o;
  o.N1 = 64;
  o.N2 = 32;
  o.n_torus = 40.0 / (2 * M_PI);
  Minimizer2D mz(m, CutoffSpec{}, 0.0, o);
  Rng rng;
  auto f = random_field(mz.spectral(), mz.torus_n(), 0.05, rng);
  const double E0 = mz.modified_energy(f, 0.0);
  const double P0 = mz.momentum(f);
  auto fg = f;
  for (auto& v : fg.phi) v += 3.7;
  CHECK(mz.modified_energy(fg, 0.0) == doctest::Approx(E0).epsilon(1e-13));
  CHECK(mz.momentum(fg) == doctest::Approx(P0).epsilon(1e-13));
  // cyclic shift by (5, 3) cells
  auto fs = f;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 32; ++j) {
      fs.rho[std::size_t(i) * 32 + j] = f.rho[std::size_t((i + 5) % 64) * 32 + (j + 3) % 32];
      fs.phi[std::size_t(i) * 32 + j] = f.phi[std::size_t((i + 5) % 64) * 32 + (j + 3) % 32];
    }
  CHECK(mz.modified_energy(fs, 0.0) == doctest::Approx(E0).epsilon(1e-12));
  CHECK(mz.momentum(fs) == doctest::Approx(P0).epsilon(1e-12));
}

TEST_CASE("p = 0 minimization returns the constant state immediately") {
  auto m = gp();
  MinimizeOptions o;
  o.N1 = 32;
  o.N2 = 32;
  o.n_torus = 20.0 / (2 * M_PI);
  Minimizer2D mz(m, CutoffSpec{}, 0.0, o);
  auto rep = mz.minimize();
  CHECK(rep.converged);
  CHECK(rep.E_tilde == doctest::Approx(0.0));
  CHECK(rep.iterations == 0);
  for (double r : rep.field.rho) CHECK(r == 1.0);
}

TEST_CASE("degenerate Gamma is rejected") {
  auto m = rescale(cubic_vdw_model(-1.5, 0.0), 1.0);
  CHECK_THROWS_AS(Minimizer2D(m, CutoffSpec{}, 0.3), Error);
}

TEST_CASE("short minimize run: monotone descent, feasibility, symmetry") {
  auto m = gp();
  MinimizeOptions o;
  o.tol = 3e-4;        // a few dozen iterations only
  o.max_iter = 200;
  o.eps_schedule = {1e-3, 0.0};
  Minimizer2D mz(m, CutoffSpec{}, 0.4, o);
  auto rep = mz.minimize();
  CHECK(std::abs(rep.p_achieved - 0.4) < 1e-10);
  CHECK(rep.el_residual < 3e-4);
  CHECK(rep.E_tilde < 0.4);  // E_min(p) <= p - alpha p^3 realized numerically
  CHECK(rep.c > 0.0);
  CHECK(rep.c < 1.0);
  // x2-reflection symmetry retained (defect within 10x residual)
  const auto& f = rep.field;
  double asym = 0.0, norm = 0.0;
  for (int i = 0; i < f.N1; ++i)
    for (int j = 1; j < f.N2; ++j) {
      const double a = f.rho[std::size_t(i) * f.N2 + j] - 1.0;
      const double b = f.rho[std::size_t(i) * f.N2 + (f.N2 - j)] - 1.0;
      asym += (a - b) * (a - b);
      norm += a * a;
    }
  CHECK(std::sqrt(asym / norm) < 10.0 * o.tol);
}
