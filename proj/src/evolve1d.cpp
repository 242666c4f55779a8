#include "ek/evolve1d.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace ek {

namespace {

double two_pi() { return 2.0 * 3.14159265358979323846; }

// deterministic unit gaussians from splitmix-style bit mixing
struct Gauss {
  unsigned long long s;
  explicit Gauss(unsigned long long seed) : s(seed) {}
  double uniform() {
    s += 0x9E3779B97f4A7C15ull;
    unsigned long long z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z = z ^ (z >> 31);
    return (double(z >> 11) + 0.5) / 9007199254740992.0;
  }
  double operator()() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi() * u2);
  }
};

}  // namespace

Evolver1D::Evolver1D(const FluidModel& m, int n, double length)
    : model_(m), sp_(n, length) {
  if (n < 8 || (n & (n - 1)) != 0)
    throw Error(Err::ValidationError, "node count must be a power of two");
}

EvolutionState Evolver1D::make_state(std::vector<double> rho, std::vector<double> u) const {
  if (int(rho.size()) != sp_.n() || int(u.size()) != sp_.n())
    throw Error(Err::ValidationError, "field size mismatch");
  EvolutionState s;
  s.length = sp_.length();
  s.n = sp_.n();
  s.rho = std::move(rho);
  s.u = std::move(u);
  const auto c = conserved_quantities(s);
  s.E0 = c.E;
  s.P0 = c.P;
  s.mass0 = c.mass;
  return s;
}

void Evolver1D::rhs(const std::vector<double>& rho, const std::vector<double>& u,
                    std::vector<double>& drho, std::vector<double>& du) const {
  const int n = sp_.n();
  for (int i = 0; i < n; ++i)
    if (!(rho[i] > rho_floor_))
      throw Error(Err::VacuumApproached, "density reached the vacuum floor");
  std::vector<double> rho_x, rho_xx, flux1(n), flux2(n);
  sp_.deriv(rho, rho_x, 1);
  sp_.deriv(rho, rho_xx, 2);
  for (int i = 0; i < n; ++i) flux1[i] = rho[i] * u[i];
  for (int i = 0; i < n; ++i) {
    flux2[i] = 0.5 * u[i] * u[i] + model_.g(rho[i]) - model_.K(rho[i]) * rho_xx[i] -
               0.5 * model_.K1(rho[i]) * rho_x[i] * rho_x[i];
  }
  sp_.dealias(flux1);
  sp_.dealias(flux2);
  sp_.deriv(flux1, drho, 1);
  sp_.deriv(flux2, du, 1);
  for (int i = 0; i < n; ++i) {
    drho[i] = -drho[i];
    du[i] = -du[i];
  }
}

void Evolver1D::step(EvolutionState& s, double dt) const {
  if (dt > cfl_dt_bound(s) * (1.0 + 1e-12))
    throw Error(Err::CflViolation, "dt exceeds the h^2 stiffness bound");
  const int n = s.n;
  std::vector<double> k1r, k1u, k2r, k2u, k3r, k3u, k4r, k4u;
  std::vector<double> tr(n), tu(n);
  rhs(s.rho, s.u, k1r, k1u);
  for (int i = 0; i < n; ++i) {
    tr[i] = s.rho[i] + 0.5 * dt * k1r[i];
    tu[i] = s.u[i] + 0.5 * dt * k1u[i];
  }
  rhs(tr, tu, k2r, k2u);
  for (int i = 0; i < n; ++i) {
    tr[i] = s.rho[i] + 0.5 * dt * k2r[i];
    tu[i] = s.u[i] + 0.5 * dt * k2u[i];
  }
  rhs(tr, tu, k3r, k3u);
  for (int i = 0; i < n; ++i) {
    tr[i] = s.rho[i] + dt * k3r[i];
    tu[i] = s.u[i] + dt * k3u[i];
  }
  rhs(tr, tu, k4r, k4u);
  for (int i = 0; i < n; ++i) {
    s.rho[i] += dt / 6.0 * (k1r[i] + 2.0 * k2r[i] + 2.0 * k3r[i] + k4r[i]);
    s.u[i] += dt / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
  }
  s.t += dt;
  for (int i = 0; i < n; ++i)
    if (!(s.rho[i] > rho_floor_))
      throw Error(Err::VacuumApproached, "density reached the vacuum floor");
}

double Evolver1D::cfl_dt_bound(const EvolutionState& s) const {
  double kmax = 0.0;
  for (double r : s.rho) kmax = std::max(kmax, model_.K(std::max(r, rho_floor_)));
  const double h = s.length / s.n;
  const double pi2 = 3.14159265358979323846 * 3.14159265358979323846;
  return 0.5 * h * h / (pi2 * kmax);
}

double Evolver1D::linear_dt_bound() const {
  // omega(k)^2 = rho_inf k^2 (g'(rho_inf) + K(rho_inf) k^2) at the 2/3 cut
  const double kc = two_pi() / sp_.length() * (sp_.n() / 3);
  const double rinf = model_.rho_inf;
  const double om = std::sqrt(rinf * kc * kc * (model_.g1(rinf) + model_.K(rinf) * kc * kc));
  return 2.8 / om;
}

Conserved Evolver1D::conserved_quantities(const EvolutionState& s) const {
  std::vector<double> rho_x;
  sp_.deriv(s.rho, rho_x, 1);
  Conserved out;
  const double dx = s.length / s.n;
  const double rinf = model_.rho_inf;
  for (int i = 0; i < s.n; ++i) {
    out.E += 0.5 * (s.rho[i] * s.u[i] * s.u[i] + model_.K(s.rho[i]) * rho_x[i] * rho_x[i]) +
             model_.G(s.rho[i]);
    out.P += (s.rho[i] - rinf) * s.u[i];
    out.mass += s.rho[i] - rinf;
  }
  out.E *= dx;
  out.P *= dx;
  out.mass *= dx;
  return out;
}

void Evolver1D::project_dealias(EvolutionState& s) const {
  sp_.dealias(s.rho);
  sp_.dealias(s.u);
}

OrbitalDistance orbital_distance(const Spectral1D& sp, const std::vector<double>& rho,
                                 const std::vector<double>& u,
                                 const std::vector<double>& rho_ref,
                                 const std::vector<double>& u_ref, double rho_inf) {
  const int n = sp.n();
  const int nk = sp.nk();
  std::vector<std::complex<double>> R, U, Rr, Ur;
  std::vector<double> dr(n), du(n);
  for (int i = 0; i < n; ++i) {
    dr[i] = rho[i] - rho_inf;
    du[i] = u[i];
  }
  sp.forward(dr, R);
  sp.forward(du, U);
  for (int i = 0; i < n; ++i) {
    dr[i] = rho_ref[i] - rho_inf;
    du[i] = u_ref[i];
  }
  sp.forward(dr, Rr);
  sp.forward(du, Ur);

  // dist^2(y) = A - 2 C(y); C from the weighted cross spectrum
  double A = 0.0;
  std::vector<std::complex<double>> cross(nk, 0.0);
  auto wk = [&](int j) { return 1.0 + sp.k(j) * sp.k(j); };
  for (int j = 0; j < nk; ++j) {
    const double mult = (j == 0 || (j == nk - 1 && n % 2 == 0)) ? 1.0 : 2.0;
    A += mult * (wk(j) * (std::norm(R[j]) + std::norm(Rr[j])) + std::norm(U[j]) +
                 std::norm(Ur[j]));
    cross[j] = (wk(j) * R[j] * std::conj(Rr[j]) + U[j] * std::conj(Ur[j]));
  }
  A *= sp.length();
  std::vector<double> corr;
  sp.inverse(cross, corr);  // corr[m] = sum_k cross_k e^{i k y_m}, real by symmetry
  int best = 0;
  for (int m = 1; m < n; ++m)
    if (corr[m] > corr[best]) best = m;
  const double dxg = sp.length() / n;
  // parabolic refinement around the best integer shift
  const double cm = corr[(best + n - 1) % n], c0 = corr[best], cp = corr[(best + 1) % n];
  double frac = 0.0;
  const double denom = cm - 2.0 * c0 + cp;
  if (denom < 0.0) frac = 0.5 * (cm - cp) / denom;
  frac = std::clamp(frac, -0.5, 0.5);
  double y = (best + frac) * dxg;
  // Newton polish of the correlation maximum (the parabola is only O(h^2))
  for (int it = 0; it < 8; ++it) {
    double c1 = 0.0, c2 = 0.0;
    for (int j = 1; j < nk; ++j) {
      const double mult = (j == nk - 1 && n % 2 == 0) ? 1.0 : 2.0;
      const std::complex<double> ph(std::cos(sp.k(j) * y), std::sin(sp.k(j) * y));
      const std::complex<double> cp = cross[j] * ph;
      c1 += mult * (-sp.k(j)) * cp.imag();
      c2 += mult * (-sp.k(j) * sp.k(j)) * cp.real();
    }
    if (c2 >= 0.0) break;
    const double step = c1 / c2;
    y -= step;
    if (std::abs(step) < 1e-15 * sp.length()) break;
  }
  // cancellation-free distance at the refined shift: difference the spectra
  // under the exact phase shift, then accumulate squares
  (void)A;
  double d2sum = 0.0;
  for (int j = 0; j < nk; ++j) {
    const double mult = (j == 0 || (j == nk - 1 && n % 2 == 0)) ? 1.0 : 2.0;
    const std::complex<double> ph(std::cos(sp.k(j) * y), -std::sin(sp.k(j) * y));
    d2sum += mult * (wk(j) * std::norm(R[j] - ph * Rr[j]) + std::norm(U[j] - ph * Ur[j]));
  }
  OrbitalDistance out;
  out.dist = std::sqrt(d2sum * sp.length());
  out.y_opt = y < 0 ? y + sp.length() : y;
  return out;
}

EvolutionState embed_profile(const Evolver1D& ev, const WaveProfile1D& p) {
  const int n = ev.spectral().n();
  if (n != 4 * p.n_half)
    throw Error(Err::GridTooSmall, "periodic grid must have n = 4 * profile n_half");
  std::vector<double> rho(n, p.rho_inf), u(n, 0.0);
  // wave centered at length/2 = 2L; profile node j maps to i = n/4 + j
  for (int j = 0; j < int(p.rho.size()); ++j) {
    const int i = n / 4 + j;
    rho[i % n] = p.rho[j];
    u[i % n] = p.u[j];
  }
  return ev.make_state(std::move(rho), std::move(u));
}

StabilityReport stability_experiment(const FluidModel& m, double c,
                                     const ExperimentOptions& opts) {
  ProfileOptions popts;
  popts.n_half = opts.n_half;
  popts.tail_tol = opts.tail_tol;
  const auto prof = build_profile(m, c, popts);
  const double kappa = std::sqrt((sound_speed(m, m.rho_inf) * sound_speed(m, m.rho_inf) -
                                  c * c) /
                                 (m.rho_inf * m.K(m.rho_inf)));
  if (prof.h * kappa > 1.0 / 16.0)
    throw Error(Err::GridTooCoarse, "fewer than 16 nodes per tail e-folding length");

  Evolver1D ev(m, 4 * opts.n_half, 4.0 * prof.L);
  auto base = embed_profile(ev, prof);
  ev.project_dealias(base);
  const std::vector<double> rho_ref = base.rho, u_ref = base.u;

  // perturbation with unit H1 x L2 norm
  const int n = base.n;
  std::vector<double> pr(n, 0.0), pu(n, 0.0);
  const double Lam = base.length;
  if (opts.shape == PerturbationShape::Sine) {
    for (int i = 0; i < n; ++i) {
      const double x = i * Lam / n;
      pr[i] = std::sin(two_pi() * x / Lam);
      pu[i] = std::cos(two_pi() * x / Lam);
    }
  } else if (opts.shape == PerturbationShape::Gaussian) {
    for (int i = 0; i < n; ++i) {
      const double x = i * Lam / n - 0.5 * Lam;
      pr[i] = std::exp(-x * x);
      pu[i] = -std::exp(-x * x);
    }
  } else {
    Gauss rng(opts.seed);
    // low-wavenumber random field localized around the wave
    std::vector<double> ar(17), br(17), au(17), bu(17);
    for (int k = 1; k <= 16; ++k) {
      ar[k] = rng() / k;
      br[k] = rng() / k;
      au[k] = rng() / k;
      bu[k] = rng() / k;
    }
    for (int i = 0; i < n; ++i) {
      const double x = i * Lam / n;
      const double w = std::exp(-std::pow((x - 0.5 * Lam) / (0.25 * Lam), 2.0));
      double sr = 0.0, su = 0.0;
      for (int k = 1; k <= 16; ++k) {
        sr += ar[k] * std::cos(two_pi() * k * x / Lam) + br[k] * std::sin(two_pi() * k * x / Lam);
        su += au[k] * std::cos(two_pi() * k * x / Lam) + bu[k] * std::sin(two_pi() * k * x / Lam);
      }
      pr[i] = w * sr;
      pu[i] = w * su;
    }
  }
  // normalize in H1 x L2
  {
    std::vector<double> prx;
    ev.spectral().deriv(pr, prx, 1);
    double nr = 0.0;
    const double dx = Lam / n;
    for (int i = 0; i < n; ++i) nr += (pr[i] * pr[i] + prx[i] * prx[i] + pu[i] * pu[i]) * dx;
    nr = std::sqrt(nr);
    for (int i = 0; i < n; ++i) {
      pr[i] /= nr;
      pu[i] /= nr;
    }
  }

  std::vector<double> rho0 = rho_ref, u0 = u_ref;
  for (int i = 0; i < n; ++i) {
    rho0[i] += opts.delta * pr[i];
    u0[i] += opts.delta * pu[i];
  }
  auto state = ev.make_state(std::move(rho0), std::move(u0));
  ev.project_dealias(state);

  StabilityReport rep;
  rep.delta = opts.delta;
  rep.escape_factor = opts.escape_factor;
  rep.close_factor = opts.close_factor;
  // floors keep the delta = 0 control run meaningful
  const double close_thresh = std::max(opts.close_factor * opts.delta, 1e-8);
  const double escape_thresh = std::max(opts.escape_factor * opts.delta, 1e-6);

  const double dt_target = 0.9 * std::min(ev.cfl_dt_bound(state), ev.linear_dt_bound());
  const long long steps = std::max(1ll, (long long)std::ceil(opts.horizon / dt_target));
  const double dt = opts.horizon / double(steps);
  const long long stride = std::max(1ll, steps / std::max(1, opts.samples));

  bool always_close = true;
  auto sample = [&](double t) {
    const auto od =
        orbital_distance(ev.spectral(), state.rho, state.u, rho_ref, u_ref, m.rho_inf);
    rep.times.push_back(t);
    rep.orbital_dist.push_back(od.dist);
    rep.y_opt.push_back(od.y_opt);
    const auto cons = ev.conserved_quantities(state);
    rep.dE_max = std::max(rep.dE_max, std::abs(cons.E - state.E0));
    rep.dP_max = std::max(rep.dP_max, std::abs(cons.P - state.P0));
    rep.dmass_max = std::max(rep.dmass_max, std::abs(cons.mass - state.mass0));
    if (od.dist >= close_thresh) always_close = false;
    return od.dist;
  };

  sample(0.0);
  try {
    for (long long s = 1; s <= steps; ++s) {
      ev.step(state, dt);
      if (s % stride == 0 || s == steps) {
        const double d = sample(state.t);
        if (d > escape_thresh) {
          rep.outcome = RunOutcome::Escaped;
          rep.t_event = state.t;
          return rep;
        }
      }
    }
  } catch (const Error& e) {
    if (e.code() == Err::VacuumApproached) {
      rep.outcome = RunOutcome::SolverAbort;
      rep.t_event = state.t;
      return rep;
    }
    throw;
  }
  rep.outcome = always_close ? RunOutcome::RemainedClose : RunOutcome::Indeterminate;
  rep.t_event = opts.horizon;
  return rep;
}

}  // namespace ek
