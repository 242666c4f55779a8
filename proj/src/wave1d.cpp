#include "ek/wave1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace ek {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 8> kGLx = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGLw = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

template <class F>
double gauss_panel(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) {
    s += kGLw[i] * (f(mid + half * kGLx[i]) + f(mid - half * kGLx[i]));
  }
  return s * half;
}

template <class F>
double gauss_composite(const F& f, double a, double b, int panels) {
  double s = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double pa = a + (b - a) * double(i) / panels;
    const double pb = a + (b - a) * double(i + 1) / panels;
    s += gauss_panel(f, pa, pb);
  }
  return s;
}

// F and its rho-derivatives with exact law derivatives.
struct Fpack {
  const FluidModel& m;
  double c;
  double rinf;

  double F(double rho) const {
    const double v = rho - rinf;
    return -0.5 * c * c * v * v / rho + m.G(rho);
  }
  double F1(double rho) const {
    const double q1 = 1.0 - rinf * rinf / (rho * rho);
    return -0.5 * c * c * q1 + m.g(rho);
  }
  double F2(double rho) const {
    const double q2 = 2.0 * rinf * rinf / (rho * rho * rho);
    return -0.5 * c * c * q2 + m.g1(rho);
  }
  double F3(double rho) const {
    const double q3 = -6.0 * rinf * rinf / (rho * rho * rho * rho);
    return -0.5 * c * c * q3 + m.g2(rho);
  }
  // Phi(v) = F(rinf + v)/v^2, cancellation-free near v = 0.
  double Phi(double v) const {
    const double rho = rinf + v;
    double G2;
    if (std::abs(v) < 1e-3 * rinf) {
      G2 = 0.5 * m.g1(rinf) + m.g2(rinf) * v / 6.0 + m.g3(rinf) * v * v / 24.0;
    } else {
      G2 = m.G(rho) / (v * v);
    }
    return -0.5 * c * c / rho + G2;
  }
};

struct Orbit {
  double rho_turn = 0.0;
  double sgn = 1.0;    // +1 depression (rho rises toward rho_inf), -1 elevation
  double s_star = 0.0; // sqrt(|rho_inf - rho_turn|)
  double slope = 0.0;  // F'(rho_turn)
};

Orbit select_orbit(const FluidModel& m, const TurningPointReport& rep, WaveKind kind) {
  Orbit orb;
  const bool have_dep = rep.rho_m.has_value() && rep.slope_m > 0.0;
  const bool have_elev = rep.rho_M.has_value() && rep.slope_M < 0.0;
  if (kind == WaveKind::Elevation) {
    if (!have_elev) throw Error(Err::NoHomoclinicOrbit, "no elevation orbit at this speed");
    orb.rho_turn = *rep.rho_M;
    orb.sgn = -1.0;
    orb.slope = rep.slope_M;
  } else if (kind == WaveKind::Depression || have_dep) {
    if (!have_dep) throw Error(Err::NoHomoclinicOrbit, "no depression orbit at this speed");
    orb.rho_turn = *rep.rho_m;
    orb.sgn = 1.0;
    orb.slope = rep.slope_m;
  } else if (have_elev) {
    orb.rho_turn = *rep.rho_M;
    orb.sgn = -1.0;
    orb.slope = rep.slope_M;
  } else {
    throw Error(Err::NoHomoclinicOrbit, "no homoclinic orbit at this speed");
  }
  orb.s_star = std::sqrt(std::abs(m.rho_inf - orb.rho_turn));
  return orb;
}

// F/s^2 along rho = rho_turn + sgn s^2; Taylor about the turning point where
// the direct form cancels.
double phi_t(const Fpack& fp, const Orbit& orb, double s) {
  const double s2 = s * s;
  const double delta_sw = 1e-4 * std::max(orb.s_star * orb.s_star, 1e-6);
  if (s2 < delta_sw) {
    return orb.sgn * fp.F1(orb.rho_turn) + 0.5 * fp.F2(orb.rho_turn) * s2 +
           orb.sgn * fp.F3(orb.rho_turn) * s2 * s2 / 6.0;
  }
  const double v = orb.sgn * (s2 - orb.s_star * orb.s_star);
  return v * v * fp.Phi(v) / s2;
}

template <class Fn>
double orbit_integral(const FluidModel& m, double c, const Orbit& orb, int panels,
                      const Fn& f) {
  const Fpack fp{m, c, m.rho_inf};
  const double smid = orb.s_star / std::sqrt(2.0);
  auto region_a = [&](double s) {
    const double rho = orb.rho_turn + orb.sgn * s * s;
    const double pt = phi_t(fp, orb, s);
    if (!(pt > 0.0))
      throw Error(Err::QuadratureFailure, "effective potential not positive on orbit");
    return 2.0 * f(rho) / std::sqrt(2.0 * pt);
  };
  const double ia = gauss_composite(region_a, 0.0, smid, panels);
  const double wmid = 0.5 * orb.s_star * orb.s_star;
  const double tau_max = std::log(wmid / 1e-14);
  auto region_b = [&](double tau) {
    const double w = wmid * std::exp(-tau);
    const double v = -orb.sgn * w;
    const double ph = fp.Phi(v);
    if (!(ph > 0.0))
      throw Error(Err::QuadratureFailure, "effective potential not positive near rho_inf");
    return f(m.rho_inf + v) / std::sqrt(2.0 * ph);
  };
  const double ib = gauss_composite(region_b, 0.0, tau_max, panels);
  return 2.0 * (ia + ib);
}

Orbit orbit_for(const FluidModel& m, double c, WaveKind kind) {
  const auto rep = find_turning_points(m, c);
  if (rep.classification == OrbitKind::None || rep.classification == OrbitKind::Heteroclinic)
    throw Error(Err::NoHomoclinicOrbit, "no homoclinic orbit at this speed");
  return select_orbit(m, rep, kind);
}

// 4th order first and second derivatives on a uniform grid; one-sided stencils
// at the two nodes nearest each boundary.
void fd_derivatives(const std::vector<double>& f, double h, std::vector<double>& d1,
                    std::vector<double>& d2) {
  const std::size_t n = f.size();
  d1.assign(n, 0.0);
  d2.assign(n, 0.0);
  for (std::size_t j = 2; j + 2 < n; ++j) {
    d1[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h);
    d2[j] = (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]) /
            (12.0 * h * h);
  }
  auto one_sided = [&](std::size_t j, int dir) {
    const double s = double(dir);
    d1[j] = s *
            (-25.0 * f[j] + 48.0 * f[j + dir] - 36.0 * f[j + 2 * dir] +
             16.0 * f[j + 3 * dir] - 3.0 * f[j + 4 * dir]) /
            (12.0 * h);
    d2[j] = (45.0 * f[j] - 154.0 * f[j + dir] + 214.0 * f[j + 2 * dir] -
             156.0 * f[j + 3 * dir] + 61.0 * f[j + 4 * dir] - 10.0 * f[j + 5 * dir]) /
            (12.0 * h * h);
  };
  if (n >= 6) {
    one_sided(0, +1);
    one_sided(1, +1);
    one_sided(n - 1, -1);
    one_sided(n - 2, -1);
  }
}

}  // namespace

double potential_F(const FluidModel& m, double c, double rho) {
  if (!(rho > 0.0)) throw Error(Err::NonPositiveDensity, "rho must be positive");
  return Fpack{m, c, m.rho_inf}.F(rho);
}

TurningPointReport find_turning_points(const FluidModel& m, double c, double slope_tol) {
  if (!(c > 0.0)) throw Error(Err::ValidationError, "find_turning_points requires c > 0");
  TurningPointReport rep;
  rep.sound_speed = sound_speed(m, m.rho_inf);
  if (c >= rep.sound_speed) {
    rep.classification = OrbitKind::None;
    return rep;
  }
  const Fpack fp{m, c, m.rho_inf};
  auto polish = [&](double lo, double hi) {
    const double flo = fp.F(lo);
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      if ((fp.F(mid) < 0.0) == (flo < 0.0))
        lo = mid;
      else
        hi = mid;
    }
    double r = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
      const double f1 = fp.F1(r);
      if (f1 == 0.0) break;
      const double rn = r - fp.F(r) / f1;
      if (rn > 0.0) r = rn;
    }
    return r;
  };

  // descending geometric scan for the sup of zeros below rho_inf
  {
    const int n = 1000;
    const double lo = m.rho_inf / 100.0;
    double prev_rho = m.rho_inf * std::pow(lo / m.rho_inf, 1.0 / n);
    double prev_f = fp.F(prev_rho);
    bool found = false;
    for (int i = 2; i <= n; ++i) {
      const double rho = m.rho_inf * std::pow(lo / m.rho_inf, double(i) / n);
      const double fv = fp.F(rho);
      if ((fv < 0.0) != (prev_f < 0.0)) {
        const double r = polish(rho, prev_rho);
        rep.rho_m = r;
        rep.slope_m = fp.F1(r);
        found = true;
        break;
      }
      prev_rho = rho;
      prev_f = fv;
    }
    if (!found)
      throw Error(Err::BracketScanFailed, "no sign change of F in (rho_inf/100, rho_inf)");
  }

  // ascending scan for the inf of zeros above rho_inf (may not exist)
  {
    const int n = 1000;
    const double hi = m.rho_inf * 100.0;
    double prev_rho = m.rho_inf * std::pow(hi / m.rho_inf, 1.0 / n);
    double prev_f = fp.F(prev_rho);
    for (int i = 2; i <= n; ++i) {
      const double rho = m.rho_inf * std::pow(hi / m.rho_inf, double(i) / n);
      const double fv = fp.F(rho);
      if ((fv < 0.0) != (prev_f < 0.0)) {
        const double r = polish(prev_rho, rho);
        rep.rho_M = r;
        rep.slope_M = fp.F1(r);
        break;
      }
      prev_rho = rho;
      prev_f = fv;
    }
  }

  const bool dep_ok = rep.rho_m && rep.slope_m > slope_tol;
  const bool elev_ok = rep.rho_M && rep.slope_M < -slope_tol;
  const bool dep_flat = rep.rho_m && std::abs(rep.slope_m) <= slope_tol;
  const bool elev_flat = rep.rho_M && std::abs(rep.slope_M) <= slope_tol;
  if (dep_flat || elev_flat)
    rep.classification = OrbitKind::Heteroclinic;
  else if (dep_ok)
    rep.classification = OrbitKind::HomoclinicDepression;
  else if (elev_ok)
    rep.classification = OrbitKind::HomoclinicElevation;
  else
    rep.classification = OrbitKind::None;
  return rep;
}

WaveProfile1D build_profile(const FluidModel& m, double c, const ProfileOptions& opts) {
  const auto rep = find_turning_points(m, c);
  if (rep.classification == OrbitKind::None)
    throw Error(Err::NoHomoclinicOrbit, "no nontrivial orbit at this speed");
  if (rep.classification == OrbitKind::Heteroclinic)
    throw Error(Err::QuadratureFailure,
                "turning point is degenerate (F' ~ 0): heteroclinic limit");
  const Orbit orb = select_orbit(m, rep, opts.kind);
  const Fpack fp{m, c, m.rho_inf};

  const double cs = rep.sound_speed;
  const double kappa = std::sqrt((cs * cs - c * c) / (m.rho_inf * m.K(m.rho_inf)));

  auto rhs = [&](double s) {
    const double pt = std::max(phi_t(fp, orb, s), 0.0);
    const double rho = orb.rho_turn + orb.sgn * s * s;
    return std::sqrt(pt / (2.0 * m.K(rho)));
  };

  // pass 1: locate the half length where the tail condition is met
  double L = 0.0;
  {
    const double dx = 0.02 / kappa;
    const double L_cap = (std::log(orb.s_star * orb.s_star / opts.tail_tol) + 40.0) / kappa;
    double s = 0.0, x = 0.0;
    while (x < L_cap) {
      const double k1 = rhs(s);
      const double k2 = rhs(s + 0.5 * dx * k1);
      const double k3 = rhs(s + 0.5 * dx * k2);
      const double k4 = rhs(s + dx * k3);
      s += dx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (s > orb.s_star) s = orb.s_star;
      x += dx;
      if (std::abs(s * s - orb.s_star * orb.s_star) <= 0.9 * opts.tail_tol) break;
    }
    L = x;
    if (!(L > 0.0) || L >= L_cap)
      throw Error(Err::QuadratureFailure, "tail condition unreachable");
  }

  WaveProfile1D out;
  out.c = c;
  out.rho_inf = m.rho_inf;
  out.n_half = opts.n_half;
  out.rho_turn = orb.rho_turn;
  out.kind = orb.sgn > 0 ? WaveKind::Depression : WaveKind::Elevation;

  std::vector<double> shalf(opts.n_half + 1);
  bool ok = false;
  for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
    const double h = L / opts.n_half;
    const double dt = h / opts.substeps;
    double s = 0.0;
    shalf[0] = 0.0;
    for (int j = 0; j < opts.n_half; ++j) {
      for (int k = 0; k < opts.substeps; ++k) {
        const double k1 = rhs(s);
        const double k2 = rhs(s + 0.5 * dt * k1);
        const double k3 = rhs(s + 0.5 * dt * k2);
        const double k4 = rhs(s + dt * k3);
        s += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (s > orb.s_star) s = orb.s_star;  // cannot cross the fixed point
      }
      shalf[j + 1] = s;
    }
    const double v_end = std::abs(s * s - orb.s_star * orb.s_star);
    if (v_end <= opts.tail_tol)
      ok = true;
    else
      L *= 1.05;
  }
  if (!ok)
    throw Error(Err::QuadratureFailure, "tail tolerance not reached while growing L");

  out.L = L;
  out.h = L / opts.n_half;
  const int n = 2 * opts.n_half + 1;
  out.x.resize(n);
  out.rho.resize(n);
  out.u.resize(n);
  for (int j = 0; j <= opts.n_half; ++j) {
    const double s = shalf[j];
    const double v = orb.sgn * (s * s - orb.s_star * orb.s_star);
    const double rho = m.rho_inf + v;
    const double u = c * v / rho;
    out.x[opts.n_half + j] = j * out.h;
    out.x[opts.n_half - j] = -j * out.h;
    out.rho[opts.n_half + j] = rho;
    out.rho[opts.n_half - j] = rho;
    out.u[opts.n_half + j] = u;
    out.u[opts.n_half - j] = u;
  }
  return out;
}

double momentum_of_speed(const FluidModel& m, double c, const QuadratureOptions& q) {
  const Orbit orb = orbit_for(m, c, q.kind);
  const double rinf = m.rho_inf;
  return orbit_integral(m, c, orb, q.panels, [&](double rho) {
    const double v = rho - rinf;
    return c * v * v / rho * std::sqrt(m.K(rho));
  });
}

double energy_of_speed(const FluidModel& m, double c, const QuadratureOptions& q) {
  const Orbit orb = orbit_for(m, c, q.kind);
  return orbit_integral(m, c, orb, q.panels, [&](double rho) {
    return 2.0 * m.G(rho) * std::sqrt(m.K(rho));
  });
}

double momentum_on_profile(const WaveProfile1D& p) {
  double s = 0.0;
  const std::size_t n = p.rho.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    s += w * (p.rho[j] - p.rho_inf) * p.u[j];
  }
  return s * p.h;
}

double energy_on_profile(const WaveProfile1D& p, const FluidModel& m) {
  std::vector<double> d1, d2;
  fd_derivatives(p.rho, p.h, d1, d2);
  double s = 0.0;
  const std::size_t n = p.rho.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    const double e = 0.5 * (p.rho[j] * p.u[j] * p.u[j] + m.K(p.rho[j]) * d1[j] * d1[j]) +
                     m.G(p.rho[j]);
    s += w * e;
  }
  return s * p.h;
}

double ode_residual_max(const WaveProfile1D& p, const FluidModel& m) {
  std::vector<double> d1, d2;
  fd_derivatives(p.rho, p.h, d1, d2);
  double worst = 0.0;
  for (std::size_t j = 2; j + 2 < p.rho.size(); ++j) {
    const double rho = p.rho[j], u = p.u[j];
    const double r = -p.c * u + 0.5 * u * u + m.g(rho) - m.K(rho) * d2[j] -
                     0.5 * m.K1(rho) * d1[j] * d1[j];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

SpeedCurve speed_curve(const FluidModel& m, const std::vector<double>& c_list,
                       const QuadratureOptions& q) {
  SpeedCurve curve;
  curve.model = m;
  curve.kind = q.kind;
  const double cs = sound_speed(m, m.rho_inf);
  curve.fd_step = 1e-4 * cs;
  for (std::size_t i = 0; i + 1 < c_list.size(); ++i)
    if (!(c_list[i] < c_list[i + 1]))
      throw Error(Err::ValidationError, "speed list must be strictly increasing");
  for (double c : c_list) {
    SpeedCurveRow row;
    row.c = c;
    try {
      row.P = momentum_of_speed(m, c, q);
      row.E = energy_of_speed(m, c, q);
      row.m = row.E - c * row.P;
      const double h = curve.fd_step;
      auto dP = [&](double hh) {
        return (momentum_of_speed(m, c + hh, q) - momentum_of_speed(m, c - hh, q)) /
               (2.0 * hh);
      };
      auto dE = [&](double hh) {
        return (energy_of_speed(m, c + hh, q) - energy_of_speed(m, c - hh, q)) / (2.0 * hh);
      };
      row.dPdc = (4.0 * dP(0.5 * h) - dP(h)) / 3.0;
      row.dEdc = (4.0 * dE(0.5 * h) - dE(h)) / 3.0;
    } catch (const Error& e) {
      row.flags = err_name(e.code());
    }
    curve.rows.push_back(row);
  }
  return curve;
}

double moment_second_derivative(const FluidModel& m, double c, double h,
                                const QuadratureOptions& q) {
  auto mom = [&](double cc) {
    return energy_of_speed(m, cc, q) - cc * momentum_of_speed(m, cc, q);
  };
  auto d2 = [&](double hh) {
    return (mom(c + hh) - 2.0 * mom(c) + mom(c - hh)) / (hh * hh);
  };
  return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

StabilityVerdict stability_verdict(const SpeedCurve& curve, double c) {
  if (curve.rows.size() < 2)
    throw Error(Err::SpeedOutsideCurve, "curve has fewer than two rows");
  const double c_lo = curve.rows.front().c, c_hi = curve.rows.back().c;
  if (!(c >= c_lo - 1e-12 && c <= c_hi + 1e-12))
    throw Error(Err::SpeedOutsideCurve, "speed outside tabulated curve");
  const SpeedCurveRow* best = nullptr;
  for (const auto& row : curve.rows) {
    if (!row.flags.empty()) continue;
    if (!best || std::abs(row.c - c) < std::abs(best->c - c)) best = &row;
  }
  if (!best) throw Error(Err::SpeedOutsideCurve, "no clean row near requested speed");
  const double cs = sound_speed(curve.model, curve.model.rho_inf);
  StabilityVerdict out;
  out.dPdc = best->dPdc;
  out.tol = 1e-6 * std::abs(best->P) / cs;
  if (best->dPdc < -out.tol)
    out.verdict = Verdict::Stable;
  else if (best->dPdc > out.tol)
    out.verdict = Verdict::Unstable;
  else
    out.verdict = Verdict::Inconclusive;
  return out;
}

}  // namespace ek
