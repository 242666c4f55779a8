#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ek/fluid_model.hpp"

namespace ek {

enum class WaveKind { Auto, Depression, Elevation };

enum class OrbitKind { HomoclinicDepression, HomoclinicElevation, Heteroclinic, None };

struct TurningPointReport {
  std::optional<double> rho_m;    // largest zero of F below rho_inf
  std::optional<double> rho_M;    // smallest zero above rho_inf
  double slope_m = 0.0;           // F' at rho_m
  double slope_M = 0.0;           // F' at rho_M
  OrbitKind classification = OrbitKind::None;
  double sound_speed = 0.0;
};

// Effective potential of the first integral, F(rho) = -c^2 (rho-rho_inf)^2/(2 rho) + G(rho).
double potential_F(const FluidModel& m, double c, double rho);

TurningPointReport find_turning_points(const FluidModel& m, double c,
                                       double slope_tol = 1e-6);

struct ProfileOptions {
  int n_half = 2048;
  double tail_tol = 1e-10;
  int substeps = 16;              // RK4 substeps per grid interval
  WaveKind kind = WaveKind::Auto; // Auto prefers depression when both exist
};

struct WaveProfile1D {
  double c = 0.0;
  double rho_inf = 1.0;
  double L = 0.0;                 // half length, grid on [-L, L]
  double h = 0.0;
  int n_half = 0;
  std::vector<double> x;          // 2*n_half + 1 nodes
  std::vector<double> rho;
  std::vector<double> u;
  double rho_turn = 0.0;
  WaveKind kind = WaveKind::Depression;
};

// Profile by inversion of the first integral: the turning-point square-root
// singularity is absorbed by rho = rho_turn +- s^2 and s(x) is integrated as
// a smooth ODE sampled exactly at the grid nodes.
WaveProfile1D build_profile(const FluidModel& m, double c,
                            const ProfileOptions& opts = {});

struct QuadratureOptions {
  int panels = 48;                // Gauss-Legendre panels per region
  WaveKind kind = WaveKind::Auto;
};

// Orbit quadratures in the density variable.
double momentum_of_speed(const FluidModel& m, double c, const QuadratureOptions& = {});
double energy_of_speed(const FluidModel& m, double c, const QuadratureOptions& = {});

// Trapezoid sums on a built profile (the independent x-space route).
double momentum_on_profile(const WaveProfile1D& p);
double energy_on_profile(const WaveProfile1D& p, const FluidModel& m);

// Max-norm residual of the second-order traveling wave ODE under 4th-order
// centered differences (interior nodes).
double ode_residual_max(const WaveProfile1D& p, const FluidModel& m);

struct SpeedCurveRow {
  double c = 0.0, P = 0.0, E = 0.0, m = 0.0, dPdc = 0.0, dEdc = 0.0;
  std::string flags;              // empty when the row is clean
};

struct SpeedCurve {
  FluidModel model;
  std::vector<SpeedCurveRow> rows;
  double fd_step = 0.0;           // Richardson base step used for dPdc
  WaveKind kind = WaveKind::Auto;
};

SpeedCurve speed_curve(const FluidModel& m, const std::vector<double>& c_list,
                       const QuadratureOptions& = {});

// Second derivative of the moment of instability m(c) = E - cP by Richardson
// extrapolated central differences (independent of the dPdc column).
double moment_second_derivative(const FluidModel& m, double c, double h = 1e-3,
                                const QuadratureOptions& = {});

enum class Verdict { Stable, Unstable, Inconclusive };

struct StabilityVerdict {
  double dPdc = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  double tol = 0.0;
};

StabilityVerdict stability_verdict(const SpeedCurve& curve, double c);

}  // namespace ek
