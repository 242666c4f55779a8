#pragma once

#include <memory>
#include <vector>

#include "ek/fourier.hpp"
#include "ek/wave1d.hpp"

namespace ek {

struct EvolutionState {
  double t = 0.0;
  double length = 0.0;  // period
  int n = 0;            // power of two
  std::vector<double> rho, u;
  double E0 = 0.0, P0 = 0.0, mass0 = 0.0;  // conserved reference at t = 0
};

struct Conserved {
  double E = 0.0, P = 0.0, mass = 0.0;
};

// Fourier-collocation right-hand side and RK4 stepping; a Evolver1D owns its
// transforms and is single-writer for the states it advances.
class Evolver1D {
 public:
  Evolver1D(const FluidModel& m, int n, double length);

  EvolutionState make_state(std::vector<double> rho, std::vector<double> u) const;

  void rhs(const std::vector<double>& rho, const std::vector<double>& u,
           std::vector<double>& drho, std::vector<double>& du) const;

  // pre: dt within the h^2 stiffness bound; advances t by dt
  void step(EvolutionState& s, double dt) const;

  // spec bound: cfl_safety h^2/(pi^2 max K) with cfl_safety = 1/2
  double cfl_dt_bound(const EvolutionState& s) const;
  // RK4 imaginary-axis limit from the linear dispersion at the dealiased cut
  double linear_dt_bound() const;

  Conserved conserved_quantities(const EvolutionState& s) const;

  void project_dealias(EvolutionState& s) const;

  const FluidModel& model() const { return model_; }
  const Spectral1D& spectral() const { return sp_; }
  double rho_floor() const { return rho_floor_; }

 private:
  FluidModel model_;
  Spectral1D sp_;
  double rho_floor_ = 1e-3;
};

struct OrbitalDistance {
  double dist = 0.0;
  double y_opt = 0.0;  // shift in [0, length)
};

// inf over cyclic shifts of the discrete H1 x L2 distance to the reference
// pair, exact spectral shifts with parabolic sub-grid refinement.
OrbitalDistance orbital_distance(const Spectral1D& sp, const std::vector<double>& rho,
                                 const std::vector<double>& u,
                                 const std::vector<double>& rho_ref,
                                 const std::vector<double>& u_ref, double rho_inf);

// Embeds a [-L, L] profile in the middle of a periodic box of length 4L;
// requires n == 4 * profile.n_half so nodes align exactly.
EvolutionState embed_profile(const Evolver1D& ev, const WaveProfile1D& p);

enum class RunOutcome { RemainedClose, Escaped, SolverAbort, Indeterminate };

struct StabilityReport {
  std::vector<double> times;
  std::vector<double> orbital_dist;
  std::vector<double> y_opt;
  double dE_max = 0.0, dP_max = 0.0, dmass_max = 0.0;
  RunOutcome outcome = RunOutcome::Indeterminate;
  double t_event = 0.0;  // escape or abort instant
  double delta = 0.0;
  double escape_factor = 100.0, close_factor = 5.0;
};

enum class PerturbationShape { RandomLocalized, Sine, Gaussian };

struct ExperimentOptions {
  double delta = 1e-3;
  double horizon = 50.0;
  PerturbationShape shape = PerturbationShape::RandomLocalized;
  unsigned long long seed = 1;
  double tail_tol = 1e-6;
  int n_half = 256;          // profile resolution; periodic n = 4 * n_half
  double escape_factor = 100.0;
  double close_factor = 5.0;
  int samples = 200;         // orbital distance sampling instants
};

StabilityReport stability_experiment(const FluidModel& m, double c,
                                     const ExperimentOptions& opts);

}  // namespace ek
