#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "ek/fluid_model.hpp"
#include "ek/fourier.hpp"
#include "ek/kp_lump.hpp"

namespace ek {

// Periodic fields on the square torus [0, 2 pi n)^2 with anisotropic grid.
struct TorusField2D {
  double n = 0.0;           // torus half-size parameter; side = 2 pi n
  int N1 = 0, N2 = 0;       // resolution per axis
  std::vector<double> rho;  // row-major N1 x N2
  std::vector<double> phi;  // mean-zero gauge
  double side() const { return 2.0 * 3.14159265358979323846 * n; }
};

struct MinimizationReport {
  TorusField2D field;
  double p_target = 0.0, p_achieved = 0.0;
  double c = 0.0;
  double E_tilde = 0.0, E_reg = 0.0;
  double E_plain = 0.0;       // unmodified energy on the same fields
  double el_residual = 0.0;
  std::array<double, 4> pohozaev{};  // filled by pohozaev_check_2d
  double sup_defect = 0.0;
  long long iterations = 0;
  std::vector<double> eps_schedule;
  bool converged = false;
  std::string flag;
};

struct EnergyCurveRow {
  double p = 0.0, E_tilde_min = 0.0, c = 0.0, sup_defect = 0.0;
  std::string flags;
};

struct EnergyCurve {
  std::vector<EnergyCurveRow> rows;
  double fit_a1 = 0.0, fit_a3 = 0.0;      // E ~ a1 p + a3 p^3
  double loglog_slope_one_minus_c = 0.0;  // d ln(1-c)/d ln p
  std::vector<double> second_differences; // per interior node, / dp^2
  std::vector<double> subadditivity_margins;
  std::vector<double> lipschitz_ratios;   // (E(p+h)-E(p))/h per gap
  double min_sup_ratio = 0.0, max_sup_ratio = 0.0;  // sup_defect / p^2
};

struct MinimizeOptions {
  double tol = 1e-5;                 // Euler-Lagrange residual target
  std::vector<double> eps_schedule = {1e-2, 1.78e-3, 3.16e-4, 5.62e-5, 0.0};
  long long max_iter = 20000;        // per continuation stage
  double z_extent = 16.0;            // torus side in lump z2-units (auto sizing)
  double h1_z = 0.35, h2_z = 0.35;   // target z-resolution per axis
  int N1 = 0, N2 = 0;                // explicit grid override when nonzero
  double n_torus = 0.0;              // explicit torus size override
  int lbfgs_memory = 25;
  int verbosity = 0;
};

// The minimizer owns the transforms for its grid.
class Minimizer2D {
 public:
  Minimizer2D(const FluidModel& model, const CutoffSpec& cutoff, double p,
              const MinimizeOptions& opts = {});

  // KP-scaled lump initial data with the discrete momentum matched exactly.
  TorusField2D ansatz_from_lump() const;

  double modified_energy(const TorusField2D& f, double eps_reg, double* e_reg = nullptr) const;
  double plain_energy(const TorusField2D& f) const;
  double momentum(const TorusField2D& f) const;

  void variational_gradient(const TorusField2D& f, double eps_reg,
                            std::vector<double>& dE_rho, std::vector<double>& dE_phi,
                            std::vector<double>& dP_rho, std::vector<double>& dP_phi) const;

  MinimizationReport minimize(const TorusField2D* warm_start = nullptr) const;

  double p_target() const { return p_; }
  const Spectral2D& spectral() const { return *sp_; }
  const FluidModel& model() const { return model_; }
  const CutoffSpec& cutoff() const { return cutoff_; }
  const ExtendedPotential& extension() const { return ext_; }
  double epsilon_scale() const { return eps_kp_; }
  double torus_n() const { return n_torus_; }
  int N1() const { return N1_; }
  int N2() const { return N2_; }

 private:
  friend struct MinimizerAccess;
  FluidModel model_;
  CutoffSpec cutoff_;
  ExtendedPotential ext_;
  double p_ = 0.0;
  MinimizeOptions opts_;
  double gamma_kp_ = 3.0;     // 3 + g''(1)
  double eps_kp_ = 0.0;       // KP amplitude parameter for the target momentum
  double n_torus_ = 0.0;
  int N1_ = 0, N2_ = 0;
  std::unique_ptr<Spectral2D> sp_;

  TorusField2D build_ansatz(double eps) const;
};

struct PohozaevResiduals {
  double poho1 = 0.0;     // E = int chi |d1 phi|^2 + K |d1 rho|^2
  double poho2 = 0.0;     // E = int chi |d2 phi|^2 + K |d2 rho|^2 + c P
  double energie1 = 0.0;  // c P = int chi |grad phi|^2
  double poho3 = 0.0;     // c P = 2 int G_tilde (d = 2)
};

PohozaevResiduals pohozaev_check_2d(const Minimizer2D& mz, const MinimizationReport& rep);

struct EllipticSmallness {
  double sup_defect = 0.0;
  double bound_ratio = 0.0;  // sup / sqrt(E_tilde)
  bool outside_window = false;  // sup >= 1/3: cutoff active somewhere
};

EllipticSmallness elliptic_smallness_check(const MinimizationReport& rep);

struct SweepOptions {
  MinimizeOptions minimize;
  double curve_tol = 1e-4;
};

EnergyCurve sweep_energy_curve(const FluidModel& model, const CutoffSpec& cutoff,
                               const std::vector<double>& p_list, const SweepOptions& opts,
                               std::vector<MinimizationReport>* reports = nullptr);

}  // namespace ek
