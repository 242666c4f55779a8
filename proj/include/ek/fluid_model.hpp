#pragma once

#include <optional>
#include <string>

#include "ek/errors.hpp"
#include "ek/hermite.hpp"

namespace ek {

enum class PressureLaw { GrossPitaevskii, Power, CubicVdw };
enum class CapillarityLaw { Constant, Inverse, Power };

// Pressure/capillarity pair with exact derivative formulas. The rescaling of
// the reference state to rho_inf = 1, g'(1) = 1 is tracked through the three
// scale factors so rescaled models keep closed-form derivatives.
struct FluidModel {
  PressureLaw pressure = PressureLaw::GrossPitaevskii;
  double gamma_p = 2.0;                 // power pressure exponent
  double vdw_a = 0.0, vdw_b = 0.0;      // cubic law coefficients
  CapillarityLaw capillarity = CapillarityLaw::Constant;
  double kappa = 1.0;                   // capillarity amplitude
  double cap_m = 1.0;                   // power capillarity exponent
  double rho_inf = 1.0;

  // g(r) = g_scale * base_g(arg_scale * r), K(r) = k_scale * base_K(arg_scale * r)
  double arg_scale = 1.0, g_scale = 1.0, k_scale = 1.0;

  double g(double rho) const;
  double g1(double rho) const;
  double g2(double rho) const;
  double g3(double rho) const;
  double G(double rho) const;           // primitive of g vanishing at rho_inf
  double K(double rho) const;
  double K1(double rho) const;
  double K2(double rho) const;

  // Throws ValidationError unless g(rho_inf) = 0, g'(rho_inf) > 0 and
  // K > 0 on [rho_inf/8, 8 rho_inf].
  void validate() const;

  bool is_rescaled(double tol = 1e-12) const;
};

FluidModel gross_pitaevskii_model(double kappa = 1.0);
FluidModel power_model(double gamma_p, double kappa = 1.0);
FluidModel cubic_vdw_model(double a, double b, double kappa = 1.0);

double sound_speed(const FluidModel& m, double rho0);

struct GammaCoefficient {
  double value = 0.0;
  bool degenerate = false;  // |Gamma| < 1e-8, excluded by the small-p theory
};
GammaCoefficient gamma_coefficient(const FluidModel& m, double rho0);

FluidModel rescale(const FluidModel& m, double rho0);

// Cutoff construction: chi equals the identity on [2/3, 4/3], clamps to
// chi_lo below 1/2 and chi_hi above 2, with monotone C^2 quintic blends in
// between. blend_order controls the smoothness of the G-tilde extension.
struct CutoffSpec {
  double delta = 0.25;
  double chi_lo = 0.5;
  double chi_hi = 2.0;
  int blend_order = 3;

  void validate() const;
};

struct ChiValue {
  double value = 0.0;
  double deriv = 0.0;
};
ChiValue chi(const CutoffSpec& spec, double rho);

// Globally coercive extension of G: identical to G on (1-delta, 1+delta),
// exactly (rho-1)^2/2 + offset outside (1-2delta, 1+2delta), Hermite-blended
// at the derivative level in between so that g_tilde = G_tilde' holds exactly.
class ExtendedPotential {
 public:
  ExtendedPotential(const FluidModel& model, const CutoffSpec& spec);

  double G(double rho) const;
  double g(double rho) const;
  double g1(double rho) const;

  double c1() const { return c1_; }  // G_tilde >= c1 (rho-1)^2 on [-10, 20]
  double c2() const { return c2_; }  // |g_tilde| <= c2 |rho-1|
  double c3() const { return c3_; }  // G_tilde <= c3 (rho-1)^2
  double offset_left() const { return c_minus_; }
  double offset_right() const { return c_plus_; }
  const CutoffSpec& spec() const { return spec_; }

 private:
  FluidModel model_;
  CutoffSpec spec_;
  HermiteBlend left_, right_;
  double g_left_edge_int_ = 0.0;   // int of g_tilde over the left blend
  double g_right_edge_int_ = 0.0;  // int over the right blend
  double c_minus_ = 0.0, c_plus_ = 0.0;
  double c1_ = 0.0, c2_ = 0.0, c3_ = 0.0;
};

}  // namespace ek
