#include "ek/fluid_model.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ek {

const char* err_name(Err e) {
  switch (e) {
    case Err::NonPositiveDensity: return "NonPositiveDensity";
    case Err::SupersonicBaseState: return "SupersonicBaseState";
    case Err::SupersonicSpeed: return "SupersonicSpeed";
    case Err::BracketScanFailed: return "BracketScanFailed";
    case Err::NoHomoclinicOrbit: return "NoHomoclinicOrbit";
    case Err::QuadratureFailure: return "QuadratureFailure";
    case Err::GridTooCoarse: return "GridTooCoarse";
    case Err::InverseIterationStalled: return "InverseIterationStalled";
    case Err::CflViolation: return "CflViolation";
    case Err::VacuumApproached: return "VacuumApproached";
    case Err::GridTooSmall: return "GridTooSmall";
    case Err::DegenerateGamma: return "DegenerateGamma";
    case Err::TorusTooSmall: return "TorusTooSmall";
    case Err::MaxIterations: return "MaxIterations";
    case Err::ConstraintSingular: return "ConstraintSingular";
    case Err::RhoNonPositive: return "RhoNonPositive";
    case Err::SpeedOutsideCurve: return "SpeedOutsideCurve";
    case Err::ParseError: return "ParseError";
    case Err::ValidationError: return "ValidationError";
    case Err::BadMagic: return "BadMagic";
    case Err::TruncatedPayload: return "TruncatedPayload";
    case Err::HeaderMismatch: return "HeaderMismatch";
    case Err::IoError: return "IoError";
  }
  return "UnknownError";
}

namespace {

// Base laws, all with g(1) = 0. Derivatives are with respect to the base
// argument; FluidModel applies the scale chain rule.
double base_g(const FluidModel& m, double r) {
  switch (m.pressure) {
    case PressureLaw::GrossPitaevskii: return r - 1.0;
    case PressureLaw::Power: return std::pow(r, m.gamma_p) - 1.0;
    case PressureLaw::CubicVdw: {
      const double v = r - 1.0;
      return v + m.vdw_a * v * v + m.vdw_b * v * v * v;
    }
  }
  return 0.0;
}

double base_g1(const FluidModel& m, double r) {
  switch (m.pressure) {
    case PressureLaw::GrossPitaevskii: return 1.0;
    case PressureLaw::Power: return m.gamma_p * std::pow(r, m.gamma_p - 1.0);
    case PressureLaw::CubicVdw: {
      const double v = r - 1.0;
      return 1.0 + 2.0 * m.vdw_a * v + 3.0 * m.vdw_b * v * v;
    }
  }
  return 0.0;
}

double base_g2(const FluidModel& m, double r) {
  switch (m.pressure) {
    case PressureLaw::GrossPitaevskii: return 0.0;
    case PressureLaw::Power:
      return m.gamma_p * (m.gamma_p - 1.0) * std::pow(r, m.gamma_p - 2.0);
    case PressureLaw::CubicVdw:
      return 2.0 * m.vdw_a + 6.0 * m.vdw_b * (r - 1.0);
  }
  return 0.0;
}

double base_g3(const FluidModel& m, double r) {
  switch (m.pressure) {
    case PressureLaw::GrossPitaevskii: return 0.0;
    case PressureLaw::Power:
      return m.gamma_p * (m.gamma_p - 1.0) * (m.gamma_p - 2.0) *
             std::pow(r, m.gamma_p - 3.0);
    case PressureLaw::CubicVdw: return 6.0 * m.vdw_b;
  }
  return 0.0;
}

// Primitive of base_g vanishing at r = 1.
double base_G(const FluidModel& m, double r) {
  switch (m.pressure) {
    case PressureLaw::GrossPitaevskii: {
      const double v = r - 1.0;
      return 0.5 * v * v;
    }
    case PressureLaw::Power: {
      const double gp = m.gamma_p;
      return (std::pow(r, gp + 1.0) - 1.0) / (gp + 1.0) - (r - 1.0);
    }
    case PressureLaw::CubicVdw: {
      const double v = r - 1.0;
      return v * v * (0.5 + m.vdw_a * v / 3.0 + 0.25 * m.vdw_b * v * v);
    }
  }
  return 0.0;
}

double base_K(const FluidModel& m, double r) {
  switch (m.capillarity) {
    case CapillarityLaw::Constant: return m.kappa;
    case CapillarityLaw::Inverse: return m.kappa / r;
    case CapillarityLaw::Power: return m.kappa * std::pow(r, m.cap_m);
  }
  return 0.0;
}

double base_K1(const FluidModel& m, double r) {
  switch (m.capillarity) {
    case CapillarityLaw::Constant: return 0.0;
    case CapillarityLaw::Inverse: return -m.kappa / (r * r);
    case CapillarityLaw::Power:
      return m.kappa * m.cap_m * std::pow(r, m.cap_m - 1.0);
  }
  return 0.0;
}

double base_K2(const FluidModel& m, double r) {
  switch (m.capillarity) {
    case CapillarityLaw::Constant: return 0.0;
    case CapillarityLaw::Inverse: return 2.0 * m.kappa / (r * r * r);
    case CapillarityLaw::Power:
      return m.kappa * m.cap_m * (m.cap_m - 1.0) * std::pow(r, m.cap_m - 2.0);
  }
  return 0.0;
}

}  // namespace

double FluidModel::g(double rho) const { return g_scale * base_g(*this, arg_scale * rho); }
double FluidModel::g1(double rho) const {
  return g_scale * arg_scale * base_g1(*this, arg_scale * rho);
}
double FluidModel::g2(double rho) const {
  return g_scale * arg_scale * arg_scale * base_g2(*this, arg_scale * rho);
}
double FluidModel::g3(double rho) const {
  const double a = arg_scale;
  return g_scale * a * a * a * base_g3(*this, a * rho);
}
double FluidModel::G(double rho) const {
  return g_scale / arg_scale *
         (base_G(*this, arg_scale * rho) - base_G(*this, arg_scale * rho_inf));
}
double FluidModel::K(double rho) const { return k_scale * base_K(*this, arg_scale * rho); }
double FluidModel::K1(double rho) const {
  return k_scale * arg_scale * base_K1(*this, arg_scale * rho);
}
double FluidModel::K2(double rho) const {
  return k_scale * arg_scale * arg_scale * base_K2(*this, arg_scale * rho);
}

void FluidModel::validate() const {
  if (!(rho_inf > 0.0))
    throw Error(Err::ValidationError, "rho_inf must be positive");
  if (kappa <= 0.0)
    throw Error(Err::ValidationError, "capillarity amplitude must be positive");
  if (pressure == PressureLaw::Power && gamma_p <= 0.0)
    throw Error(Err::ValidationError, "power pressure exponent must be positive");
  const double gv = g(rho_inf);
  const double g1v = g1(rho_inf);
  if (std::abs(gv) > 1e-10 * std::max(1.0, std::abs(g1v)))
    throw Error(Err::ValidationError, "g(rho_inf) must vanish");
  if (!(g1v > 0.0))
    throw Error(Err::ValidationError, "g'(rho_inf) must be positive");
  for (int i = 0; i <= 200; ++i) {
    const double r = rho_inf / 8.0 * std::pow(64.0, i / 200.0);
    if (!(K(r) > 0.0))
      throw Error(Err::ValidationError, "K(rho) must be positive on [rho_inf/8, 8 rho_inf]");
  }
}

bool FluidModel::is_rescaled(double tol) const {
  return std::abs(rho_inf - 1.0) <= tol && std::abs(g1(1.0) - 1.0) <= tol;
}

FluidModel gross_pitaevskii_model(double kappa) {
  FluidModel m;
  m.pressure = PressureLaw::GrossPitaevskii;
  m.kappa = kappa;
  m.validate();
  return m;
}

FluidModel power_model(double gamma_p, double kappa) {
  FluidModel m;
  m.pressure = PressureLaw::Power;
  m.gamma_p = gamma_p;
  m.kappa = kappa;
  m.validate();
  return m;
}

FluidModel cubic_vdw_model(double a, double b, double kappa) {
  FluidModel m;
  m.pressure = PressureLaw::CubicVdw;
  m.vdw_a = a;
  m.vdw_b = b;
  m.kappa = kappa;
  m.validate();
  return m;
}

double sound_speed(const FluidModel& m, double rho0) {
  if (!(rho0 > 0.0)) throw Error(Err::NonPositiveDensity, "rho0 must be positive");
  const double g1v = m.g1(rho0);
  if (!(g1v > 0.0))
    throw Error(Err::SupersonicBaseState, "g'(rho0) <= 0: no acoustic branch");
  return std::sqrt(rho0 * g1v);
}

GammaCoefficient gamma_coefficient(const FluidModel& m, double rho0) {
  const double g1v = m.g1(rho0);
  if (!(g1v > 0.0))
    throw Error(Err::SupersonicBaseState, "g'(rho0) <= 0 in gamma coefficient");
  GammaCoefficient out;
  out.value = 3.0 + rho0 * m.g2(rho0) / g1v;
  out.degenerate = std::abs(out.value) < 1e-8;
  return out;
}

FluidModel rescale(const FluidModel& m, double rho0) {
  if (!(rho0 > 0.0)) throw Error(Err::NonPositiveDensity, "rho0 must be positive");
  const double gv = m.g(rho0);
  const double g1v = m.g1(rho0);
  if (std::abs(gv) > 1e-10 * std::max(1.0, std::abs(g1v)))
    throw Error(Err::ValidationError, "rescale requires g(rho0) = 0");
  if (!(g1v > 0.0))
    throw Error(Err::SupersonicBaseState, "rescale requires g'(rho0) > 0");
  FluidModel r = m;
  r.arg_scale = m.arg_scale * rho0;
  r.g_scale = m.g_scale / (g1v * rho0);
  r.k_scale = m.k_scale / rho0;
  r.rho_inf = m.rho_inf / rho0;
  return r;
}

void CutoffSpec::validate() const {
  if (delta <= 0.0 || delta > 1.0 / 3.0)
    throw Error(Err::ValidationError, "cutoff delta must lie in (0, 1/3]");
  if (blend_order < 2)
    throw Error(Err::ValidationError, "blend_order must be >= 2");
  if (chi_lo != 0.5 || chi_hi != 2.0)
    throw Error(Err::ValidationError, "chi clamps are fixed at 1/2 and 2");
}

namespace {
// Monotone C^2 ramp: H(0)=0, H(1)=1, H'(0)=H''(0)=H''(1)=0, H'(1)=1.
inline void ramp(double u, double& h, double& dh) {
  h = u * u * u * (6.0 - 8.0 * u + 3.0 * u * u);
  dh = u * u * (18.0 - 32.0 * u + 15.0 * u * u);
}
}  // namespace

ChiValue chi(const CutoffSpec& spec, double rho) {
  ChiValue out;
  const double lo = spec.chi_lo, hi = spec.chi_hi;
  if (rho <= lo) {
    out.value = lo;
    out.deriv = 0.0;
  } else if (rho < 2.0 / 3.0) {
    const double len = 2.0 / 3.0 - lo;
    double h, dh;
    ramp((rho - lo) / len, h, dh);
    out.value = lo + len * h;
    out.deriv = dh;
  } else if (rho <= 4.0 / 3.0) {
    out.value = rho;
    out.deriv = 1.0;
  } else if (rho < hi) {
    const double len = hi - 4.0 / 3.0;
    double h, dh;
    ramp(1.0 - (rho - 4.0 / 3.0) / len, h, dh);
    out.value = hi - len * h;
    out.deriv = dh;
  } else {
    out.value = hi;
    out.deriv = 0.0;
  }
  return out;
}

ExtendedPotential::ExtendedPotential(const FluidModel& model, const CutoffSpec& spec)
    : model_(model),
      spec_(spec),
      left_(0.0, 1.0, {0.0}, {0.0}),
      right_(0.0, 1.0, {0.0}, {0.0}) {
  spec_.validate();
  if (!model_.is_rescaled(1e-9))
    throw Error(Err::ValidationError, "extended potential requires a rescaled model");
  const double d = spec_.delta;
  const int k = spec_.blend_order - 1;  // derivatives matched on g_tilde
  auto lin_data = [&](double x) {
    std::vector<double> f(k + 1, 0.0);
    f[0] = x - 1.0;
    if (k >= 1) f[1] = 1.0;
    return f;
  };
  auto g_data = [&](double x) {
    std::vector<double> f(k + 1, 0.0);
    f[0] = model_.g(x);
    if (k >= 1) f[1] = model_.g1(x);
    if (k >= 2) f[2] = model_.g2(x);
    if (k >= 3) f[3] = model_.g3(x);
    if (k > 3)
      throw Error(Err::ValidationError, "blend_order > 4 exceeds available derivatives");
    return f;
  };
  left_ = HermiteBlend(1.0 - 2.0 * d, 1.0 - d, lin_data(1.0 - 2.0 * d), g_data(1.0 - d));
  right_ = HermiteBlend(1.0 + d, 1.0 + 2.0 * d, g_data(1.0 + d), lin_data(1.0 + 2.0 * d));
  g_left_edge_int_ = left_.integral_from_x0(1.0 - d);
  g_right_edge_int_ = right_.integral_from_x0(1.0 + 2.0 * d);
  // offsets making G_tilde continuous with the outer quadratic
  const double GL = model_.G(1.0 - d);  // G_tilde(1-d)
  const double GR = model_.G(1.0 + d);
  const double Gt_left_outer = GL - g_left_edge_int_;            // G_tilde(1-2d)
  const double Gt_right_outer = GR + g_right_edge_int_;          // G_tilde(1+2d)
  c_minus_ = Gt_left_outer - 2.0 * d * d;
  c_plus_ = Gt_right_outer - 2.0 * d * d;

  // sampled coercivity constants on [-10, 20]
  c1_ = 1e300;
  c2_ = 0.0;
  c3_ = 0.0;
  const int n = 30000;
  for (int i = 0; i <= n; ++i) {
    const double rho = -10.0 + 30.0 * double(i) / n;
    const double v = rho - 1.0;
    if (std::abs(v) < 1e-6) continue;
    const double Gt = G(rho);
    const double gt = g(rho);
    c1_ = std::min(c1_, Gt / (v * v));
    c2_ = std::max(c2_, std::abs(gt) / std::abs(v));
    c3_ = std::max(c3_, Gt / (v * v));
  }
  if (!(c1_ > 0.0))
    throw Error(Err::ValidationError,
                "extension not coercive for this law; reduce cutoff delta");
}

double ExtendedPotential::G(double rho) const {
  const double d = spec_.delta;
  if (rho >= 1.0 - d && rho <= 1.0 + d) return model_.G(rho);
  const double v = rho - 1.0;
  if (rho > 1.0 + 2.0 * d) return 0.5 * v * v + c_plus_;
  if (rho < 1.0 - 2.0 * d) return 0.5 * v * v + c_minus_;
  if (rho > 1.0) return model_.G(1.0 + d) + right_.integral_from_x0(rho);
  return model_.G(1.0 - d) - (g_left_edge_int_ - left_.integral_from_x0(rho));
}

double ExtendedPotential::g(double rho) const {
  const double d = spec_.delta;
  if (rho >= 1.0 - d && rho <= 1.0 + d) return model_.g(rho);
  if (rho > 1.0 + 2.0 * d || rho < 1.0 - 2.0 * d) return rho - 1.0;
  if (rho > 1.0) return right_(rho);
  return left_(rho);
}

double ExtendedPotential::g1(double rho) const {
  const double d = spec_.delta;
  if (rho >= 1.0 - d && rho <= 1.0 + d) return model_.g1(rho);
  if (rho > 1.0 + 2.0 * d || rho < 1.0 - 2.0 * d) return 1.0;
  if (rho > 1.0) return right_.deriv(rho);
  return left_.deriv(rho);
}

}  // namespace ek
