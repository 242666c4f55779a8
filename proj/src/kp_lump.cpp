#include "ek/kp_lump.hpp"

#include <cmath>

#include "ek/errors.hpp"

namespace ek {

namespace {
inline double denom(double x1, double x2) { return x1 * x1 + x2 * x2 + 3.0; }
}

double kp_lump_w(double x1, double x2) {
  const double D = denom(x1, x2);
  return 24.0 * (x1 * x1 - x2 * x2 - 3.0) / (D * D);
}

double kp_lump_v(double x1, double x2) { return -24.0 * x1 / denom(x1, x2); }

double kp_lump_w_d1(double x1, double x2) {
  const double D = denom(x1, x2);
  const double N = x1 * x1 - x2 * x2 - 3.0;
  return 24.0 * (2.0 * x1 * D - 4.0 * x1 * N) / (D * D * D);
}

double kp_lump_w_d111(double x1, double x2) {
  const double D = denom(x1, x2);
  const double x12 = x1 * x1;
  return -576.0 * x1 * (16.0 * x12 * x12 - 20.0 * x12 * D + 5.0 * D * D) /
         (D * D * D * D * D);
}

double kp_lump_v_d2(double x1, double x2) {
  const double D = denom(x1, x2);
  return 48.0 * x1 * x2 / (D * D);
}

double kp_lump_v_d22(double x1, double x2) {
  const double D = denom(x1, x2);
  return 48.0 * x1 * (D - 4.0 * x2 * x2) / (D * D * D);
}

LumpSample sample_lump(const LumpGrid& grid) {
  const double E = grid.half_extent;
  const double h1 = 2.0 * E / grid.n1, h2 = 2.0 * E / grid.n2;
  const double bmax = std::abs(kp_lump_w(E, 0.0));
  if (bmax > grid.boundary_tol)
    throw Error(Err::GridTooSmall, "lump boundary value above tolerance; enlarge the grid");
  LumpSample out;
  out.n1 = grid.n1;
  out.n2 = grid.n2;
  out.h1 = h1;
  out.h2 = h2;
  out.w.resize(std::size_t(grid.n1) * grid.n2);
  out.v.resize(out.w.size());
  for (int i = 0; i < grid.n1; ++i) {
    const double x1 = -E + i * h1;
    for (int j = 0; j < grid.n2; ++j) {
      const double x2 = -E + j * h2;
      out.w[std::size_t(i) * grid.n2 + j] = kp_lump_w(x1, x2);
      out.v[std::size_t(i) * grid.n2 + j] = kp_lump_v(x1, x2);
    }
  }
  return out;
}

double lump_residual_l2(const LumpSample& s) {
  const double E1 = 0.5 * s.n1 * s.h1;
  double acc = 0.0;
  for (int i = 0; i < s.n1; ++i) {
    const double x1 = -E1 + i * s.h1;
    for (int j = 0; j < s.n2; ++j) {
      const double x2 = -0.5 * s.n2 * s.h2 + j * s.h2;
      const double w = kp_lump_w(x1, x2);
      const double r = kp_lump_w_d1(x1, x2) * (1.0 + w) + kp_lump_v_d22(x1, x2) -
                       kp_lump_w_d111(x1, x2);
      acc += r * r;
    }
  }
  return std::sqrt(acc * s.h1 * s.h2);
}

double lump_energy(const LumpSample& s) {
  const double E1 = 0.5 * s.n1 * s.h1;
  double acc = 0.0;
  for (int i = 0; i < s.n1; ++i) {
    const double x1 = -E1 + i * s.h1;
    for (int j = 0; j < s.n2; ++j) {
      const double x2 = -0.5 * s.n2 * s.h2 + j * s.h2;
      const double w = kp_lump_w(x1, x2);
      const double vy = kp_lump_v_d2(x1, x2);
      const double wx = kp_lump_w_d1(x1, x2);
      acc += vy * vy + w * w * w / 3.0 + wx * wx;
    }
  }
  return 0.5 * acc * s.h1 * s.h2;
}

double lump_l2sq(const LumpSample& s) {
  double acc = 0.0;
  for (double w : s.w) acc += w * w;
  return acc * s.h1 * s.h2;
}

std::vector<double> spectral_d1_inverse(const Spectral2D& sp, const std::vector<double>& w) {
  std::vector<std::complex<double>> W;
  sp.forward(w, W);
  const int n2k = sp.n2() / 2 + 1;
  for (std::size_t j = 0; j < sp.nk(); ++j) {
    const double k1 = sp.k1d(j);
    if (std::abs(k1) < 1e-300) {
      W[j] = 0.0;  // zero-mean-per-line convention
    } else {
      W[j] /= std::complex<double>(0.0, k1);
    }
  }
  (void)n2k;
  std::vector<double> v;
  sp.inverse(W, v);
  return v;
}

}  // namespace ek
