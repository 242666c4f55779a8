#include "ek/spectral1d.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ek {

namespace {

// 4th-order first/second derivatives, one-sided near the ends.
void fd45(const std::vector<double>& f, double h, std::vector<double>& d1,
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
    d1[j] = double(dir) *
            (-25.0 * f[j] + 48.0 * f[j + dir] - 36.0 * f[j + 2 * dir] +
             16.0 * f[j + 3 * dir] - 3.0 * f[j + 4 * dir]) /
            (12.0 * h);
    d2[j] = (45.0 * f[j] - 154.0 * f[j + dir] + 214.0 * f[j + 2 * dir] -
             156.0 * f[j + 3 * dir] + 61.0 * f[j + 4 * dir] - 10.0 * f[j + 5 * dir]) /
            (12.0 * h * h);
  };
  one_sided(0, +1);
  one_sided(1, +1);
  one_sided(n - 1, -1);
  one_sided(n - 2, -1);
}

}  // namespace

SturmLiouvilleOperator assemble(const WaveProfile1D& p, const FluidModel& m) {
  const std::size_t n = p.rho.size();
  if (n < 8) throw Error(Err::GridTooCoarse, "profile too short to assemble");
  std::vector<double> d1, d2;
  fd45(p.rho, p.h, d1, d2);

  SturmLiouvilleOperator op;
  op.h = p.h;
  const std::size_t ni = n - 2;  // interior nodes
  op.diag.resize(ni);
  op.offdiag.resize(ni - 1);
  op.potential.resize(ni);
  for (std::size_t i = 0; i < ni; ++i) {
    const std::size_t j = i + 1;
    const double rho = p.rho[j];
    const double uc = p.u[j] - p.c;
    const double V = m.g1(rho) - 0.5 * m.K2(rho) * d1[j] * d1[j] - m.K1(rho) * d2[j] -
                     uc * uc / rho;
    op.potential[i] = V;
  }
  // conservative three-point stencil with K at half nodes
  const double h2 = p.h * p.h;
  for (std::size_t i = 0; i < ni; ++i) {
    const std::size_t j = i + 1;
    const double kl = m.K(0.5 * (p.rho[j - 1] + p.rho[j]));
    const double kr = m.K(0.5 * (p.rho[j] + p.rho[j + 1]));
    op.diag[i] = op.potential[i] + (kl + kr) / h2;
    if (i + 1 < ni) op.offdiag[i] = -kr / h2;
  }
  op.floor = essential_spectrum_floor(m, p.c);
  op.scale = 0.0;
  for (double v : op.potential) op.scale = std::max(op.scale, std::abs(v));

  // boundary potential must have converged to the constant-state value;
  // the reference tolerance is the achieved profile tail (>= FD noise floor)
  const double tail = std::max(std::abs(p.rho.front() - p.rho_inf),
                               std::abs(p.rho.back() - p.rho_inf));
  const double dev = std::max(std::abs(op.potential.front() - op.floor),
                              std::abs(op.potential.back() - op.floor));
  if (dev > 10.0 * std::max(tail, 2e-11))
    throw Error(Err::GridTooCoarse, "boundary potential far from essential floor");
  return op;
}

int count_below(const SturmLiouvilleOperator& op, double t) {
  // Sturm sequence via the LDL^T recurrence; count of negative pivots equals
  // the count of eigenvalues below t (exact for symmetric tridiagonals).
  int count = 0;
  double d = op.diag[0] - t;
  if (d < 0.0) ++count;
  const double tiny = 1e-300;
  for (std::size_t i = 1; i < op.diag.size(); ++i) {
    double denom = d;
    if (std::abs(denom) < tiny) denom = (denom < 0 ? -tiny : tiny);
    d = (op.diag[i] - t) - op.offdiag[i - 1] * op.offdiag[i - 1] / denom;
    if (d < 0.0) ++count;
  }
  return count;
}

double zero_band(const SturmLiouvilleOperator& op) { return 1e-3 * op.scale; }

int negative_eigencount(const SturmLiouvilleOperator& op) {
  return count_below(op, -zero_band(op));
}

double kth_eigenvalue(const SturmLiouvilleOperator& op, int k) {
  // Gershgorin bounds, then bisection on the Sturm count.
  double lo = op.diag[0], hi = op.diag[0];
  for (std::size_t i = 0; i < op.diag.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(op.offdiag[i - 1]);
    if (i + 1 < op.diag.size()) r += std::abs(op.offdiag[i]);
    lo = std::min(lo, op.diag[i] - r);
    hi = std::max(hi, op.diag[i] + r);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(op, mid) <= k)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Tridiagonal solve with partial pivoting (the shifted matrix is indefinite).
void tridiag_solve(std::vector<double> a /*diag*/, std::vector<double> b /*off*/,
                   std::vector<double>& x) {
  const std::size_t n = a.size();
  std::vector<double> c(n, 0.0), upper2(n, 0.0);
  std::vector<double> lower = b;  // subdiagonal copy (symmetric input)
  // rows: lower[i-1], a[i], b[i]; eliminate downward with row swaps
  std::vector<double> rhs = x;
  std::vector<double> d0(n), d1(n), d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d0[i] = a[i];
    d1[i] = (i + 1 < n) ? b[i] : 0.0;
    d2[i] = 0.0;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double sub = lower[i];  // element (i+1, i)
    if (std::abs(d0[i]) < std::abs(sub)) {
      std::swap(d0[i], sub);
      std::swap(d1[i], d0[i + 1]);
      std::swap(d2[i], d1[i + 1]);
      std::swap(rhs[i], rhs[i + 1]);
    }
    if (d0[i] == 0.0) d0[i] = 1e-300;
    const double mlt = sub / d0[i];
    d0[i + 1] -= mlt * d1[i];
    d1[i + 1] -= mlt * d2[i];
    rhs[i + 1] -= mlt * rhs[i];
  }
  if (d0[n - 1] == 0.0) d0[n - 1] = 1e-300;
  x[n - 1] = rhs[n - 1] / d0[n - 1];
  if (n >= 2) x[n - 2] = (rhs[n - 2] - d1[n - 2] * x[n - 1]) / d0[n - 2];
  for (std::size_t i = n; i-- > 2;) {
    const std::size_t j = i - 2;
    x[j] = (rhs[j] - d1[j] * x[j + 1] - d2[j] * x[j + 2]) / d0[j];
  }
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> inverse_iteration(const SturmLiouvilleOperator& op, double shift,
                                      double* lambda_out) {
  const std::size_t n = op.diag.size();
  std::vector<double> shifted(op.diag);
  for (auto& d : shifted) d -= shift;
  std::mt19937_64 rng(12345);
  std::vector<double> v(n);
  for (auto& x : v) x = double(rng() >> 11) / double(1ull << 53) - 0.5;
  double nv = norm2(v);
  for (auto& x : v) x /= nv;
  double lambda = shift, prev_res = 1e300;
  int stalled = 0;
  for (int it = 0; it < 400; ++it) {
    std::vector<double> w = v;
    tridiag_solve(shifted, op.offdiag, w);
    const double nw = norm2(w);
    for (auto& x : w) x /= nw;
    v = w;
    lambda = rayleigh_quotient(op, v);
    // residual ||A v - lambda v||
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double av = op.diag[i] * v[i];
      if (i > 0) av += op.offdiag[i - 1] * v[i - 1];
      if (i + 1 < n) av += op.offdiag[i] * v[i + 1];
      const double r = av - lambda * v[i];
      res += r * r;
    }
    res = std::sqrt(res);
    if (res < 1e-12 * std::max(1.0, std::abs(lambda)) + 1e-13 * op.scale) break;
    if (res >= prev_res * 0.999) {
      if (++stalled > 200)
        throw Error(Err::InverseIterationStalled, "no residual progress in 200 sweeps");
    } else {
      stalled = 0;
    }
    prev_res = res;
  }
  if (lambda_out) *lambda_out = lambda;
  return v;
}

KernelCheck kernel_check(const SturmLiouvilleOperator& op, const WaveProfile1D& p) {
  KernelCheck out;
  double lambda = 0.0;
  const auto v = inverse_iteration(op, 0.0, &lambda);
  out.lambda0 = lambda;
  // alignment with the translation mode d/dx rho_c on the interior nodes
  std::vector<double> d1, d2;
  fd45(p.rho, p.h, d1, d2);
  double dot = 0.0, nv = 0.0, nd = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double g = d1[i + 1];
    dot += v[i] * g;
    nv += v[i] * v[i];
    nd += g * g;
  }
  out.cosine = std::abs(dot) / std::sqrt(nv * nd);
  return out;
}

double essential_spectrum_floor(const FluidModel& m, double c) {
  return (m.rho_inf * m.g1(m.rho_inf) - c * c) / m.rho_inf;
}

double rayleigh_quotient(const SturmLiouvilleOperator& op, const std::vector<double>& v) {
  double num = 0.0, den = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    double av = op.diag[i] * v[i];
    if (i > 0) av += op.offdiag[i - 1] * v[i - 1];
    if (i + 1 < n) av += op.offdiag[i] * v[i + 1];
    num += v[i] * av;
    den += v[i] * v[i];
  }
  return num / den;
}

}  // namespace ek
