#pragma once

#include <vector>

#include "ek/wave1d.hpp"

namespace ek {

// Symmetric tridiagonal discretization of the scalar Sturm-Liouville
// reduction M0 = M - (u_c - c)^2 / rho_c with Dirichlet ends at +-L.
// M r = (G'' - K''(rho_x)^2/2 - K' rho_xx) r - d/dx(K d/dx r).
struct SturmLiouvilleOperator {
  std::vector<double> diag;      // interior nodes only
  std::vector<double> offdiag;   // size diag.size()-1, shared symmetric band
  std::vector<double> potential; // V_j, the multiplication part of diag
  double h = 0.0;
  double floor = 0.0;            // essential spectrum floor of the potential
  double scale = 0.0;            // max |potential|, the zero-band reference
};

SturmLiouvilleOperator assemble(const WaveProfile1D& p, const FluidModel& m);

// Count of eigenvalues strictly below t (Sturm sequence sign count).
int count_below(const SturmLiouvilleOperator& op, double t);

// zero_band = 1e-3 * op.scale; count of eigenvalues < -zero_band.
int negative_eigencount(const SturmLiouvilleOperator& op);

double zero_band(const SturmLiouvilleOperator& op);

// k-th smallest eigenvalue (k = 0 based) by Sturm bisection.
double kth_eigenvalue(const SturmLiouvilleOperator& op, int k);

// Eigenvector by shifted inverse iteration; throws after 200 stalled sweeps.
std::vector<double> inverse_iteration(const SturmLiouvilleOperator& op, double shift,
                                      double* lambda_out = nullptr);

struct KernelCheck {
  double lambda0 = 0.0;   // eigenvalue nearest zero
  double cosine = 0.0;    // alignment of its eigenvector with d/dx rho_c
};

KernelCheck kernel_check(const SturmLiouvilleOperator& op, const WaveProfile1D& p);

double essential_spectrum_floor(const FluidModel& m, double c);

double rayleigh_quotient(const SturmLiouvilleOperator& op, const std::vector<double>& v);

}  // namespace ek
