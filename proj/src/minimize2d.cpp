#include "ek/minimize2d.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>

namespace ek {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLumpL2Sq = 96.0 * kPi;  // ||w||_2^2 of the KP-I lump

int fft_friendly(int n) {
  // next size of the form 2^a * {1,3,5} >= n
  int best = 1 << 30;
  for (int f : {1, 3, 5}) {
    int s = f;
    while (s < n) s *= 2;
    best = std::min(best, s);
  }
  return best;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Minimizer2D::Minimizer2D(const FluidModel& model, const CutoffSpec& cutoff, double p,
                         const MinimizeOptions& opts)
    : model_(model), cutoff_(cutoff), ext_(model, cutoff), p_(p), opts_(opts) {
  if (!model_.is_rescaled(1e-9))
    throw Error(Err::ValidationError, "minimizer requires a rescaled model");
  if (p < 0.0) throw Error(Err::ValidationError, "momentum must be nonnegative");
  const auto gam = gamma_coefficient(model_, 1.0);
  if (gam.degenerate)
    throw Error(Err::DegenerateGamma, "Gamma = 3 + g''(1) vanishes; KP scaling breaks down");
  gamma_kp_ = gam.value;
  const double K1 = model_.K(1.0);
  const double nA2 = K1 * kLumpL2Sq / (gamma_kp_ * gamma_kp_);
  eps_kp_ = (p > 0.0) ? p / nA2 : 0.0;

  if (opts_.N1 > 0 && opts_.N2 > 0 && opts_.n_torus > 0.0) {
    N1_ = opts_.N1;
    N2_ = opts_.N2;
    n_torus_ = opts_.n_torus;
  } else if (p > 0.0) {
    const double sqK = std::sqrt(K1);
    const double side = opts_.z_extent * sqK / (eps_kp_ * eps_kp_);
    n_torus_ = side / (2.0 * kPi);
    N1_ = fft_friendly(int(std::ceil(opts_.z_extent / (eps_kp_ * opts_.h1_z))));
    N2_ = fft_friendly(int(std::ceil(opts_.z_extent / opts_.h2_z)));
    if (N1_ > 16384 || N2_ > 16384)
      throw Error(Err::TorusTooSmall, "momentum too small for a desk-scale grid");
  } else {
    n_torus_ = opts_.n_torus > 0.0 ? opts_.n_torus : 8.0;
    N1_ = opts_.N1 > 0 ? opts_.N1 : 64;
    N2_ = opts_.N2 > 0 ? opts_.N2 : 64;
  }
  if (p > 0.0 && 2.0 * kPi * n_torus_ * eps_kp_ * eps_kp_ / std::sqrt(K1) < 8.0)
    throw Error(Err::TorusTooSmall, "torus does not accommodate the lump support");
  sp_ = std::make_unique<Spectral2D>(N1_, N2_, 2.0 * kPi * n_torus_);
}

TorusField2D Minimizer2D::build_ansatz(double eps) const {
  TorusField2D f;
  f.n = n_torus_;
  f.N1 = N1_;
  f.N2 = N2_;
  f.rho.resize(sp_->size());
  const double S = sp_->length();
  const double sqK = std::sqrt(model_.K(1.0));
  std::vector<double> amp(sp_->size());
  for (int i = 0; i < N1_; ++i) {
    const double x1 = i * sp_->h1() - 0.5 * S;
    for (int j = 0; j < N2_; ++j) {
      const double x2 = j * sp_->h2() - 0.5 * S;
      const double z1 = eps * x1 / sqK;
      const double z2 = eps * eps * x2 / sqK;
      const std::size_t idx = std::size_t(i) * N2_ + j;
      amp[idx] = kp_lump_w(z1, z2) / gamma_kp_;
      f.rho[idx] = 1.0 + eps * eps * amp[idx];
    }
  }
  // phi = eps * d1^{-1} A on the torus: the spectral antiderivative is
  // periodic, unlike the odd 1/z1 tail of the closed-form one
  f.phi = spectral_d1_inverse(*sp_, amp);
  // the antiderivative was taken in the grid variable x1 = z1/eps
  for (auto& v : f.phi) v *= eps * eps;
  double phimean = 0.0;
  for (double v : f.phi) phimean += v;
  phimean /= double(sp_->size());
  for (auto& v : f.phi) v -= phimean;
  return f;
}

TorusField2D Minimizer2D::ansatz_from_lump() const {
  if (p_ == 0.0) {
    TorusField2D f;
    f.n = n_torus_;
    f.N1 = N1_;
    f.N2 = N2_;
    f.rho.assign(sp_->size(), 1.0);
    f.phi.assign(sp_->size(), 0.0);
    return f;
  }
  double eps = eps_kp_;
  TorusField2D f;
  for (int it = 0; it < 12; ++it) {
    f = build_ansatz(eps);
    const double P = momentum(f);
    if (!(P > 0.0)) throw Error(Err::ConstraintSingular, "ansatz momentum not positive");
    if (std::abs(P - p_) < 1e-13 * std::max(1.0, p_)) break;
    eps *= p_ / P;
  }
  // exact feasibility by the linear-in-phi rescale
  const double P = momentum(f);
  for (auto& v : f.phi) v *= p_ / P;
  return f;
}

double Minimizer2D::modified_energy(const TorusField2D& f, double eps_reg,
                                    double* e_reg) const {
  std::vector<double> gx, gy, rx, ry;
  sp_->d1(f.phi, gx);
  sp_->d2(f.phi, gy);
  sp_->d1(f.rho, rx);
  sp_->d2(f.rho, ry);
  double E = 0.0;
  for (std::size_t i = 0; i < sp_->size(); ++i) {
    const auto cv = chi(cutoff_, f.rho[i]);
    E += 0.5 * (cv.value * (gx[i] * gx[i] + gy[i] * gy[i]) +
                model_.K(cv.value) * (rx[i] * rx[i] + ry[i] * ry[i])) +
         ext_.G(f.rho[i]);
  }
  E *= sp_->cell();
  if (e_reg) {
    *e_reg = E;
    if (eps_reg > 0.0) {
      std::vector<double> lr, lp;
      sp_->laplacian(f.rho, lr);
      sp_->laplacian(f.phi, lp);
      double extra = 0.0;
      for (std::size_t i = 0; i < sp_->size(); ++i)
        extra += lr[i] * lr[i] + lp[i] * lp[i];
      *e_reg += 0.5 * eps_reg * extra * sp_->cell();
    }
  }
  return E;
}

double Minimizer2D::plain_energy(const TorusField2D& f) const {
  double rmin = 1e300;
  for (double r : f.rho) rmin = std::min(rmin, r);
  if (!(rmin > 0.0)) return std::nan("");
  std::vector<double> gx, gy, rx, ry;
  sp_->d1(f.phi, gx);
  sp_->d2(f.phi, gy);
  sp_->d1(f.rho, rx);
  sp_->d2(f.rho, ry);
  double E = 0.0;
  for (std::size_t i = 0; i < sp_->size(); ++i) {
    E += 0.5 * (f.rho[i] * (gx[i] * gx[i] + gy[i] * gy[i]) +
                model_.K(f.rho[i]) * (rx[i] * rx[i] + ry[i] * ry[i])) +
         model_.G(f.rho[i]);
  }
  return E * sp_->cell();
}

double Minimizer2D::momentum(const TorusField2D& f) const {
  std::vector<double> gx;
  sp_->d1(f.phi, gx);
  double P = 0.0;
  for (std::size_t i = 0; i < sp_->size(); ++i) P += (f.rho[i] - 1.0) * gx[i];
  return P * sp_->cell();
}

void Minimizer2D::variational_gradient(const TorusField2D& f, double eps_reg,
                                       std::vector<double>& dE_rho,
                                       std::vector<double>& dE_phi,
                                       std::vector<double>& dP_rho,
                                       std::vector<double>& dP_phi) const {
  const std::size_t N = sp_->size();
  std::vector<double> gx, gy, rx, ry, lr;
  sp_->d1(f.phi, gx);
  sp_->d2(f.phi, gy);
  sp_->d1(f.rho, rx);
  sp_->d2(f.rho, ry);
  sp_->laplacian(f.rho, lr);

  // dE/dphi = -div(chi grad phi) (+ eps lap^2 phi)
  std::vector<double> a(N), b(N), tmp;
  for (std::size_t i = 0; i < N; ++i) {
    const double cv = chi(cutoff_, f.rho[i]).value;
    a[i] = cv * gx[i];
    b[i] = cv * gy[i];
  }
  sp_->d1(a, dE_phi);
  sp_->d2(b, tmp);
  for (std::size_t i = 0; i < N; ++i) dE_phi[i] = -(dE_phi[i] + tmp[i]);
  if (eps_reg > 0.0) {
    sp_->bilaplacian(f.phi, tmp);
    for (std::size_t i = 0; i < N; ++i) dE_phi[i] += eps_reg * tmp[i];
  }

  // dE/drho = chi' |grad phi|^2 / 2 - K(chi) lap rho - (K o chi)' |grad rho|^2/2
  //           + g_tilde (+ eps lap^2 rho)
  dE_rho.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto cv = chi(cutoff_, f.rho[i]);
    const double Kc = model_.K(cv.value);
    const double Kc1 = model_.K1(cv.value) * cv.deriv;
    dE_rho[i] = 0.5 * cv.deriv * (gx[i] * gx[i] + gy[i] * gy[i]) - Kc * lr[i] -
                0.5 * Kc1 * (rx[i] * rx[i] + ry[i] * ry[i]) + ext_.g(f.rho[i]);
  }
  if (eps_reg > 0.0) {
    sp_->bilaplacian(f.rho, tmp);
    for (std::size_t i = 0; i < N; ++i) dE_rho[i] += eps_reg * tmp[i];
  }

  dP_rho = gx;
  sp_->d1(f.rho, tmp);
  dP_phi.resize(N);
  for (std::size_t i = 0; i < N; ++i) dP_phi[i] = -tmp[i];
}

namespace {

// Solves (-div(chi(rho) grad) + eps lap^2) phit = -d1 rho by preconditioned CG.
// Returns the iteration count; the residual norm target is absolute.
int solve_phi_tilde(const Spectral2D& sp, const CutoffSpec& cutoff,
                    const std::vector<double>& rho, double eps_reg,
                    std::vector<double>& phit, double res_target) {
  const std::size_t N = sp.size();
  std::vector<double> chiv(N);
  for (std::size_t i = 0; i < N; ++i) chiv[i] = chi(cutoff, rho[i]).value;
  std::vector<double> b, tmp1, tmp2;
  sp.d1(rho, b);
  for (auto& v : b) v = -v;

  auto apply = [&](const std::vector<double>& f, std::vector<double>& out) {
    sp.d1(f, tmp1);
    for (std::size_t i = 0; i < N; ++i) tmp1[i] *= chiv[i];
    sp.d1(tmp1, out);
    sp.d2(f, tmp1);
    for (std::size_t i = 0; i < N; ++i) tmp1[i] *= chiv[i];
    sp.d2(tmp1, tmp2);
    for (std::size_t i = 0; i < N; ++i) out[i] = -(out[i] + tmp2[i]);
    if (eps_reg > 0.0) {
      sp.bilaplacian(f, tmp1);
      for (std::size_t i = 0; i < N; ++i) out[i] += eps_reg * tmp1[i];
    }
  };
  auto precond = [&](const std::vector<double>& f, std::vector<double>& out) {
    std::vector<std::complex<double>> F;
    sp.forward(f, F);
    for (std::size_t j = 0; j < sp.nk(); ++j) {
      const double ks = sp.ksq(j);
      const double den = ks + eps_reg * ks * ks;
      F[j] = (den > 1e-300) ? F[j] / den : 0.0;
    }
    sp.inverse(F, out);
  };

  if (phit.size() != N) phit.assign(N, 0.0);
  std::vector<double> r(N), z, pvec, Ap;
  apply(phit, r);
  for (std::size_t i = 0; i < N; ++i) r[i] = b[i] - r[i];
  precond(r, z);
  pvec = z;
  double rz = dot(r, z);
  int it = 0;
  const double cell = sp.cell();
  for (; it < 300; ++it) {
    double rn = std::sqrt(dot(r, r) * cell);
    if (rn <= res_target) break;
    apply(pvec, Ap);
    const double pAp = dot(pvec, Ap);
    if (!(pAp > 0.0)) break;
    const double alpha = rz / pAp;
    for (std::size_t i = 0; i < N; ++i) {
      phit[i] += alpha * pvec[i];
      r[i] -= alpha * Ap[i];
    }
    precond(r, z);
    const double rz2 = dot(r, z);
    const double beta = rz2 / rz;
    rz = rz2;
    for (std::size_t i = 0; i < N; ++i) pvec[i] = z[i] + beta * pvec[i];
  }
  // mean-zero gauge
  double mean = 0.0;
  for (double v : phit) mean += v;
  mean /= double(N);
  for (auto& v : phit) v -= mean;
  return it;
}

}  // namespace

MinimizationReport Minimizer2D::minimize(const TorusField2D* warm_start) const {
  MinimizationReport rep;
  rep.p_target = p_;
  rep.eps_schedule = opts_.eps_schedule;
  if (p_ == 0.0) {
    rep.field = ansatz_from_lump();
    rep.p_achieved = 0.0;
    rep.c = 0.0;
    rep.E_tilde = 0.0;
    rep.E_reg = 0.0;
    rep.E_plain = 0.0;
    rep.el_residual = 0.0;
    rep.converged = true;
    return rep;
  }

  const std::size_t N = sp_->size();
  TorusField2D f;
  if (warm_start && warm_start->N1 == N1_ && warm_start->N2 == N2_ &&
      std::abs(warm_start->n - n_torus_) < 1e-12 * n_torus_) {
    f = *warm_start;
    double mean = 0.0;
    for (double v : f.phi) mean += v;
    mean /= double(N);
    for (auto& v : f.phi) v -= mean;
  } else {
    f = ansatz_from_lump();
  }

  std::vector<double> phit;  // phi = c * phit, warm-started across iterations
  std::vector<double> gx, d1rho, tmp;
  const double kp1 = model_.K(1.0);
  const double gp1 = ext_.g1(1.0);

  auto reduced_eval = [&](const std::vector<double>& rho, double eps_reg,
                          std::vector<double>& phi_out, double& c_out, double& Ereg_out,
                          double res_target) {
    solve_phi_tilde(*sp_, cutoff_, rho, eps_reg, phit, res_target);
    sp_->d1(phit, gx);
    double Pt = 0.0;
    for (std::size_t i = 0; i < N; ++i) Pt += (rho[i] - 1.0) * gx[i];
    Pt *= sp_->cell();
    if (!(std::abs(Pt) > 1e-300))
      throw Error(Err::ConstraintSingular, "momentum insensitive to the potential field");
    c_out = p_ / Pt;
    phi_out.resize(N);
    for (std::size_t i = 0; i < N; ++i) phi_out[i] = c_out * phit[i];
    TorusField2D trial;
    trial.n = n_torus_;
    trial.N1 = N1_;
    trial.N2 = N2_;
    trial.rho = rho;
    trial.phi = phi_out;
    double ereg = 0.0;
    modified_energy(trial, eps_reg, &ereg);
    Ereg_out = ereg;
  };

  auto reduced_gradient = [&](const std::vector<double>& rho, const std::vector<double>& phi,
                              double c, double eps_reg, std::vector<double>& g) {
    std::vector<double> px, py, rx, ry, lr;
    sp_->d1(phi, px);
    sp_->d2(phi, py);
    sp_->d1(rho, rx);
    sp_->d2(rho, ry);
    sp_->laplacian(rho, lr);
    g.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
      const auto cv = chi(cutoff_, rho[i]);
      const double Kc = model_.K(cv.value);
      const double Kc1 = model_.K1(cv.value) * cv.deriv;
      g[i] = 0.5 * cv.deriv * (px[i] * px[i] + py[i] * py[i]) - Kc * lr[i] -
             0.5 * Kc1 * (rx[i] * rx[i] + ry[i] * ry[i]) + ext_.g(rho[i]) - c * px[i];
    }
    if (eps_reg > 0.0) {
      sp_->bilaplacian(rho, tmp);
      for (std::size_t i = 0; i < N; ++i) g[i] += eps_reg * tmp[i];
    }
  };

  // Schur-complement preconditioner with a soft-branch floor
  auto precond_apply = [&](const std::vector<double>& g, double c, double eps_reg,
                           std::vector<double>& out) {
    std::vector<std::complex<double>> G;
    sp_->forward(g, G);
    const double cc = std::min(c, 0.999999);
    const double floor = 4.0 * (1.0 - cc * cc);
    for (std::size_t j = 0; j < sp_->nk(); ++j) {
      const double ks = sp_->ksq(j);
      const double k1 = sp_->k1d(j);
      const double dphi = ks + eps_reg * ks * ks;
      double S = gp1 + kp1 * ks + eps_reg * ks * ks;
      if (dphi > 1e-300) S -= cc * cc * k1 * k1 / dphi;
      S = std::max(S, floor);
      G[j] /= S;
    }
    sp_->inverse(G, out);
  };

  std::vector<double> rho = f.rho;
  std::vector<double> phi, g;
  double c = 0.0, Ereg = 0.0;
  long long total_iters = 0;
  const double sqrt_p = std::sqrt(p_);
  bool all_converged = true;

  for (double eps_reg : opts_.eps_schedule) {
    const double res_target = 0.02 * opts_.tol * sqrt_p;
    reduced_eval(rho, eps_reg, phi, c, Ereg, res_target);
    reduced_gradient(rho, phi, c, eps_reg, g);

    std::deque<std::vector<double>> Svec, Yvec;
    std::deque<double> Rho;
    double el = 1e300;
    double eta = 1.0;
    long long it = 0;
    for (; it < opts_.max_iter; ++it) {
      // residual norm against ||dP||
      sp_->d1(rho, d1rho);
      sp_->d1(phi, gx);
      double den = 0.0;
      for (std::size_t i = 0; i < N; ++i) den += gx[i] * gx[i] + d1rho[i] * d1rho[i];
      den = std::sqrt(den * sp_->cell());
      el = std::sqrt(dot(g, g) * sp_->cell()) / den;
      if (el < opts_.tol) break;

      // two-loop L-BFGS with the preconditioner as the initial metric
      std::vector<double> q = g;
      std::vector<double> alphas(Svec.size());
      for (std::size_t m = Svec.size(); m-- > 0;) {
        alphas[m] = Rho[m] * dot(Svec[m], q);
        for (std::size_t i = 0; i < N; ++i) q[i] -= alphas[m] * Yvec[m][i];
      }
      std::vector<double> d;
      precond_apply(q, c, eps_reg, d);
      for (std::size_t m = 0; m < Svec.size(); ++m) {
        const double beta = Rho[m] * dot(Yvec[m], d);
        for (std::size_t i = 0; i < N; ++i) d[i] += (alphas[m] - beta) * Svec[m][i];
      }
      double dec = dot(g, d) * sp_->cell();
      if (!(dec > 0.0)) {
        precond_apply(g, c, eps_reg, d);
        dec = dot(g, d) * sp_->cell();
        Svec.clear();
        Yvec.clear();
        Rho.clear();
      }

      bool accepted = false;
      std::vector<double> rho_t(N), phi_t, g_t;
      double c_t = 0.0, Ereg_t = 0.0;
      for (int bt = 0; bt < 40; ++bt) {
        for (std::size_t i = 0; i < N; ++i) rho_t[i] = rho[i] - eta * d[i];
        reduced_eval(rho_t, eps_reg, phi_t, c_t, Ereg_t, res_target);
        if (Ereg_t <= Ereg - 1e-4 * eta * dec) {
          accepted = true;
          break;
        }
        eta *= 0.5;
      }
      if (!accepted) break;
      double rmin = 1e300;
      for (double r : rho_t) rmin = std::min(rmin, r);
      if (!(rmin > 0.0))
        throw Error(Err::RhoNonPositive, "density lost positivity during descent");

      reduced_gradient(rho_t, phi_t, c_t, eps_reg, g_t);
      // curvature pair
      std::vector<double> svec(N), yvec(N);
      for (std::size_t i = 0; i < N; ++i) {
        svec[i] = rho_t[i] - rho[i];
        yvec[i] = g_t[i] - g[i];
      }
      const double sy = dot(svec, yvec);
      if (sy > 1e-300) {
        Svec.push_back(std::move(svec));
        Yvec.push_back(std::move(yvec));
        Rho.push_back(1.0 / sy);
        if (int(Svec.size()) > opts_.lbfgs_memory) {
          Svec.pop_front();
          Yvec.pop_front();
          Rho.pop_front();
        }
      }
      rho.swap(rho_t);
      phi.swap(phi_t);
      g.swap(g_t);
      c = c_t;
      Ereg = Ereg_t;
      eta = std::min(eta * 1.6, 1.0);
    }
    total_iters += it;
    if (el >= opts_.tol) {
      all_converged = false;
      rep.flag = (it >= opts_.max_iter) ? "MaxIterations" : "LineSearchStall";
    }
  }

  rep.field.n = n_torus_;
  rep.field.N1 = N1_;
  rep.field.N2 = N2_;
  rep.field.rho = rho;
  rep.field.phi = phi;
  rep.p_achieved = momentum(rep.field);
  rep.c = c;
  rep.E_tilde = modified_energy(rep.field, 0.0, nullptr);
  double er = 0.0;
  modified_energy(rep.field, opts_.eps_schedule.back(), &er);
  rep.E_reg = er;
  rep.E_plain = plain_energy(rep.field);
  // full-system residual for the report
  {
    std::vector<double> dE_rho, dE_phi, dP_rho, dP_phi;
    variational_gradient(rep.field, 0.0, dE_rho, dE_phi, dP_rho, dP_phi);
    const double den = dot(dP_rho, dP_rho) + dot(dP_phi, dP_phi);
    const double cproj = (dot(dE_rho, dP_rho) + dot(dE_phi, dP_phi)) / den;
    double nr = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double r1 = dE_rho[i] - cproj * dP_rho[i];
      const double r2 = dE_phi[i] - cproj * dP_phi[i];
      nr += r1 * r1 + r2 * r2;
    }
    rep.el_residual = std::sqrt(nr / den);
    rep.c = cproj;
  }
  double sup = 0.0;
  for (double r : rho) sup = std::max(sup, std::abs(r - 1.0));
  rep.sup_defect = sup;
  rep.iterations = total_iters;
  rep.converged = all_converged && rep.el_residual < opts_.tol;
  return rep;
}

PohozaevResiduals pohozaev_check_2d(const Minimizer2D& mz, const MinimizationReport& rep) {
  const auto& sp = mz.spectral();
  const auto& f = rep.field;
  const auto& m = mz.model();
  const CutoffSpec& cspec = mz.cutoff();
  const ExtendedPotential& ext = mz.extension();
  std::vector<double> gx, gy, rx, ry;
  sp.d1(f.phi, gx);
  sp.d2(f.phi, gy);
  sp.d1(f.rho, rx);
  sp.d2(f.rho, ry);
  double i1 = 0.0, i2 = 0.0, igrad = 0.0, iG = 0.0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    const double cv = chi(cspec, f.rho[i]).value;
    const double Kc = m.K(cv);
    i1 += cv * gx[i] * gx[i] + Kc * rx[i] * rx[i];
    i2 += cv * gy[i] * gy[i] + Kc * ry[i] * ry[i];
    igrad += cv * (gx[i] * gx[i] + gy[i] * gy[i]);
    iG += ext.G(f.rho[i]);
  }
  const double cell = sp.cell();
  i1 *= cell;
  i2 *= cell;
  igrad *= cell;
  iG *= cell;
  const double E = rep.E_tilde;
  const double cP = rep.c * rep.p_achieved;
  PohozaevResiduals out;
  auto rel = [](double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return (s > 1e-300) ? (a - b) / s : 0.0;
  };
  out.poho1 = rel(E, i1);
  out.poho2 = rel(E, i2 + cP);
  out.energie1 = rel(cP, igrad);
  out.poho3 = rel(cP, 2.0 * iG);
  return out;
}

EllipticSmallness elliptic_smallness_check(const MinimizationReport& rep) {
  EllipticSmallness out;
  out.sup_defect = rep.sup_defect;
  out.bound_ratio = (rep.E_tilde > 0.0) ? rep.sup_defect / std::sqrt(rep.E_tilde) : 0.0;
  out.outside_window = rep.sup_defect >= 1.0 / 3.0;
  return out;
}

EnergyCurve sweep_energy_curve(const FluidModel& model, const CutoffSpec& cutoff,
                               const std::vector<double>& p_list, const SweepOptions& opts,
                               std::vector<MinimizationReport>* reports) {
  EnergyCurve curve;
  std::vector<MinimizationReport> reps;
  for (double p : p_list) {
    EnergyCurveRow row;
    row.p = p;
    try {
      Minimizer2D mz(model, cutoff, p, opts.minimize);
      auto rep = mz.minimize();
      row.E_tilde_min = rep.E_tilde;
      row.c = rep.c;
      row.sup_defect = rep.sup_defect;
      if (p == 0.0) row.flags = "c-undefined";
      if (!rep.converged && row.flags.empty()) row.flags = rep.flag.empty() ? "NotConverged" : rep.flag;
      reps.push_back(std::move(rep));
    } catch (const Error& e) {
      row.flags = err_name(e.code());
      reps.emplace_back();
    }
    curve.rows.push_back(row);
  }
  // diagnostics on the clean rows
  std::vector<const EnergyCurveRow*> clean;
  for (const auto& r : curve.rows)
    if (r.flags.empty()) clean.push_back(&r);

  // cubic fit E ~ a1 p + a3 p^3 (least squares in the two-parameter basis)
  if (clean.size() >= 2) {
    double s11 = 0, s13 = 0, s33 = 0, b1 = 0, b3 = 0;
    for (auto* r : clean) {
      const double p1 = r->p, p3 = p1 * p1 * p1;
      s11 += p1 * p1;
      s13 += p1 * p3;
      s33 += p3 * p3;
      b1 += p1 * r->E_tilde_min;
      b3 += p3 * r->E_tilde_min;
    }
    const double det = s11 * s33 - s13 * s13;
    if (std::abs(det) > 1e-300) {
      curve.fit_a1 = (b1 * s33 - b3 * s13) / det;
      curve.fit_a3 = (s11 * b3 - s13 * b1) / det;
    }
  }
  // log-log slope of 1 - c vs p
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (auto* r : clean) {
      if (!(r->c > 0.0 && r->c < 1.0)) continue;
      const double X = std::log(r->p), Y = std::log(1.0 - r->c);
      sx += X;
      sy += Y;
      sxx += X * X;
      sxy += X * Y;
      ++cnt;
    }
    if (cnt >= 2)
      curve.loglog_slope_one_minus_c = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }
  // second differences / dp^2 on uniformly spaced interior nodes
  for (std::size_t i = 1; i + 1 < clean.size(); ++i) {
    const double dp1 = clean[i]->p - clean[i - 1]->p;
    const double dp2 = clean[i + 1]->p - clean[i]->p;
    if (std::abs(dp1 - dp2) < 1e-12) {
      curve.second_differences.push_back(
          (clean[i + 1]->E_tilde_min - 2.0 * clean[i]->E_tilde_min +
           clean[i - 1]->E_tilde_min) /
          (dp1 * dp1));
    }
  }
  // subadditivity on pairs whose sum is also a row
  for (std::size_t i = 0; i < clean.size(); ++i) {
    for (std::size_t j = i; j < clean.size(); ++j) {
      const double psum = clean[i]->p + clean[j]->p;
      for (auto* r : clean) {
        if (std::abs(r->p - psum) < 1e-12) {
          curve.subadditivity_margins.push_back(clean[i]->E_tilde_min +
                                                clean[j]->E_tilde_min - r->E_tilde_min);
        }
      }
    }
  }
  // monotone 1-Lipschitz gaps
  for (std::size_t i = 0; i + 1 < clean.size(); ++i) {
    curve.lipschitz_ratios.push_back(
        (clean[i + 1]->E_tilde_min - clean[i]->E_tilde_min) / (clean[i + 1]->p - clean[i]->p));
  }
  curve.min_sup_ratio = 1e300;
  curve.max_sup_ratio = 0.0;
  for (auto* r : clean) {
    if (r->p <= 0.0) continue;
    const double ratio = r->sup_defect / (r->p * r->p);
    curve.min_sup_ratio = std::min(curve.min_sup_ratio, ratio);
    curve.max_sup_ratio = std::max(curve.max_sup_ratio, ratio);
  }
  if (reports) *reports = std::move(reps);
  return curve;
}

}  // namespace ek
