#include "ek/fourier.hpp"

#include <fftw3.h>

#include <cstring>

namespace ek {

struct Spectral1D::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;
};

Spectral1D::Spectral1D(int n, double length) : n_(n), length_(length), impl_(new Impl) {
  impl_->real = fftw_alloc_real(n);
  impl_->spec = fftw_alloc_complex(n / 2 + 1);
  impl_->fwd = fftw_plan_dft_r2c_1d(n, impl_->real, impl_->spec, FFTW_ESTIMATE);
  impl_->bwd = fftw_plan_dft_c2r_1d(n, impl_->spec, impl_->real, FFTW_ESTIMATE);
}

Spectral1D::~Spectral1D() {
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->bwd);
  fftw_free(impl_->real);
  fftw_free(impl_->spec);
}

void Spectral1D::forward(const std::vector<double>& f,
                         std::vector<std::complex<double>>& F) const {
  std::memcpy(impl_->real, f.data(), sizeof(double) * n_);
  fftw_execute(impl_->fwd);
  F.resize(nk());
  const double s = 1.0 / n_;
  for (int j = 0; j < nk(); ++j)
    F[j] = std::complex<double>(impl_->spec[j][0] * s, impl_->spec[j][1] * s);
}

void Spectral1D::inverse(const std::vector<std::complex<double>>& F,
                         std::vector<double>& f) const {
  for (int j = 0; j < nk(); ++j) {
    impl_->spec[j][0] = F[j].real();
    impl_->spec[j][1] = F[j].imag();
  }
  fftw_execute(impl_->bwd);
  f.resize(n_);
  std::memcpy(f.data(), impl_->real, sizeof(double) * n_);
}

void Spectral1D::deriv(const std::vector<double>& f, std::vector<double>& out,
                       int order) const {
  std::vector<std::complex<double>> F;
  forward(f, F);
  for (int j = 0; j < nk(); ++j) {
    std::complex<double> m(1.0, 0.0);
    const std::complex<double> ik(0.0, k(j));
    for (int o = 0; o < order; ++o) m *= ik;
    F[j] *= m;
  }
  if (order % 2 == 1 && n_ % 2 == 0) F[nk() - 1] = 0.0;
  inverse(F, out);
}

void Spectral1D::dealias(std::vector<double>& f) const {
  std::vector<std::complex<double>> F;
  forward(f, F);
  const int cut = n_ / 3;
  for (int j = cut + 1; j < nk(); ++j) F[j] = 0.0;
  inverse(F, f);
}

struct Spectral2D::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;
};

Spectral2D::Spectral2D(int n1, int n2, double length)
    : n1_(n1), n2_(n2), length_(length), impl_(new Impl) {
  impl_->real = fftw_alloc_real(std::size_t(n1) * n2);
  impl_->spec = fftw_alloc_complex(std::size_t(n1) * (n2 / 2 + 1));
  impl_->fwd = fftw_plan_dft_r2c_2d(n1, n2, impl_->real, impl_->spec, FFTW_ESTIMATE);
  impl_->bwd = fftw_plan_dft_c2r_2d(n1, n2, impl_->spec, impl_->real, FFTW_ESTIMATE);
  const double two_pi = 2.0 * 3.14159265358979323846;
  k1_.resize(n1);
  for (int j = 0; j < n1; ++j) {
    const int jj = (j <= n1 / 2) ? j : j - n1;
    k1_[j] = two_pi * jj / length_;
  }
  if (n1 % 2 == 0) k1_[n1 / 2] = 0.0;
  k2_.resize(n2 / 2 + 1);
  for (int j = 0; j <= n2 / 2; ++j) k2_[j] = two_pi * j / length_;
  if (n2 % 2 == 0) k2_[n2 / 2] = 0.0;
}

Spectral2D::~Spectral2D() {
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->bwd);
  fftw_free(impl_->real);
  fftw_free(impl_->spec);
}

void Spectral2D::forward(const std::vector<double>& f,
                         std::vector<std::complex<double>>& F) const {
  std::memcpy(impl_->real, f.data(), sizeof(double) * size());
  fftw_execute(impl_->fwd);
  F.resize(nk());
  const double s = 1.0 / double(size());
  for (std::size_t j = 0; j < nk(); ++j)
    F[j] = std::complex<double>(impl_->spec[j][0] * s, impl_->spec[j][1] * s);
}

void Spectral2D::inverse(const std::vector<std::complex<double>>& F,
                         std::vector<double>& f) const {
  for (std::size_t j = 0; j < nk(); ++j) {
    impl_->spec[j][0] = F[j].real();
    impl_->spec[j][1] = F[j].imag();
  }
  fftw_execute(impl_->bwd);
  f.resize(size());
  std::memcpy(f.data(), impl_->real, sizeof(double) * size());
}

void Spectral2D::d1(const std::vector<double>& f, std::vector<double>& out) const {
  std::vector<std::complex<double>> F;
  forward(f, F);
  for (std::size_t j = 0; j < nk(); ++j) F[j] *= std::complex<double>(0.0, k1d(j));
  inverse(F, out);
}

void Spectral2D::d2(const std::vector<double>& f, std::vector<double>& out) const {
  std::vector<std::complex<double>> F;
  forward(f, F);
  for (std::size_t j = 0; j < nk(); ++j) F[j] *= std::complex<double>(0.0, k2d(j));
  inverse(F, out);
}

void Spectral2D::laplacian(const std::vector<double>& f, std::vector<double>& out) const {
  std::vector<std::complex<double>> F;
  forward(f, F);
  for (std::size_t j = 0; j < nk(); ++j) F[j] *= -ksq(j);
  inverse(F, out);
}

void Spectral2D::bilaplacian(const std::vector<double>& f, std::vector<double>& out) const {
  std::vector<std::complex<double>> F;
  forward(f, F);
  for (std::size_t j = 0; j < nk(); ++j) F[j] *= ksq(j) * ksq(j);
  inverse(F, out);
}

}  // namespace ek
