#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace ek {

// Periodic pseudo-spectral workspace on [0, length). Plans are created with
// FFTW_ESTIMATE so results are bitwise reproducible run to run.
class Spectral1D {
 public:
  Spectral1D(int n, double length);
  ~Spectral1D();
  Spectral1D(const Spectral1D&) = delete;
  Spectral1D& operator=(const Spectral1D&) = delete;

  int n() const { return n_; }
  double length() const { return length_; }
  double dx() const { return length_ / n_; }
  int nk() const { return n_ / 2 + 1; }
  // wavenumber of the r2c bin (Nyquist included)
  double k(int j) const { return 2.0 * 3.14159265358979323846 * j / length_; }

  void forward(const std::vector<double>& f, std::vector<std::complex<double>>& F) const;
  void inverse(const std::vector<std::complex<double>>& F, std::vector<double>& f) const;

  // spectral derivative; odd orders zero the Nyquist bin (skew-adjointness)
  void deriv(const std::vector<double>& f, std::vector<double>& out, int order = 1) const;
  // zero all modes with |k| above 2/3 of the Nyquist
  void dealias(std::vector<double>& f) const;

 private:
  int n_;
  double length_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class Spectral2D {
 public:
  // fields stored row-major as f[i1 * n2 + i2] on [0, L)^2
  Spectral2D(int n1, int n2, double length);
  ~Spectral2D();
  Spectral2D(const Spectral2D&) = delete;
  Spectral2D& operator=(const Spectral2D&) = delete;

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  double length() const { return length_; }
  double h1() const { return length_ / n1_; }
  double h2() const { return length_ / n2_; }
  double cell() const { return h1() * h2(); }
  std::size_t size() const { return std::size_t(n1_) * n2_; }
  std::size_t nk() const { return std::size_t(n1_) * (n2_ / 2 + 1); }

  void forward(const std::vector<double>& f, std::vector<std::complex<double>>& F) const;
  void inverse(const std::vector<std::complex<double>>& F, std::vector<double>& f) const;

  void d1(const std::vector<double>& f, std::vector<double>& out) const;
  void d2(const std::vector<double>& f, std::vector<double>& out) const;
  void laplacian(const std::vector<double>& f, std::vector<double>& out) const;
  void bilaplacian(const std::vector<double>& f, std::vector<double>& out) const;

  // Nyquist-zeroed wavenumbers per r2c bin (kk index = i1*(n2/2+1)+i2)
  double k1d(std::size_t kk) const { return k1_[kk / (n2_ / 2 + 1)]; }
  double k2d(std::size_t kk) const { return k2_[kk % (n2_ / 2 + 1)]; }
  double ksq(std::size_t kk) const {
    const double a = k1d(kk), b = k2d(kk);
    return a * a + b * b;
  }

 private:
  int n1_, n2_;
  double length_;
  std::vector<double> k1_, k2_;  // Nyquist-zeroed
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ek
