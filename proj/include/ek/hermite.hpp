#pragma once

#include <cstddef>
#include <vector>

namespace ek {

// Two-point Hermite interpolant: matches values and the first `order`
// derivatives at x0 and x1 (degree 2*order+1). Built by Newton divided
// differences with repeated nodes, evaluated in normalized coordinates
// t = (x - x0)/(x1 - x0) for stability on narrow intervals.
class HermiteBlend {
 public:
  // f0[j] = d^j f / dx^j at x0, j = 0..order; same for f1 at x1.
  HermiteBlend(double x0, double x1, const std::vector<double>& f0,
               const std::vector<double>& f1)
      : x0_(x0), x1_(x1), h_(x1 - x0) {
    const std::size_t m = f0.size();
    const std::size_t n = 2 * m;
    nodes_.resize(n);
    std::vector<double> fac(m, 1.0);
    for (std::size_t j = 1; j < m; ++j) fac[j] = fac[j - 1] * double(j);
    // divided-difference table with repeated nodes; derivatives scaled by h^j
    std::vector<std::vector<double>> dd(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      const bool left = i < m;
      nodes_[i] = left ? 0.0 : 1.0;
      dd[i][0] = left ? f0[0] : f1[0];
    }
    double hp = 1.0;
    std::vector<double> s0(m), s1(m);
    for (std::size_t j = 0; j < m; ++j) {
      s0[j] = f0[j] * hp / fac[j];
      s1[j] = f1[j] * hp / fac[j];
      hp *= h_;
    }
    for (std::size_t col = 1; col < n; ++col) {
      for (std::size_t i = 0; i + col < n; ++i) {
        const double xa = nodes_[i], xb = nodes_[i + col];
        if (xa == xb) {
          dd[i][col] = (xa == 0.0) ? s0[col] : s1[col];
        } else {
          dd[i][col] = (dd[i + 1][col - 1] - dd[i][col - 1]) / (xb - xa);
        }
      }
    }
    coef_.resize(n);
    for (std::size_t j = 0; j < n; ++j) coef_[j] = dd[0][j];
  }

  double operator()(double x) const {
    const double t = (x - x0_) / h_;
    const std::size_t n = coef_.size();
    double p = coef_[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) p = coef_[j] + (t - nodes_[j]) * p;
    return p;
  }

  double deriv(double x) const {
    const double t = (x - x0_) / h_;
    const std::size_t n = coef_.size();
    double p = coef_[n - 1], dp = 0.0;
    for (std::size_t j = n - 1; j-- > 0;) {
      dp = p + (t - nodes_[j]) * dp;
      p = coef_[j] + (t - nodes_[j]) * p;
    }
    return dp / h_;
  }

  // Antiderivative vanishing at x0 (exact polynomial integration via
  // conversion of the Newton form to monomials in t).
  double integral_from_x0(double x) const {
    const std::size_t n = coef_.size();
    std::vector<double> mono(n, 0.0);   // monomial coefficients in t
    std::vector<double> basis{1.0};     // product (t-nodes[0])...(t-nodes[j-1])
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < basis.size(); ++i) mono[i] += coef_[j] * basis[i];
      if (j + 1 < n) {
        std::vector<double> nb(basis.size() + 1, 0.0);
        for (std::size_t i = 0; i < basis.size(); ++i) {
          nb[i + 1] += basis[i];
          nb[i] -= nodes_[j] * basis[i];
        }
        basis.swap(nb);
      }
    }
    const double t = (x - x0_) / h_;
    double s = 0.0, tp = t;
    for (std::size_t i = 0; i < n; ++i) {
      s += mono[i] * tp / double(i + 1);
      tp *= t;
    }
    return s * h_;
  }

  double x0() const { return x0_; }
  double x1() const { return x1_; }

 private:
  double x0_, x1_, h_;
  std::vector<double> nodes_;
  std::vector<double> coef_;
};

}  // namespace ek
