#pragma once

#include <cmath>
#include <vector>

namespace hardyloc {

// Truncated Taylor polynomial in n <= 2 variables, total degree <= D.
// Coefficient (a, b) multiplies dx^a dy^b.
class Jet {
 public:
  Jet() = default;
  Jet(int n, int D, double c0 = 0.0) : n_(n), D_(D), c_(std::size_t(D + 1) * (D + 1), 0.0) {
    c_[0] = c0;
  }
  static Jet variable(int n, int D, double value, int axis) {
    Jet j(n, D, value);
    if (D >= 1) j.at(axis == 0 ? 1 : 0, axis == 0 ? 0 : 1) = 1.0;
    return j;
  }

  int n() const { return n_; }
  int degree() const { return D_; }
  double value() const { return c_[0]; }
  double& at(int a, int b) { return c_[std::size_t(a) * (D_ + 1) + b]; }
  double at(int a, int b) const { return c_[std::size_t(a) * (D_ + 1) + b]; }
  bool valid(int a, int b) const { return a + b <= D_ && (n_ == 2 || b == 0); }

  // d^a/dx^a d^b/dy^b at the expansion point.
  double derivative(int a, int b) const { return at(a, b) * fact(a) * fact(b); }

  Jet& operator+=(const Jet& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(double s, Jet a) {
    a *= -1.0;
    return a += s;
  }

  friend Jet operator*(const Jet& x, const Jet& y) {
    Jet r(x.n_, x.D_);
    const int D = x.D_;
    for (int a1 = 0; a1 <= D; ++a1)
      for (int b1 = 0; a1 + b1 <= D; ++b1) {
        const double u = x.at(a1, b1);
        if (u == 0.0) continue;
        for (int a2 = 0; a1 + a2 + b1 <= D; ++a2)
          for (int b2 = 0; a1 + a2 + b1 + b2 <= D; ++b2) r.at(a1 + a2, b1 + b2) += u * y.at(a2, b2);
      }
    return r;
  }

  friend Jet exp(const Jet& x) {
    Jet nil = x;
    nil.c_[0] = 0.0;
    Jet sum(x.n_, x.D_, 1.0), term(x.n_, x.D_, 1.0);
    for (int k = 1; k <= x.D_; ++k) {
      term = term * nil;
      term *= 1.0 / k;
      sum += term;
    }
    return sum * std::exp(x.c_[0]);
  }

  friend Jet reciprocal(const Jet& x) {
    const double c0 = x.c_[0];
    Jet nil = x;
    nil.c_[0] = 0.0;
    nil *= -1.0 / c0;
    Jet sum(x.n_, x.D_, 1.0), term(x.n_, x.D_, 1.0);
    for (int k = 1; k <= x.D_; ++k) {
      term = term * nil;
      sum += term;
    }
    return sum * (1.0 / c0);
  }

 private:
  static double fact(int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
  }
  int n_ = 1, D_ = 0;
  std::vector<double> c_;
};

}  // namespace hardyloc
