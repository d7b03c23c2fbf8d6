#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hardyloc/grid.hpp"

namespace hardyloc {

// cell: each lattice weight is the exact integral of k over the offset cell (the diagonal cell
// included, as a convergent oscillatory integral). point: k at the cell centre times h^n, diagonal
// dropped; it aliases the phase wherever |z|^2 < ~h and does not converge under refinement.
enum class KernelRule { cell, point };

// k(z) = exp(i |z|^{-theta}) |z|^{-n} v(|z|), v = 1 on |z| <= 1, 0 on |z| >= 2.
struct StronglySingularKernel {
  double theta = 1.0;
  KernelRule rule = KernelRule::cell;
  int excluded_radius = -1;  // cells with max |offset| <= this are dropped (point rule: at least the diagonal)
  int cutoff_order = 3;     // smoothstep order of v

  double cutoff(double r) const;
  cplx operator()(const Point& z, int n) const;
  static constexpr double outer = 2.0;
};

// Symmetric lattice sum over the cells meeting the kernel's support. Throws when
// supp f + B(0, 2) leaves the grid.
SampledFunction strongly_singular_apply(const SampledFunction& f, const StronglySingularKernel& k);

// b Tf - T(bf)
SampledFunction commutator_apply(const SampledFunction& b, const SampledFunction& f,
                                 const StronglySingularKernel& k);
// sum_y (b(x) - b(y)) k(x - y) f(y) h^n, the integrand form.
SampledFunction commutator_integrand(const SampledFunction& b, const SampledFunction& f,
                                     const StronglySingularKernel& k);

struct Symbol {
  std::string name;
  std::function<cplx(const Point& x, const Point& xi)> eval;
  double order = 0.0;
  double delta = 0.0;
  bool x_independent = false;
};

Symbol symbol_identity();
Symbol symbol_coefficient();           // 1 + cos(x_1) / 2
Symbol symbol_imaginary_power(double t);  // (1 + |xi|^2)^{-it}
Symbol symbol_mixed();                 // 1 + sin(x_1) |xi|^2 / (2 (1 + |xi|^2))
Symbol parse_symbol(const std::string& desc);

// sup |D_x^a D_xi^b sigma| / (1+|xi|)^{m - b + delta a} along the first axis, a, b <= max_order,
// by central differences over a sample box.
struct SymbolBounds {
  int max_order = 3;
  std::vector<std::vector<double>> C;  // C[a][b]
  bool finite() const;
};
SymbolBounds symbol_derivative_table(const Symbol& s, int n, int max_order = 3, double x_range = 4.0,
                                     double xi_range = 64.0, int samples = 33);

// Frequencies xi_j = j / (2L), j in [-m/2, m/2). Tf(x) = sum_xi sigma(x, xi) e^{2 pi i x xi} fhat(xi) dxi^n.
SampledFunction psdo_apply(const SampledFunction& f, const Symbol& s);
// fhat on the frequency lattice, row-major in (j0, j1) with j shifted by m/2.
std::vector<cplx> grid_fourier(const SampledFunction& f);
double frequency(const Grid& g, int j);  // j in [0, m) maps to (j - m/2) / (2L)

}  // namespace hardyloc
