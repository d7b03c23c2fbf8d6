#include "hardyloc/grid.hpp"

#include <cmath>

#include "hardyloc/compensated.hpp"

namespace hardyloc {

Grid make_grid(int n, double L, int m) {
  if (n != 1 && n != 2) throw Error("grid dimension must be 1 or 2");
  if (m < 8) throw Error("grid needs at least 8 points per axis");
  if (!(L > 0.0) || !std::isfinite(L)) throw Error("grid half-width must be positive");
  return Grid{n, L, m, 2.0 * L / m};
}

int Grid::cell_of(double x) const { return int(std::floor((x + L) / h)); }

double Cube::diam() const { return side * std::sqrt(double(n)); }

bool Cube::contains(const Point& x, double tol) const {
  for (int d = 0; d < n; ++d)
    if (std::abs(x[d] - center[d]) > 0.5 * side + tol) return false;
  return true;
}

Cube to_cube(const Grid& g, const CellBox& b) {
  Cube q;
  q.n = g.n;
  q.side = b.side * g.h;
  for (int d = 0; d < g.n; ++d) q.center[d] = -g.L + (b.lo[d] + 0.5 * b.side) * g.h;
  return q;
}

std::size_t IndexRange::count(int n) const {
  if (empty(n)) return 0;
  std::size_t c = std::size_t(hi[0] - lo[0]);
  if (n == 2) c *= std::size_t(hi[1] - lo[1]);
  return c;
}

IndexRange cells_in(const Grid& g, const Cube& q) {
  IndexRange r;
  const double tol = 1e-9 * g.h;
  for (int d = 0; d < g.n; ++d) {
    // centre x_j = -L + (j + 1/2) h lies in [a, b]  <=>  j in [ceil((a+L)/h - 1/2), floor((b+L)/h - 1/2)]
    double a = q.lo(d) - tol, b = q.hi(d) + tol;
    int lo = int(std::ceil((a + g.L) / g.h - 0.5));
    int hi = int(std::floor((b + g.L) / g.h - 0.5)) + 1;
    r.lo[d] = std::max(lo, 0);
    r.hi[d] = std::min(hi, g.m);
  }
  return r;
}

SampledFunction::SampledFunction(const Grid& g, std::vector<cplx> v, bool is_real)
    : grid(g), values(std::move(v)), real(is_real) {
  if (values.size() != g.size()) throw Error("sample count does not match grid");
}

SampledFunction SampledFunction::from(const Grid& g,
                                      const std::function<double(const Point&)>& fn) {
  SampledFunction f(g, true);
  for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = fn(g.point(i));
  return f;
}

SampledFunction SampledFunction::from_complex(const Grid& g,
                                              const std::function<cplx(const Point&)>& fn) {
  SampledFunction f(g, false);
  for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = fn(g.point(i));
  return f;
}

SampledFunction SampledFunction::from_real(const Grid& g, const std::vector<double>& v) {
  if (v.size() != g.size()) throw Error("sample count does not match grid");
  SampledFunction f(g, true);
  for (std::size_t i = 0; i < v.size(); ++i) f.values[i] = v[i];
  return f;
}

std::vector<double> SampledFunction::real_part() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i].real();
  return out;
}

std::vector<double> SampledFunction::abs() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = real ? std::abs(values[i].real()) : std::abs(values[i]);
  return out;
}

double SampledFunction::max_abs() const {
  double m = 0.0;
  for (auto& v : values) m = std::max(m, real ? std::abs(v.real()) : std::abs(v));
  return m;
}

bool SampledFunction::finite() const {
  for (auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

void SampledFunction::validate() const {
  if (values.size() != grid.size()) throw Error("sample count does not match grid");
  if (!finite()) throw Error("non-finite sample");
  if (real)
    for (auto& v : values)
      if (v.imag() != 0.0) throw Error("real function with nonzero imaginary part");
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& o) {
  if (grid != o.grid) throw Error("grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  real = real && o.real;
  return *this;
}

SampledFunction& SampledFunction::operator-=(const SampledFunction& o) {
  if (grid != o.grid) throw Error("grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  real = real && o.real;
  return *this;
}

SampledFunction& SampledFunction::operator*=(cplx c) {
  for (auto& v : values) v *= c;
  real = real && c.imag() == 0.0;
  if (real)
    for (auto& v : values) v = cplx(v.real(), 0.0);
  return *this;
}

SampledFunction& SampledFunction::operator*=(double c) {
  for (auto& v : values) v = real ? cplx(v.real() * c, 0.0) : v * c;
  return *this;
}

SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
SampledFunction operator*(cplx c, SampledFunction a) { return a *= c; }
SampledFunction operator*(double c, SampledFunction a) { return a *= c; }

SampledFunction multiply(const SampledFunction& a, const SampledFunction& b) {
  if (a.grid != b.grid) throw Error("grid mismatch");
  SampledFunction out(a.grid, a.real && b.real);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.values[i] = a.values[i] * b.values[i];
    if (out.real) out.values[i] = cplx(out.values[i].real(), 0.0);
  }
  return out;
}

cplx integrate(const SampledFunction& f) {
  DD re, im;
  for (auto& v : f.values) {
    re += v.real();
    im += v.imag();
  }
  double w = f.grid.cell_volume();
  return cplx(re.value() * w, im.value() * w);
}

cplx integrate(const SampledFunction& f, const Cube& q, bool* empty) {
  IndexRange r = cells_in(f.grid, q);
  if (empty) *empty = r.empty(f.grid.n);
  DD re, im;
  for_each_cell(f.grid, r, [&](std::size_t i) {
    re += f.values[i].real();
    im += f.values[i].imag();
  });
  double w = f.grid.cell_volume();
  return cplx(re.value() * w, im.value() * w);
}

std::vector<std::size_t> support_cells(const SampledFunction& f, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f.values[i]) > tol) out.push_back(i);
  return out;
}

}  // namespace hardyloc
