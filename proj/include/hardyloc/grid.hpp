#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hardyloc {

using cplx = std::complex<double>;
using Point = std::array<double, 2>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform cell-centred grid on [-L, L]^n.
struct Grid {
  int n = 1;
  double L = 1.0;
  int m = 8;
  double h = 0.25;

  std::size_t size() const { return n == 1 ? std::size_t(m) : std::size_t(m) * m; }
  double coord(int j) const { return -L + (j + 0.5) * h; }
  double cell_volume() const { return n == 1 ? h : h * h; }

  // Flat index layout: axis 0 is the slow axis.
  std::size_t index(int i0, int i1 = 0) const {
    return n == 1 ? std::size_t(i0) : std::size_t(i0) * m + i1;
  }
  std::array<int, 2> unravel(std::size_t idx) const {
    if (n == 1) return {int(idx), 0};
    return {int(idx / m), int(idx % m)};
  }
  Point point(std::size_t idx) const {
    auto ij = unravel(idx);
    return {coord(ij[0]), n == 2 ? coord(ij[1]) : 0.0};
  }
  // Index of the cell whose (half-open) extent contains coordinate x, unclamped.
  int cell_of(double x) const;

  bool operator==(const Grid& o) const { return n == o.n && L == o.L && m == o.m; }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

Grid make_grid(int n, double L, int m);

struct DyadicAddress {
  int level = 0;  // side = 2^level cells
  std::array<int, 2> index{0, 0};
};

struct Cube {
  Point center{0.0, 0.0};
  double side = 1.0;
  int n = 1;
  std::optional<DyadicAddress> address;

  double volume() const { return n == 1 ? side : side * side; }
  double diam() const;
  Cube dilate(double lambda) const { return Cube{center, side * lambda, n, std::nullopt}; }
  bool contains(const Point& x, double tol = 0.0) const;
  double lo(int d) const { return center[d] - 0.5 * side; }
  double hi(int d) const { return center[d] + 0.5 * side; }
};

// Grid-aligned cube given by its first cell and side in cells.
struct CellBox {
  std::array<int, 2> lo{0, 0};
  int side = 1;
};

Cube to_cube(const Grid& g, const CellBox& b);

// Per-axis half-open index range of cells whose centre lies in the closed cube,
// clipped to the grid. Empty ranges have lo >= hi.
struct IndexRange {
  std::array<int, 2> lo{0, 0};
  std::array<int, 2> hi{0, 0};
  bool empty(int n) const {
    return hi[0] <= lo[0] || (n == 2 && hi[1] <= lo[1]);
  }
  std::size_t count(int n) const;
};
IndexRange cells_in(const Grid& g, const Cube& q);

template <class F>
void for_each_cell(const Grid& g, const IndexRange& r, F&& fn) {
  if (r.empty(g.n)) return;
  if (g.n == 1) {
    for (int i = r.lo[0]; i < r.hi[0]; ++i) fn(g.index(i));
  } else {
    for (int i = r.lo[0]; i < r.hi[0]; ++i)
      for (int j = r.lo[1]; j < r.hi[1]; ++j) fn(g.index(i, j));
  }
}

struct SampledFunction {
  Grid grid;
  std::vector<cplx> values;
  bool real = true;

  SampledFunction() = default;
  SampledFunction(const Grid& g, bool is_real = true)
      : grid(g), values(g.size(), cplx(0.0)), real(is_real) {}
  SampledFunction(const Grid& g, std::vector<cplx> v, bool is_real);

  static SampledFunction from(const Grid& g, const std::function<double(const Point&)>& fn);
  static SampledFunction from_complex(const Grid& g,
                                      const std::function<cplx(const Point&)>& fn);
  static SampledFunction from_real(const Grid& g, const std::vector<double>& v);

  std::size_t size() const { return values.size(); }
  double re(std::size_t i) const { return values[i].real(); }
  std::vector<double> real_part() const;
  std::vector<double> abs() const;
  double max_abs() const;
  bool finite() const;
  // Throws if any sample is non-finite or a real function has imaginary parts.
  void validate() const;

  SampledFunction& operator+=(const SampledFunction& o);
  SampledFunction& operator-=(const SampledFunction& o);
  SampledFunction& operator*=(cplx c);
  SampledFunction& operator*=(double c);
};

SampledFunction operator+(SampledFunction a, const SampledFunction& b);
SampledFunction operator-(SampledFunction a, const SampledFunction& b);
SampledFunction operator*(cplx c, SampledFunction a);
SampledFunction operator*(double c, SampledFunction a);
// Pointwise product.
SampledFunction multiply(const SampledFunction& a, const SampledFunction& b);

cplx integrate(const SampledFunction& f);
// Midpoint sum over cells whose centre lies in q. Sets *empty when no cell does.
cplx integrate(const SampledFunction& f, const Cube& q, bool* empty = nullptr);

// Support helpers used throughout the decomposition code.
std::vector<std::size_t> support_cells(const SampledFunction& f, double tol = 0.0);

}  // namespace hardyloc
