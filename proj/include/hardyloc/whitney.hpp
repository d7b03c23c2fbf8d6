#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hardyloc/grid.hpp"

namespace hardyloc {

// Cell-union open set with the distance from each cell centre to the nearest
// complement cell centre. Cells beyond the grid count as complement.
struct OpenSet {
  Grid grid;
  std::vector<std::uint8_t> inside;
  std::vector<double> dist;

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool contains(std::size_t i) const { return inside[i] != 0; }
};

// Exact Euclidean distance (cell-centre metric) to the nearest cell with inside == 0,
// including the ring of cells just outside the grid.
std::vector<double> distance_to_complement(const Grid& g, const std::vector<std::uint8_t>& inside);

// {x : Mf(x) > lambda}. Throws "domain too small for this height" when the set
// reaches within margin_cells of the grid boundary.
OpenSet superlevel_set(const SampledFunction& Mf, double lambda, int margin_cells = 1);

// Accepted cubes satisfy lower * diam <= dist(Q, complement) <= upper * diam.
struct WhitneyWindow {
  double lower = 0.5;
  double upper = 2.0;
  static WhitneyWindow desk() { return {0.5, 2.0}; }
  // 2^{6+n} diam <= dist <= 2^{8+n} diam
  static WhitneyWindow literal(int n);
};

struct WhitneyCube {
  Cube cube;  // carries its dyadic address
  CellBox box;
  double dist = 0.0;
};

struct WhitneyCover {
  Grid grid;
  WhitneyWindow window;
  double a = 1.0;  // closure dilate
  double b = 1.0;  // star dilate
  std::vector<WhitneyCube> cubes;
  std::vector<int> owner;  // cell -> cube index, -1 off the set
  int overlap = 0;         // max number of b-dilates containing a cell centre

  Cube closure(std::size_t k) const { return cubes[k].cube.dilate(a); }
  Cube star(std::size_t k) const { return cubes[k].cube.dilate(b); }
};

double whitney_a(int n);  // 1 + 2^{-(11+n)}
double whitney_b(int n);  // 1 + 2^{-(10+n)}

// Maximal dyadic cubes (anchored to the grid, m a power of two) inside the set that
// satisfy the lower bound. Throws "window unresolvable" when some cell of the set
// cannot be covered at grid resolution.
WhitneyCover whitney_decompose(const OpenSet& omega, WhitneyWindow window = WhitneyWindow::desk());

// Per-cell count of b-dilates containing the cell centre.
std::vector<int> star_overlap_counts(const WhitneyCover& c);

// C^K smoothstep, 0 at t <= 0 and 1 at t >= 1.
double smoothstep(double t, int K);

// xi(u) = prod_d s(u_d), s = 1 on |u| <= 1/2, 0 on |u| >= a/2, smoothstep in between.
double xi_profile(const Point& u, int n, double a, int K);

struct PartitionOfUnity {
  int K = 4;  // smoothstep order
  double a = 1.0;
  std::vector<std::vector<std::pair<std::size_t, double>>> eta;  // per cube, sparse
  std::vector<double> xi_sum;
};

// eta_k = xi_k / sum_j xi_j with xi_k(x) = xi((x - x_k)/l_k); K = N + 2.
PartitionOfUnity partition_of_unity(const WhitneyCover& c, int K);

// Finite-difference sup of |d^k/du^k eta_i(x_i + l_i u)|, k = 1..max_order, sampled
// through the transition bands of each cube. One entry per examined cube.
struct EtaDerivativeReport {
  std::vector<double> per_cube;
  double max = 0.0;
  double min = 0.0;
};
EtaDerivativeReport eta_derivative_bounds(const WhitneyCover& c, int K, int max_order,
                                          std::size_t max_cubes = 64);

}  // namespace hardyloc
