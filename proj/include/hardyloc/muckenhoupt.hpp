#pragma once

#include <string>
#include <vector>

#include "hardyloc/weight.hpp"

namespace hardyloc {

// Grid-aligned cube family: every cell-aligned position, sides that are integer
// multiples of h with |Q| <= cap. dyadic_sides keeps only sides of 2^j cells.
enum class CubeFamily { all, dyadic_sides };

std::string to_string(CubeFamily f);

// Visits the family ordered by side (ascending) then position (axis 0 slow).
template <class F>
void for_each_cube(const Grid& g, double volume_cap, CubeFamily fam, F&& fn);

int max_side_cells(const Grid& g, double volume_cap);

struct ApLocReport {
  double p = 1.0;
  double constant = 1.0;
  Cube argmax;
  CellBox argmax_box;
  double side_cap = 1.0;  // cap on |Q|
  CubeFamily family = CubeFamily::all;
  std::size_t cubes = 0;
  double alpha = 0.0;  // only for the phi-normalized variant
};

// sup over the family of <w>_Q <w^{-1/(p-1)}>_Q^{p-1}; for p = 1, <w>_Q / min_Q w.
ApLocReport ap_loc_constant(const Weight& w, double p, double side_cap = 1.0,
                            CubeFamily fam = CubeFamily::all);

// Same quantity with both averages divided by phi(|Q|) = (1+|Q|)^alpha, over all cubes.
ApLocReport ap_phi_constant(const Weight& w, double p, double alpha,
                            CubeFamily fam = CubeFamily::all);

struct WeightPropertiesReport {
  double p = 2.0;
  std::vector<double> p_sweep;
  std::vector<double> sweep_constants;
  bool monotone = true;
  double duality_lhs = 0.0;  // A_{p'}(w^{1-p'})
  double duality_rhs = 0.0;  // A_p(w)^{p'-1}
  double duality_rel_err = 0.0;
  double small_doubling = 0.0;  // sup w(2Q)/w(Q), |Q| < 1
  Cube small_doubling_cube;
  double large_doubling = 0.0;  // sup w(Q(x,r+1))/w(Q(x,r)), |Q| >= 1
  Cube large_doubling_cube;
};

WeightPropertiesReport check_weight_properties(const Weight& w, double p,
                                               const std::vector<double>& p_sweep = {},
                                               double side_cap = 1.0,
                                               CubeFamily fam = CubeFamily::all);

struct CriticalIndexRow {
  double p;
  int m;
  double constant;
};
struct CriticalIndexTable {
  std::vector<CriticalIndexRow> rows;
  std::vector<double> p_sweep;
  std::vector<int> levels;
  std::vector<bool> stable;  // per p: max/min over refinements <= 1.2
};

CriticalIndexTable critical_index_diagnostic(const std::string& weight_desc, int n, double L,
                                             const std::vector<double>& p_sweep,
                                             const std::vector<int>& levels,
                                             double side_cap = 1.0);

struct BmoReport {
  double value = 0.0;
  Cube argmax;
  CellBox argmax_box;
  std::size_t cubes = 0;
};

// sup_{|Q| <= cap} |Q|^{-1} int_Q |b - b_Q|, real part of b.
BmoReport bmo_loc_norm(const SampledFunction& b, double side_cap = 1.0,
                       CubeFamily fam = CubeFamily::all);

// sup_Q (w(Q)^{-1} int_Q |b-b_Q|^p w)^{1/p} / ||b||_BMO
struct OscillationRatio {
  double ratio = 0.0;
  double bmo = 0.0;
  Cube argmax;
};
OscillationRatio weighted_oscillation_ratio(const SampledFunction& b, const Weight& w, double p,
                                            double side_cap = 1.0);

// sup_Q w({x in Q : |b-b_Q| > lambda}) / w(Q) per lambda, plus the least-squares slope
// of its logarithm against lambda over the lambdas where it is positive.
struct LevelSetDecay {
  std::vector<double> lambdas;
  std::vector<double> fraction;
  double bmo = 0.0;
  double log_slope = 0.0;
  bool monotone = true;
};
LevelSetDecay level_set_decay(const SampledFunction& b, const Weight& w,
                              const std::vector<double>& lambdas, double side_cap = 1.0);

// ---------------------------------------------------------------------------

template <class F>
void for_each_cube(const Grid& g, double volume_cap, CubeFamily fam, F&& fn) {
  const int smax = max_side_cells(g, volume_cap);
  for (int s = 1; s <= smax; ++s) {
    if (fam == CubeFamily::dyadic_sides && (s & (s - 1)) != 0) continue;
    const int k = g.m - s + 1;
    if (g.n == 1) {
      for (int i = 0; i < k; ++i) fn(CellBox{{i, 0}, s});
    } else {
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) fn(CellBox{{i, j}, s});
    }
  }
}

}  // namespace hardyloc
