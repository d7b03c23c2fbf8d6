#include "hardyloc/muckenhoupt.hpp"

#include <algorithm>
#include <cmath>

#include "sliding.hpp"

namespace hardyloc {

std::string to_string(CubeFamily f) { return f == CubeFamily::all ? "all" : "dyadic_sides"; }

int max_side_cells(const Grid& g, double volume_cap) {
  if (std::isinf(volume_cap)) return g.m;
  double side = g.n == 1 ? volume_cap : std::sqrt(volume_cap);
  int s = int(std::floor(side / g.h * (1.0 + 1e-12)));
  return std::clamp(s, 0, g.m);
}

namespace {

template <class F>
void for_each_in_box(const Grid& g, const CellBox& b, F&& fn) {
  if (g.n == 1) {
    for (int i = b.lo[0]; i < b.lo[0] + b.side; ++i) fn(std::size_t(i));
  } else {
    for (int i = b.lo[0]; i < b.lo[0] + b.side; ++i)
      for (int j = b.lo[1]; j < b.lo[1] + b.side; ++j) fn(g.index(i, j));
  }
}

double box_count(const Grid& g, int s) { return g.n == 1 ? double(s) : double(s) * s; }

std::size_t window_pos(const Grid& g, const CellBox& b) {
  const int k = g.m - b.side + 1;
  return g.n == 1 ? std::size_t(b.lo[0]) : std::size_t(b.lo[0]) * k + b.lo[1];
}

// Shared sweep for the A_p-type constants; phi(|Q|) divides both averages.
ApLocReport ap_sweep(const Weight& w, double p, double cap, CubeFamily fam, double alpha) {
  if (!(p >= 1.0)) throw Error("A_p constant needs p >= 1");
  const Grid& g = w.grid();
  const PrefixTable& tw = w.power_table(1.0);
  const PrefixTable* ts = p > 1.0 ? &w.power_table(-1.0 / (p - 1.0)) : nullptr;
  ApLocReport rep;
  rep.p = p;
  rep.side_cap = cap;
  rep.family = fam;
  rep.alpha = alpha;
  rep.constant = -kInf;
  int cur_side = -1;
  std::vector<double> mins;
  double phi = 1.0;
  for_each_cube(g, cap, fam, [&](const CellBox& b) {
    if (b.side != cur_side) {
      cur_side = b.side;
      if (p == 1.0) mins = detail::window_extremum(g, w.values(), b.side, detail::sliding_min);
      phi = alpha == 0.0 ? 1.0 : std::pow(1.0 + std::pow(b.side * g.h, g.n), alpha);
    }
    const double cnt = box_count(g, b.side);
    const double aw = tw.box_sum(b) / cnt / phi;
    double v;
    if (p == 1.0) {
      v = aw / mins[window_pos(g, b)];
    } else {
      const double as = ts->box_sum(b) / cnt / phi;
      v = aw * std::pow(as, p - 1.0);
    }
    ++rep.cubes;
    if (v > rep.constant) {
      rep.constant = v;
      rep.argmax_box = b;
    }
  });
  if (rep.cubes == 0) throw Error("cube family is empty (cap below one cell)");
  rep.argmax = to_cube(g, rep.argmax_box);
  return rep;
}

}  // namespace

ApLocReport ap_loc_constant(const Weight& w, double p, double side_cap, CubeFamily fam) {
  return ap_sweep(w, p, side_cap, fam, 0.0);
}

ApLocReport ap_phi_constant(const Weight& w, double p, double alpha, CubeFamily fam) {
  if (!(p > 1.0)) throw Error("A_p(phi) constant needs p > 1");
  if (!(alpha >= 0.0)) throw Error("alpha must be nonnegative");
  return ap_sweep(w, p, kInf, fam, alpha);
}

WeightPropertiesReport check_weight_properties(const Weight& w, double p,
                                               const std::vector<double>& p_sweep,
                                               double side_cap, CubeFamily fam) {
  if (!(p > 1.0)) throw Error("weight property check needs p > 1");
  WeightPropertiesReport r;
  r.p = p;
  r.p_sweep = p_sweep.empty() ? std::vector<double>{1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0} : p_sweep;
  std::sort(r.p_sweep.begin(), r.p_sweep.end());
  for (double q : r.p_sweep) r.sweep_constants.push_back(ap_loc_constant(w, q, side_cap, fam).constant);
  for (std::size_t i = 1; i < r.sweep_constants.size(); ++i)
    if (r.sweep_constants[i] > r.sweep_constants[i - 1] * (1.0 + 1e-12)) r.monotone = false;

  const Grid& g = w.grid();
  const double pp = p / (p - 1.0);
  std::vector<double> sv(w.values().size());
  for (std::size_t i = 0; i < sv.size(); ++i) sv[i] = std::pow(w[i], 1.0 - pp);
  Weight sigma(SampledFunction::from_real(g, sv), "dual");
  r.duality_lhs = ap_loc_constant(sigma, pp, side_cap, fam).constant;
  r.duality_rhs = std::pow(ap_loc_constant(w, p, side_cap, fam).constant, pp - 1.0);
  r.duality_rel_err = std::abs(r.duality_lhs - r.duality_rhs) / r.duality_rhs;

  const PrefixTable& tw = w.power_table(1.0);
  const double hv = g.cell_volume();
  for_each_cube(g, kInf, CubeFamily::all, [&](const CellBox& b) {
    Cube q = to_cube(g, b);
    const double wq = tw.box_sum(b) * hv;
    if (q.volume() < 1.0 - 1e-12) {
      if (fam == CubeFamily::dyadic_sides && (b.side & (b.side - 1)) != 0) return;
      double ratio = w.measure(q.dilate(2.0)) / wq;
      if (ratio > r.small_doubling) {
        r.small_doubling = ratio;
        r.small_doubling_cube = q;
      }
    } else {
      Cube big = q;
      big.side += 1.0;
      double ratio = w.measure(big) / wq;
      if (ratio > r.large_doubling) {
        r.large_doubling = ratio;
        r.large_doubling_cube = q;
      }
    }
  });
  return r;
}

CriticalIndexTable critical_index_diagnostic(const std::string& weight_desc, int n, double L,
                                             const std::vector<double>& p_sweep,
                                             const std::vector<int>& levels, double side_cap) {
  if (!std::is_sorted(p_sweep.begin(), p_sweep.end())) throw Error("p sweep must be ascending");
  CriticalIndexTable t;
  t.p_sweep = p_sweep;
  t.levels = levels;
  std::vector<std::vector<double>> c(p_sweep.size());
  for (int m : levels) {
    Grid g = make_grid(n, L, m);
    Weight w = parse_weight(weight_desc, g);
    for (std::size_t k = 0; k < p_sweep.size(); ++k) {
      double v = ap_loc_constant(w, p_sweep[k], side_cap).constant;
      t.rows.push_back({p_sweep[k], m, v});
      c[k].push_back(v);
    }
  }
  for (auto& row : c) {
    auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    t.stable.push_back(row.empty() || *hi <= 1.2 * *lo);
  }
  return t;
}

BmoReport bmo_loc_norm(const SampledFunction& b, double side_cap, CubeFamily fam) {
  const Grid& g = b.grid;
  const std::vector<double> v = b.real_part();
  PrefixTable tb(g, v);
  BmoReport rep;
  rep.value = -1.0;
  for_each_cube(g, side_cap, fam, [&](const CellBox& q) {
    const double cnt = box_count(g, q.side);
    const double mean = tb.box_sum(q) / cnt;
    DD acc;
    for_each_in_box(g, q, [&](std::size_t i) { acc += std::abs(v[i] - mean); });
    const double osc = acc.value() / cnt;
    ++rep.cubes;
    if (osc > rep.value) {
      rep.value = osc;
      rep.argmax_box = q;
    }
  });
  if (rep.cubes == 0) throw Error("cube family is empty (cap below one cell)");
  rep.argmax = to_cube(g, rep.argmax_box);
  return rep;
}

OscillationRatio weighted_oscillation_ratio(const SampledFunction& b, const Weight& w, double p,
                                            double side_cap) {
  const Grid& g = b.grid;
  OscillationRatio r;
  r.bmo = bmo_loc_norm(b, side_cap).value;
  if (!(r.bmo > 0.0)) throw Error("oscillation ratio needs nonconstant b");
  const std::vector<double> v = b.real_part();
  PrefixTable tb(g, v);
  const PrefixTable& tw = w.power_table(1.0);
  CellBox best;
  for_each_cube(g, side_cap, CubeFamily::all, [&](const CellBox& q) {
    const double mean = tb.box_sum(q) / box_count(g, q.side);
    DD acc;
    for_each_in_box(g, q, [&](std::size_t i) { acc += std::pow(std::abs(v[i] - mean), p) * w[i]; });
    double val = std::pow(acc.value() / tw.box_sum(q), 1.0 / p) / r.bmo;
    if (val > r.ratio) {
      r.ratio = val;
      best = q;
    }
  });
  r.argmax = to_cube(g, best);
  return r;
}

LevelSetDecay level_set_decay(const SampledFunction& b, const Weight& w,
                              const std::vector<double>& lambdas, double side_cap) {
  const Grid& g = b.grid;
  LevelSetDecay out;
  out.lambdas = lambdas;
  out.fraction.assign(lambdas.size(), 0.0);
  out.bmo = bmo_loc_norm(b, side_cap).value;
  const std::vector<double> v = b.real_part();
  PrefixTable tb(g, v);
  const PrefixTable& tw = w.power_table(1.0);
  std::vector<DD> acc(lambdas.size());
  for_each_cube(g, side_cap, CubeFamily::all, [&](const CellBox& q) {
    const double mean = tb.box_sum(q) / box_count(g, q.side);
    for (auto& a : acc) a = DD{};
    for_each_in_box(g, q, [&](std::size_t i) {
      const double dev = std::abs(v[i] - mean);
      for (std::size_t k = 0; k < lambdas.size(); ++k)
        if (dev > lambdas[k]) acc[k] += w[i];
    });
    const double wq = tw.box_sum(q);
    for (std::size_t k = 0; k < lambdas.size(); ++k)
      out.fraction[k] = std::max(out.fraction[k], acc[k].value() / wq);
  });
  for (std::size_t k = 1; k < lambdas.size(); ++k)
    if (lambdas[k] > lambdas[k - 1] && out.fraction[k] > out.fraction[k - 1]) out.monotone = false;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(out.fraction[k] > 0.0)) continue;
    double x = lambdas[k], y = std::log(out.fraction[k]);
    sx += x, sy += y, sxx += x * x, sxy += x * y, ++cnt;
  }
  if (cnt >= 2) out.log_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return out;
}

}  // namespace hardyloc
