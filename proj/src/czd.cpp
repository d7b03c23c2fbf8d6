#include "hardyloc/czd.hpp"

#include <algorithm>
#include <cmath>

namespace hardyloc {

std::vector<double> CZDecomposition::p_eta(std::size_t i) const {
  const auto& eta = pu.eta[i];
  std::vector<double> out(eta.size(), 0.0);
  if (!projectors[i]) return out;
  for (std::size_t c = 0; c < eta.size(); ++c)
    out[c] = projectors[i]->eval(coeffs[i], g.grid.point(eta[c].first)) * eta[c].second;
  return out;
}

CZDecomposition cz_decompose(const SampledFunction& f, double lambda, const HardyParams& hp,
                             const Dictionary& dict, const CZOptions& opt) {
  SampledFunction Mf = grand_maximal(f, dict, MaximalMode::nontangential);
  return cz_decompose(f, Mf, lambda, hp, opt);
}

CZDecomposition cz_decompose(const SampledFunction& f, const SampledFunction& Mf, double lambda,
                             const HardyParams& hp, const CZOptions& opt) {
  if (!f.real) throw Error("Calderon-Zygmund decomposition needs a real-valued function");
  if (f.grid != Mf.grid) throw Error("grid mismatch");
  hp.validate();
  double inf = kInf;
  for (std::size_t i = 0; i < Mf.size(); ++i) inf = std::min(inf, Mf.re(i));
  if (!(lambda > inf)) throw Error("height must exceed inf M f");

  const Grid& grid = f.grid;
  CZDecomposition d;
  d.lambda = lambda;
  d.params = hp;
  d.Mf = Mf;
  d.g = f;
  d.omega = superlevel_set(Mf, lambda, opt.margin_cells);
  if (d.omega.empty()) return d;
  d.cover = whitney_decompose(d.omega, opt.window);
  d.pu = partition_of_unity(d.cover, hp.N + 2);

  const std::size_t nc = d.cover.cubes.size();
  d.projectors.resize(nc);
  d.coeffs.resize(nc);
  d.bad.resize(nc);
  std::vector<double> sum_b(grid.size(), 0.0);
  const double fmax = std::max(f.max_abs(), 1e-300);
  for (std::size_t i = 0; i < nc; ++i) {
    const auto& eta = d.pu.eta[i];
    const Cube& q = d.cover.cubes[i].cube;
    BadPart& b = d.bad[i];
    b.projected = q.side < 1.0;
    std::vector<double> fv(eta.size());
    for (std::size_t c = 0; c < eta.size(); ++c) fv[c] = f.re(eta[c].first);
    std::vector<double> pv(eta.size(), 0.0);
    if (b.projected) {
      d.projectors[i].emplace(grid, eta, q.center, q.side, hp.s, opt.cond_threshold);
      const MomentProjector& pr = *d.projectors[i];
      d.coeffs[i] = pr.project(fv);
      d.max_cond = std::max(d.max_cond, pr.cond());
      if (pr.rank() < pr.dim()) ++d.rank_deficient;
      for (std::size_t c = 0; c < eta.size(); ++c) pv[c] = pr.eval(d.coeffs[i], grid.point(eta[c].first));
      std::vector<double> diff(eta.size());
      for (std::size_t c = 0; c < eta.size(); ++c) diff[c] = fv[c] - pv[c];
      for (double mo : pr.moments(diff))
        d.orthogonality_residual = std::max(d.orthogonality_residual, std::abs(mo) / fmax);
    }
    for (std::size_t c = 0; c < eta.size(); ++c) {
      const double v = (fv[c] - pv[c]) * eta[c].second;
      b.cells.push_back(eta[c].first);
      b.vals.push_back(v);
      sum_b[eta[c].first] += v;
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) d.g.values[i] = cplx(f.re(i) - sum_b[i], 0.0);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    err = std::max(err, std::abs(f.re(i) - d.g.re(i) - sum_b[i]));
  d.reconstruction_error = err / fmax;
  return d;
}

CZDiagnostics verify_czd(const CZDecomposition& dec, const SampledFunction& f, const Weight& w,
                         const MaximalOperator& M0) {
  CZDiagnostics r;
  const Grid& grid = f.grid;
  const double lam = dec.lambda;
  const Dictionary& dict = M0.dictionary();
  const double tmin = *std::min_element(dict.scales.begin(), dict.scales.end());
  const double tmax = *std::max_element(dict.scales.begin(), dict.scales.end());
  const HardyParams& hp = dec.params;

  std::vector<std::array<double, 2>> pts;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < dec.size(); ++i) {
    const BadPart& b = dec.bad[i];
    const Cube& q = dec.cover.cubes[i].cube;
    if (b.projected) {
      ++r.projected;
      r.max_projected_side = std::max(r.max_projected_side, q.side);
      for (double v : dec.p_eta(i)) r.C2 = std::max(r.C2, std::abs(v) / lam);
    } else {
      ++r.plain;
    }
    bool nonzero = false;
    for (double v : b.vals) nonzero = nonzero || v != 0.0;
    if (!nonzero) continue;
    auto mb = M0.apply_sparse(b.cells, b.vals, MaximalMode::centered);
    for_each_cell(grid, cells_in(grid, dec.cover.star(i)), [&](std::size_t x) {
      if (dec.Mf.re(x) > 0.0) r.C3 = std::max(r.C3, mb[x] / dec.Mf.re(x));
    });
    if (!b.projected) continue;
    const double dlo = std::max(q.side, 2.0 * tmin), dhi = 0.5 * tmax;
    if (!(dhi > dlo)) continue;
    const Cube star = dec.cover.star(i);
    pts.clear();
    for (std::size_t x = 0; x < grid.size(); ++x) {
      Point p = grid.point(x);
      if (star.contains(p)) continue;
      const double dist = std::hypot(p[0] - q.center[0], grid.n == 2 ? p[1] - q.center[1] : 0.0);
      if (dist < dlo || dist > dhi || !(mb[x] > 0.0)) continue;
      pts.push_back({std::log(q.side + dist), std::log(mb[x])});
    }
    if (pts.size() < 3) continue;
    double mx = 0, my = 0;
    for (auto& p : pts) mx += p[0], my += p[1];
    mx /= pts.size();
    my /= pts.size();
    for (auto& p : pts) {
      sxx += (p[0] - mx) * (p[0] - mx);
      sxy += (p[0] - mx) * (p[1] - my);
    }
    r.decay_points += int(pts.size());
    ++r.decay_cubes;
  }
  r.decay_exponent = sxx > 0.0 ? sxy / sxx : 0.0;
  r.C9 = dec.g.max_abs() / lam;

  const double q = hp.q_infinite() ? 2.0 : hp.q;
  SampledFunction sum_abs(grid, true);
  for (auto& b : dec.bad)
    for (std::size_t c = 0; c < b.cells.size(); ++c) sum_abs.values[b.cells[c]] += std::abs(b.vals[c]);
  const double fq = weighted_lp_norm(f, w, q);
  r.sum_b_ratio = fq > 0.0 ? weighted_lp_norm(sum_abs, w, q) / fq : 0.0;

  auto mg = M0.apply(dec.g, MaximalMode::centered);
  const double num = weighted_lp_norm(mg, w, 1.0);
  const double mfp = std::pow(weighted_lp_norm(dec.Mf, w, hp.p), hp.p);
  r.good_part_ratio = mfp > 0.0 ? num / (std::pow(lam, 1.0 - hp.p) * mfp) : 0.0;
  return r;
}

}  // namespace hardyloc
