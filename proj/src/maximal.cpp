#include "hardyloc/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "sliding.hpp"

namespace hardyloc {

SampledFunction local_hl_maximal(const SampledFunction& f) {
  const Grid& g = f.grid;
  const std::vector<double> a = f.abs();
  PrefixTable t(g, a);
  std::vector<double> out(g.size(), 0.0);
  const double cap_side = 1.0 / g.h;  // s h < 1 <=> |Q| < 1
  const int m = g.m;
  for (int s = 1; s <= m && s < cap_side * (1.0 - 1e-12); ++s) {
    const int k = m - s + 1;
    const double cnt = g.n == 1 ? double(s) : double(s) * s;
    // Averages over windows at positions -(s-1) .. m-1, -inf off the grid; a sliding
    // max of width s then gives the best window containing each cell.
    const int len = m + s - 1;
    if (g.n == 1) {
      std::vector<double> avg(len, -kInf);
      for (int p = 0; p < k; ++p) avg[p + s - 1] = t.box_sum({p, 0}, {p + s, 0}) / cnt;
      auto best = detail::sliding_max(avg, s);
      for (int i = 0; i < m; ++i) out[i] = std::max(out[i], best[i]);
    } else {
      std::vector<double> avg(std::size_t(len) * len, -kInf);
      for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q)
          avg[std::size_t(p + s - 1) * len + q + s - 1] = t.box_sum({p, q}, {p + s, q + s}) / cnt;
      std::vector<double> line(len), rows(std::size_t(len) * m);
      for (int i = 0; i < len; ++i) {
        for (int j = 0; j < len; ++j) line[j] = avg[std::size_t(i) * len + j];
        auto r = detail::sliding_max(line, s);
        for (int j = 0; j < m; ++j) rows[std::size_t(i) * m + j] = r[j];
      }
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < len; ++i) line[i] = rows[std::size_t(i) * m + j];
        auto c = detail::sliding_max(line, s);
        for (int i = 0; i < m; ++i) out[g.index(i, j)] = std::max(out[g.index(i, j)], c[i]);
      }
    }
  }
  return SampledFunction::from_real(g, out);
}

MaximalOperator::MaximalOperator(const Grid& g, const Dictionary& d) : g_(g), d_(d) {
  if (d.members.empty() || d.scales.empty()) throw Error("empty dictionary");
  if (d.n != g.n) throw Error("dictionary dimension does not match grid");
  check_scales(d.scales);
  const double hv = g.cell_volume();
  for (int s = 0; s < int(d.scales.size()); ++s) {
    const double t = d.scales[s];
    const double tn = g.n == 1 ? t : t * t;
    for (int mi = 0; mi < int(d.members.size()); ++mi) {
      const TestFunction& phi = d.members[mi];
      Kernel k{mi, s, int(std::floor(phi.support_radius * t / g.h)), {}};
      const int R = k.radius, w = 2 * R + 1;
      if (g.n == 1) {
        k.w.resize(w);
        for (int o = -R; o <= R; ++o) k.w[o + R] = phi({o * g.h / t, 0.0}) / tn * hv;
      } else {
        k.w.resize(std::size_t(w) * w);
        for (int a = -R; a <= R; ++a)
          for (int b = -R; b <= R; ++b)
            k.w[std::size_t(a + R) * w + b + R] = phi({a * g.h / t, b * g.h / t}) / tn * hv;
      }
      ks_.push_back(std::move(k));
    }
  }
}

int MaximalOperator::kernel_radius(int scale) const {
  int r = 0;
  for (auto& k : ks_)
    if (k.scale == scale) r = std::max(r, k.radius);
  return r;
}

template <class T>
void MaximalOperator::scatter(const Kernel& k, const std::vector<std::size_t>& cells,
                              const std::vector<T>& vals, std::vector<T>& out) const {
  const int R = k.radius, m = g_.m, w = 2 * R + 1;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const T fv = vals[c];
    auto ij = g_.unravel(cells[c]);
    if (g_.n == 1) {
      const int j = ij[0];
      const int lo = std::max(0, j - R), hi = std::min(m - 1, j + R);
      const double* kw = k.w.data() + (R - j);
      for (int i = lo; i <= hi; ++i) out[i] += kw[i] * fv;
    } else {
      const int lo0 = std::max(0, ij[0] - R), hi0 = std::min(m - 1, ij[0] + R);
      const int lo1 = std::max(0, ij[1] - R), hi1 = std::min(m - 1, ij[1] + R);
      for (int a = lo0; a <= hi0; ++a) {
        const double* kw = k.w.data() + std::size_t(a - ij[0] + R) * w + (R - ij[1]);
        T* o = out.data() + std::size_t(a) * m;
        for (int b = lo1; b <= hi1; ++b) o[b] += kw[b] * fv;
      }
    }
  }
}

std::vector<double> MaximalOperator::finish(std::vector<std::vector<double>>& per_scale,
                                            MaximalMode mode) const {
  std::vector<double> out(g_.size(), 0.0);
  for (int s = 0; s < int(per_scale.size()); ++s) {
    auto& a = per_scale[s];
    if (mode == MaximalMode::nontangential) {
      // |z - x| < t over sample points z
      const double tr = d_.scales[s] / g_.h;
      const int r = std::max(0, int(std::ceil(tr)) - 1);
      if (g_.n == 1) {
        std::vector<double> pad(g_.m + 2 * r, 0.0);
        std::copy(a.begin(), a.end(), pad.begin() + r);
        a = detail::sliding_max(pad, 2 * r + 1);
      } else {
        std::vector<std::array<int, 2>> offs;
        for (int i = -r; i <= r; ++i)
          for (int j = -r; j <= r; ++j)
            if (i * i + j * j < tr * tr) offs.push_back({i, j});
        std::vector<double> b(a.size(), 0.0);
        const int m = g_.m;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            double v = 0.0;
            for (auto& o : offs) {
              int p = i + o[0], q = j + o[1];
              if (p >= 0 && p < m && q >= 0 && q < m) v = std::max(v, a[g_.index(p, q)]);
            }
            b[g_.index(i, j)] = v;
          }
        a.swap(b);
      }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], a[i]);
  }
  return out;
}

std::vector<double> MaximalOperator::apply_sparse(const std::vector<std::size_t>& cells,
                                                  const std::vector<double>& vals,
                                                  MaximalMode mode) const {
  std::vector<std::vector<double>> per_scale(d_.scales.size(), std::vector<double>(g_.size(), 0.0));
  std::vector<double> buf(g_.size());
  for (auto& k : ks_) {
    std::fill(buf.begin(), buf.end(), 0.0);
    scatter(k, cells, vals, buf);
    auto& a = per_scale[k.scale];
    for (std::size_t i = 0; i < buf.size(); ++i) a[i] = std::max(a[i], std::abs(buf[i]));
  }
  return finish(per_scale, mode);
}

SampledFunction MaximalOperator::apply(const SampledFunction& f, MaximalMode mode) const {
  if (f.grid != g_) throw Error("grid mismatch");
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.values[i] != cplx(0.0)) cells.push_back(i);
  if (f.real) {
    std::vector<double> vals;
    for (auto i : cells) vals.push_back(f.values[i].real());
    return SampledFunction::from_real(g_, apply_sparse(cells, vals, mode));
  }
  std::vector<cplx> vals;
  for (auto i : cells) vals.push_back(f.values[i]);
  std::vector<std::vector<double>> per_scale(d_.scales.size(), std::vector<double>(g_.size(), 0.0));
  std::vector<cplx> buf(g_.size());
  for (auto& k : ks_) {
    std::fill(buf.begin(), buf.end(), cplx(0.0));
    scatter(k, cells, vals, buf);
    auto& a = per_scale[k.scale];
    for (std::size_t i = 0; i < buf.size(); ++i) a[i] = std::max(a[i], std::abs(buf[i]));
  }
  return SampledFunction::from_real(g_, finish(per_scale, mode));
}

std::vector<cplx> MaximalOperator::convolve(const SampledFunction& f, int member, int scale) const {
  std::vector<std::size_t> cells;
  std::vector<cplx> vals;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.values[i] != cplx(0.0)) {
      cells.push_back(i);
      vals.push_back(f.values[i]);
    }
  std::vector<cplx> out(g_.size(), cplx(0.0));
  for (auto& k : ks_)
    if (k.member == member && k.scale == scale) scatter(k, cells, vals, out);
  return out;
}

SampledFunction grand_maximal(const SampledFunction& f, const Dictionary& d, MaximalMode mode) {
  return MaximalOperator(f.grid, d).apply(f, mode);
}

double hardy_quasi_norm(const SampledFunction& f, const Weight& w, double p,
                        const MaximalOperator& op) {
  return weighted_lp_norm(op.apply(f, MaximalMode::centered), w, p);
}

double hardy_quasi_norm(const SampledFunction& f, const Weight& w, const HardyParams& hp,
                        const Dictionary& d) {
  hp.validate();
  return hardy_quasi_norm(f, w, hp.p, MaximalOperator(f.grid, d));
}

DominationReport maximal_domination(const SampledFunction& f, const Dictionary& d) {
  const Grid& g = f.grid;
  DominationReport r;
  auto m0 = grand_maximal(f, d, MaximalMode::centered);
  auto ml = local_hl_maximal(f);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (ml.re(i) > 0.0) r.upper_constant = std::max(r.upper_constant, m0.re(i) / ml.re(i));
  double I = 0.0;
  for (auto& mem : d.members) I = std::max(I, std::abs(mem.integral));
  const auto a = f.abs();
  for (std::size_t i = 0; i < f.size(); ++i) r.lower_excess = std::max(r.lower_excess, I * a[i] - m0.re(i));
  const double tmin = *std::min_element(d.scales.begin(), d.scales.end());
  const int k = int(std::floor(tmin / g.h));
  double osc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto ij = g.unravel(i);
    for (int a0 = -k; a0 <= k; ++a0)
      for (int b0 = (g.n == 2 ? -k : 0); b0 <= (g.n == 2 ? k : 0); ++b0) {
        int p = ij[0] + a0, q = ij[1] + b0;
        if (p < 0 || p >= g.m || q < 0 || (g.n == 2 && q >= g.m)) continue;
        if ((a0 * a0 + b0 * b0) * g.h * g.h > tmin * tmin) continue;
        osc = std::max(osc, std::abs(f.values[i] - f.values[g.index(p, q)]));
      }
  }
  r.modulus_term = I * osc;
  return r;
}

double local_maximal_ratio(const SampledFunction& f, const Weight& w, double p) {
  return weighted_lp_norm(local_hl_maximal(f), w, p) / weighted_lp_norm(f, w, p);
}

}  // namespace hardyloc
