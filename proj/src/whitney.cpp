#include "hardyloc/whitney.hpp"

#include <algorithm>
#include <cmath>

namespace hardyloc {

std::size_t OpenSet::count() const {
  std::size_t c = 0;
  for (auto v : inside) c += v != 0;
  return c;
}

namespace {

constexpr double kFar = 1e30;

// Felzenszwalb-Huttenlocher lower envelope of parabolas, squared distances in cell units.
void edt_line(const std::vector<double>& f, std::vector<double>& d) {
  const int n = int(f.size());
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -kFar;
  z[1] = kFar;
  for (int q = 1; q < n; ++q) {
    double s;
    while (true) {
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      break;
    }
    if (s <= z[k]) {
      // k == 0 and the new parabola dominates everywhere
      v[0] = q;
      z[0] = -kFar;
      z[1] = kFar;
      continue;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  k = 0;
  d.resize(n);
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    d[q] = double(q - v[k]) * (q - v[k]) + f[v[k]];
  }
}

}  // namespace

std::vector<double> distance_to_complement(const Grid& g, const std::vector<std::uint8_t>& inside) {
  const int m = g.m;
  std::vector<double> out(g.size());
  if (g.n == 1) {
    std::vector<int> left(m), right(m);
    int last = -1;
    for (int i = 0; i < m; ++i) {
      if (!inside[i]) last = i;
      left[i] = last;
    }
    last = m;
    for (int i = m - 1; i >= 0; --i) {
      if (!inside[i]) last = i;
      right[i] = last;
    }
    for (int i = 0; i < m; ++i) out[i] = std::min(i - left[i], right[i] - i) * g.h;
    return out;
  }
  std::vector<double> sq(g.size()), f(m), d;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) f[j] = inside[g.index(i, j)] ? kFar : 0.0;
    edt_line(f, d);
    for (int j = 0; j < m; ++j) sq[g.index(i, j)] = d[j];
  }
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) f[i] = sq[g.index(i, j)];
    edt_line(f, d);
    for (int i = 0; i < m; ++i) sq[g.index(i, j)] = d[i];
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const std::size_t k = g.index(i, j);
      const int edge = std::min({i + 1, m - i, j + 1, m - j});
      out[k] = std::min(std::sqrt(sq[k]), double(edge)) * g.h;
    }
  return out;
}

OpenSet superlevel_set(const SampledFunction& Mf, double lambda, int margin_cells) {
  const Grid& g = Mf.grid;
  OpenSet o;
  o.grid = g;
  o.inside.assign(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(Mf.re(i) > lambda)) continue;
    o.inside[i] = 1;
    auto ij = g.unravel(i);
    for (int d = 0; d < g.n; ++d)
      if (ij[d] < margin_cells || ij[d] >= g.m - margin_cells)
        throw Error("domain too small for this height");
  }
  o.dist = distance_to_complement(g, o.inside);
  return o;
}

WhitneyWindow WhitneyWindow::literal(int n) {
  return {std::ldexp(1.0, 6 + n), std::ldexp(1.0, 8 + n)};
}

double whitney_a(int n) { return 1.0 + std::ldexp(1.0, -(11 + n)); }
double whitney_b(int n) { return 1.0 + std::ldexp(1.0, -(10 + n)); }

WhitneyCover whitney_decompose(const OpenSet& omega, WhitneyWindow window) {
  const Grid& g = omega.grid;
  const int m = g.m, n = g.n;
  if ((m & (m - 1)) != 0) throw Error("Whitney decomposition needs m to be a power of two");
  if (omega.empty()) throw Error("Whitney decomposition of an empty set");
  WhitneyCover c;
  c.grid = g;
  c.window = window;
  c.a = whitney_a(n);
  c.b = whitney_b(n);
  c.owner.assign(g.size(), -1);

  int top = 0;
  while ((1 << top) < m) ++top;
  // min-distance and inside-count pyramids; level k blocks have side 2^k cells
  std::vector<std::vector<double>> dmin(top + 1);
  std::vector<std::vector<int>> cnt(top + 1);
  dmin[0] = omega.dist;
  cnt[0].resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) cnt[0][i] = omega.inside[i];
  for (int k = 1; k <= top; ++k) {
    const int mk = m >> k, mp = m >> (k - 1);
    const std::size_t sz = n == 1 ? std::size_t(mk) : std::size_t(mk) * mk;
    dmin[k].assign(sz, kFar);
    cnt[k].assign(sz, 0);
    for (std::size_t p = 0; p < (n == 1 ? std::size_t(mp) : std::size_t(mp) * mp); ++p) {
      std::size_t q;
      if (n == 1)
        q = p / 2;
      else
        q = (p / mp / 2) * mk + (p % mp) / 2;
      dmin[k][q] = std::min(dmin[k][q], dmin[k - 1][p]);
      cnt[k][q] += cnt[k - 1][p];
    }
  }
  const double rt = std::sqrt(double(n));
  struct Node {
    int level, i, j;
  };
  std::vector<Node> stack{{top, 0, 0}};
  while (!stack.empty()) {
    Node nd = stack.back();
    stack.pop_back();
    const int mk = m >> nd.level;
    const std::size_t q = n == 1 ? std::size_t(nd.i) : std::size_t(nd.i) * mk + nd.j;
    if (cnt[nd.level][q] == 0) continue;
    const int s = 1 << nd.level;
    const double diam = s * g.h * rt;
    const double dist = dmin[nd.level][q];
    const bool full = cnt[nd.level][q] == (n == 1 ? s : s * s);
    if (full && dist >= window.lower * diam * (1.0 - 1e-12)) {
      if (dist > window.upper * diam * (1.0 + 1e-12))
        throw Error("internal: Whitney window violated (dist/diam = " + std::to_string(dist / diam) + ")");
      WhitneyCube wc;
      wc.box = CellBox{{nd.i * s, nd.j * s}, s};
      wc.cube = to_cube(g, wc.box);
      wc.cube.address = DyadicAddress{nd.level, {nd.i, nd.j}};
      wc.dist = dist;
      c.cubes.push_back(wc);
      continue;
    }
    if (nd.level == 0) throw Error("window unresolvable: a cell of the set fails the lower Whitney bound");
    // children pushed in reverse so they pop in index order
    if (n == 1) {
      for (int a = 1; a >= 0; --a) stack.push_back({nd.level - 1, 2 * nd.i + a, 0});
    } else {
      for (int a = 1; a >= 0; --a)
        for (int b = 1; b >= 0; --b) stack.push_back({nd.level - 1, 2 * nd.i + a, 2 * nd.j + b});
    }
  }
  for (std::size_t k = 0; k < c.cubes.size(); ++k) {
    IndexRange r{c.cubes[k].box.lo, {c.cubes[k].box.lo[0] + c.cubes[k].box.side,
                                     c.cubes[k].box.lo[1] + c.cubes[k].box.side}};
    for_each_cell(g, r, [&](std::size_t i) {
      if (c.owner[i] != -1) throw Error("internal: Whitney cubes overlap");
      c.owner[i] = int(k);
    });
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    if ((c.owner[i] != -1) != (omega.inside[i] != 0)) throw Error("internal: Whitney cover incomplete");
  auto ov = star_overlap_counts(c);
  c.overlap = ov.empty() ? 0 : *std::max_element(ov.begin(), ov.end());
  return c;
}

std::vector<int> star_overlap_counts(const WhitneyCover& c) {
  std::vector<int> cnt(c.grid.size(), 0);
  for (std::size_t k = 0; k < c.cubes.size(); ++k)
    for_each_cell(c.grid, cells_in(c.grid, c.star(k)), [&](std::size_t i) { ++cnt[i]; });
  return cnt;
}

double smoothstep(double t, int K) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  auto binom = [](int a, int b) {
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  double s = 0.0;
  for (int j = 0; j <= K; ++j) s += binom(K + j, j) * binom(2 * K + 1, K - j) * std::pow(-t, j);
  return std::pow(t, K + 1) * s;
}

double xi_profile(const Point& u, int n, double a, int K) {
  double v = 1.0;
  const double band = 0.5 * (a - 1.0);
  for (int d = 0; d < n; ++d) {
    const double x = std::abs(u[d]);
    if (x <= 0.5) continue;
    if (x >= 0.5 * a) return 0.0;
    v *= smoothstep((0.5 * a - x) / band, K);
  }
  return v;
}

PartitionOfUnity partition_of_unity(const WhitneyCover& c, int K) {
  const Grid& g = c.grid;
  PartitionOfUnity pu;
  pu.K = K;
  pu.a = c.a;
  pu.xi_sum.assign(g.size(), 0.0);
  pu.eta.resize(c.cubes.size());
  for (std::size_t k = 0; k < c.cubes.size(); ++k) {
    const Cube& q = c.cubes[k].cube;
    for_each_cell(g, cells_in(g, c.closure(k)), [&](std::size_t i) {
      Point x = g.point(i);
      Point u{(x[0] - q.center[0]) / q.side, g.n == 2 ? (x[1] - q.center[1]) / q.side : 0.0};
      double v = xi_profile(u, g.n, c.a, K);
      if (v == 0.0) return;
      pu.eta[k].push_back({i, v});
      pu.xi_sum[i] += v;
    });
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool in = c.owner[i] != -1;
    if (in && !(pu.xi_sum[i] >= 1.0 - 1e-12)) throw Error("internal: partition sum below 1 inside the set");
    if (!in && pu.xi_sum[i] != 0.0) throw Error("internal: partition support leaves the set");
  }
  for (auto& e : pu.eta)
    for (auto& [i, v] : e) v /= pu.xi_sum[i];
  return pu;
}

EtaDerivativeReport eta_derivative_bounds(const WhitneyCover& c, int K, int max_order,
                                          std::size_t max_cubes) {
  EtaDerivativeReport rep;
  const int n = c.grid.n;
  const std::size_t nc = c.cubes.size();
  if (nc == 0) return rep;
  const std::size_t stride = std::max<std::size_t>(1, nc / max_cubes);
  const double band = 0.5 * (c.a - 1.0);
  const double du = band / 16.0;
  for (std::size_t i = 0; i < nc; i += stride) {
    const Cube qi = c.cubes[i].cube;
    const Cube ci = c.closure(i);
    std::vector<std::size_t> nb;
    for (std::size_t j = 0; j < nc; ++j) {
      const Cube cj = c.closure(j);
      bool meet = true;
      for (int d = 0; d < n; ++d)
        if (std::abs(cj.center[d] - ci.center[d]) > 0.5 * (cj.side + ci.side)) meet = false;
      if (meet) nb.push_back(j);
    }
    auto eta = [&](const Point& u) {
      Point x{qi.center[0] + qi.side * u[0], qi.center[1] + qi.side * u[1]};
      double num = 0.0, den = 0.0;
      for (auto j : nb) {
        const Cube& q = c.cubes[j].cube;
        Point v{(x[0] - q.center[0]) / q.side, n == 2 ? (x[1] - q.center[1]) / q.side : 0.0};
        double xv = xi_profile(v, n, c.a, K);
        den += xv;
        if (j == i) num = xv;
      }
      return den > 0.0 ? num / den : 0.0;
    };
    // eta is only a partition on the set; a stencil reaching past an outer face would
    // see the grid's hard edge, which the continuum cover never has
    auto in_set = [&](const Point& u) {
      int i0 = c.grid.cell_of(qi.center[0] + qi.side * u[0]);
      int i1 = n == 2 ? c.grid.cell_of(qi.center[1] + qi.side * u[1]) : 0;
      if (i0 < 0 || i0 >= c.grid.m || i1 < 0 || (n == 2 && i1 >= c.grid.m)) return false;
      return c.owner[c.grid.index(i0, i1)] != -1;
    };
    double worst = 0.0;
    for (int d = 0; d < n; ++d)
      for (double sgn : {-1.0, 1.0})
        for (double other : {0.0, 0.3}) {
          for (double t = 0.5 - band; t <= 0.5 * c.a + band; t += du) {
            for (int k = 1; k <= max_order; ++k) {
              // k-th central difference
              double acc = 0.0, binom = 1.0;
              bool inside = true;
              for (int r = 0; r <= k; ++r) {
                Point u{0.0, 0.0};
                u[d] = sgn * (t + (0.5 * k - r) * du);
                if (n == 2) u[1 - d] = other;
                inside = inside && in_set(u);
                acc += ((r % 2) ? -binom : binom) * eta(u);
                binom = binom * (k - r) / (r + 1);
              }
              if (!inside) continue;
              const double deriv = std::abs(acc) / std::pow(du, k);
              worst = std::max(worst, deriv * std::pow(band, k));
            }
          }
        }
    rep.per_cube.push_back(worst);
  }
  auto [lo, hi] = std::minmax_element(rep.per_cube.begin(), rep.per_cube.end());
  rep.min = *lo;
  rep.max = *hi;
  return rep;
}

}  // namespace hardyloc
