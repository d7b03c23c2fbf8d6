#include "hardyloc/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "hardyloc/whitney.hpp"

namespace hardyloc {

double StronglySingularKernel::cutoff(double r) const { return 1.0 - smoothstep(r - 1.0, cutoff_order); }

cplx StronglySingularKernel::operator()(const Point& z, int n) const {
  const double r = n == 1 ? std::abs(z[0]) : std::hypot(z[0], z[1]);
  if (r == 0.0 || r >= outer) return 0.0;
  const double v = cutoff(r);
  if (v == 0.0) return 0.0;
  return std::polar(v / (n == 1 ? r : r * r), std::pow(r, -theta));
}

namespace {

// F(a) = int_a^inf e^{iu}/u du = -Ci(a) + i (pi/2 - Si(a)), a > 0.
cplx tail_integral(double a) {
  if (a <= 2.0) {
    // power series of Ci and Si
    double ci = 0.5772156649015329 + std::log(a), si = 0.0;
    double term = 1.0;  // (-1)^k a^k / k!
    for (int k = 1; k < 60; ++k) {
      term *= a / k;
      if (k % 2 == 0) {
        const double t = ((k / 2) % 2 ? -term : term) / k;
        ci += t;
        if (std::abs(t) < 1e-17 * std::abs(ci)) break;
      } else {
        si += (((k - 1) / 2) % 2 ? -term : term) / k;
      }
    }
    return {-ci, M_PI / 2 - si};
  }
  // Lentz continued fraction for E1(i a); F = conj(e^{-ia} cf)
  cplx b(1.0, a), c = 1e300, d = 1.0 / b, h = d;
  for (int i = 2; i < 100000; ++i) {
    const double an = -double(i - 1) * double(i - 1);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::conj(std::polar(1.0, -a) * h);
}

// int_lo^hi e^{i r^-theta} v(r) dr / r; closed form where v = 1, Gauss-Legendre on [1, 2].
cplx radial_integral(double lo, double hi, const StronglySingularKernel& k) {
  cplx acc = 0.0;
  const double mid = std::min(hi, 1.0);
  if (lo < mid) {
    const double th = k.theta;
    const cplx fhi = tail_integral(std::pow(mid, -th));
    const cplx flo = lo > 0.0 ? tail_integral(std::pow(lo, -th)) : cplx(0.0);
    acc += (fhi - flo) / th;
  }
  const double a = std::max(lo, 1.0), b = std::min(hi, StronglySingularKernel::outer);
  if (a < b)
    acc += boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double r) { return k(Point{r, 0.0}, 1); }, a, b);
  return acc;
}

// Integral of k over [x0, x1] x [y0, y1] in polar form; angular pieces split at the corners.
cplx square_integral(double x0, double x1, double y0, double y1, const StronglySingularKernel& k) {
  const bool origin = x0 <= 0.0 && x1 >= 0.0 && y0 <= 0.0 && y1 >= 0.0;
  std::vector<double> cuts;
  for (double x : {x0, x1})
    for (double y : {y0, y1}) cuts.push_back(std::atan2(y, x));
  double lo, hi;
  if (origin) {
    lo = -M_PI;
    hi = M_PI;
  } else {
    // angular span seen from the origin; the square never wraps past -pi unless it meets x < 0, y = 0
    std::vector<double> a = cuts;
    if (x1 < 0.0 && y0 < 0.0 && y1 > 0.0)
      for (auto& t : a)
        if (t < 0.0) t += 2.0 * M_PI;
    lo = *std::min_element(a.begin(), a.end());
    hi = *std::max_element(a.begin(), a.end());
    cuts = a;
  }
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  auto ray = [&](double phi) -> cplx {
    const double c = std::cos(phi), s = std::sin(phi);
    double tin = 0.0, tout = std::numeric_limits<double>::infinity();
    auto slab = [&](double dir, double a, double b) {
      if (std::abs(dir) < 1e-300) {
        if (a > 0.0 || b < 0.0) tout = -1.0;
        return;
      }
      double t0 = a / dir, t1 = b / dir;
      if (t0 > t1) std::swap(t0, t1);
      tin = std::max(tin, t0);
      tout = std::min(tout, t1);
    };
    slab(c, x0, x1);
    slab(s, y0, y1);
    if (!(tout > tin)) return 0.0;
    return radial_integral(tin, tout, k);
  };
  const double rmin = origin ? 0.0 : std::hypot(std::max({x0, -x1, 0.0}), std::max({y0, -y1, 0.0}));
  const double rmax = std::hypot(std::max(std::abs(x0), std::abs(x1)), std::max(std::abs(y0), std::abs(y1)));
  // the radial tails oscillate along the edges; subdivide by the phase swing across the square
  const double swing = rmin > 0.0 ? std::pow(rmin, -k.theta) - std::pow(rmax, -k.theta) : 0.0;
  const int pieces = std::min(512, 1 + int(std::ceil(swing / 2.0)));
  cplx acc = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    if (cuts[c] < lo || cuts[c + 1] > hi || cuts[c + 1] - cuts[c] < 1e-15) continue;
    const double w = (cuts[c + 1] - cuts[c]) / pieces;
    for (int p = 0; p < pieces; ++p) {
      const double a = cuts[c] + p * w;
      acc += boost::math::quadrature::gauss<double, 20>::integrate(ray, a, a + w);
    }
  }
  return acc;
}

struct Lattice {
  int R = 0;
  std::vector<std::array<int, 2>> off;
  std::vector<cplx> val;  // includes the h^n factor
};

cplx cell_weight(const Grid& g, const StronglySingularKernel& k, int a, int b) {
  const double h = g.h;
  if (k.rule == KernelRule::point) return k(Point{a * h, b * h}, g.n) * g.cell_volume();
  if (g.n == 1) {
    if (a == 0) return 2.0 * radial_integral(0.0, 0.5 * h, k);
    const double lo = (std::abs(a) - 0.5) * h, hi = (std::abs(a) + 0.5) * h;
    return radial_integral(lo, hi, k);
  }
  return square_integral((a - 0.5) * h, (a + 0.5) * h, (b - 0.5) * h, (b + 0.5) * h, k);
}

Lattice lattice(const Grid& g, const StronglySingularKernel& k) {
  if (!(k.theta > 0.0)) throw Error("kernel exponent theta must be positive");
  Lattice L;
  // cells meeting B(0, 2)
  L.R = int(std::ceil(StronglySingularKernel::outer / g.h + 0.5));
  const int R1 = g.n == 2 ? L.R : 0;
  const int skip = k.rule == KernelRule::point ? std::max(k.excluded_radius, 0) : k.excluded_radius;
  // the kernel is radial: weights depend on the sorted |offsets| only
  std::map<std::pair<int, int>, cplx> seen;
  for (int a = -L.R; a <= L.R; ++a)
    for (int b = -R1; b <= R1; ++b) {
      if (std::max(std::abs(a), std::abs(b)) <= skip) continue;
      const std::pair<int, int> key{std::min(std::abs(a), std::abs(b)), std::max(std::abs(a), std::abs(b))};
      auto it = seen.find(key);
      if (it == seen.end()) it = seen.emplace(key, cell_weight(g, k, key.second, key.first)).first;
      const cplx v = it->second;
      if (v == cplx(0.0)) continue;
      L.off.push_back({a, b});
      L.val.push_back(v);
    }
  return L;
}

void check_reach(const SampledFunction& f, int R) {
  const Grid& g = f.grid;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.values[i] == cplx(0.0)) continue;
    auto ij = g.unravel(i);
    for (int d = 0; d < g.n; ++d)
      if (ij[d] - R < 0 || ij[d] + R >= g.m)
        throw Error("support of f plus the kernel reach leaves the grid");
  }
}

// out(x) = sum_o K(o) f(x - o), fixed offset order.
std::vector<cplx> gather(const Grid& g, const Lattice& L, const std::vector<cplx>& f) {
  std::vector<cplx> out(g.size());
  const int m = g.m;
  if (g.n == 1) {
    for (int x = 0; x < m; ++x) {
      cplx acc = 0.0;
      for (std::size_t o = 0; o < L.off.size(); ++o) {
        const int y = x - L.off[o][0];
        if (y >= 0 && y < m) acc += L.val[o] * f[y];
      }
      out[x] = acc;
    }
  } else {
    for (int x0 = 0; x0 < m; ++x0)
      for (int x1 = 0; x1 < m; ++x1) {
        cplx acc = 0.0;
        for (std::size_t o = 0; o < L.off.size(); ++o) {
          const int y0 = x0 - L.off[o][0], y1 = x1 - L.off[o][1];
          if (y0 >= 0 && y0 < m && y1 >= 0 && y1 < m) acc += L.val[o] * f[std::size_t(y0) * m + y1];
        }
        out[std::size_t(x0) * m + x1] = acc;
      }
  }
  return out;
}

}  // namespace

SampledFunction strongly_singular_apply(const SampledFunction& f, const StronglySingularKernel& k) {
  Lattice L = lattice(f.grid, k);
  check_reach(f, L.R);
  return SampledFunction(f.grid, gather(f.grid, L, f.values), false);
}

SampledFunction commutator_apply(const SampledFunction& b, const SampledFunction& f,
                                 const StronglySingularKernel& k) {
  if (!b.real) throw Error("commutator symbol b must be real-valued");
  if (!(b.grid == f.grid)) throw Error("grid mismatch");
  SampledFunction tf = strongly_singular_apply(f, k);
  SampledFunction tbf = strongly_singular_apply(multiply(b, f), k);
  SampledFunction out(f.grid, false);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = b.re(i) * tf.values[i] - tbf.values[i];
  return out;
}

SampledFunction commutator_integrand(const SampledFunction& b, const SampledFunction& f,
                                     const StronglySingularKernel& k) {
  if (!b.real) throw Error("commutator symbol b must be real-valued");
  if (!(b.grid == f.grid)) throw Error("grid mismatch");
  const Grid& g = f.grid;
  Lattice L = lattice(g, k);
  check_reach(f, L.R);
  SampledFunction out(g, false);
  const int m = g.m;
  for (std::size_t x = 0; x < g.size(); ++x) {
    auto xi = g.unravel(x);
    cplx acc = 0.0;
    for (std::size_t o = 0; o < L.off.size(); ++o) {
      const int y0 = xi[0] - L.off[o][0];
      const int y1 = g.n == 2 ? xi[1] - L.off[o][1] : 0;
      if (y0 < 0 || y0 >= m || y1 < 0 || y1 >= m) continue;
      const std::size_t y = g.n == 2 ? std::size_t(y0) * m + y1 : std::size_t(y0);
      acc += (b.re(x) - b.re(y)) * L.val[o] * f.values[y];
    }
    out.values[x] = acc;
  }
  return out;
}

Symbol symbol_identity() {
  return {"identity", [](const Point&, const Point&) { return cplx(1.0); }, 0.0, 0.0, true};
}

Symbol symbol_coefficient() {
  return {"coefficient", [](const Point& x, const Point&) { return cplx(1.0 + 0.5 * std::cos(x[0])); },
          0.0, 0.0, false};
}

Symbol symbol_imaginary_power(double t) {
  std::ostringstream nm;
  nm << "imaginary-power:" << t;
  return {nm.str(),
          [t](const Point&, const Point& xi) {
            const double r2 = xi[0] * xi[0] + xi[1] * xi[1];
            return std::polar(1.0, -t * std::log1p(r2));
          },
          0.0, 0.0, true};
}

Symbol symbol_mixed() {
  return {"mixed",
          [](const Point& x, const Point& xi) {
            const double r2 = xi[0] * xi[0] + xi[1] * xi[1];
            return cplx(1.0 + 0.5 * std::sin(x[0]) * r2 / (1.0 + r2));
          },
          0.0, 0.0, false};
}

Symbol parse_symbol(const std::string& desc) {
  if (desc == "identity") return symbol_identity();
  if (desc == "coefficient") return symbol_coefficient();
  if (desc == "mixed") return symbol_mixed();
  const std::string pre = "imaginary-power:";
  if (desc.rfind(pre, 0) == 0) {
    try {
      return symbol_imaginary_power(std::stod(desc.substr(pre.size())));
    } catch (const std::logic_error&) {
    }
  }
  throw Error("unknown symbol '" + desc + "'");
}

bool SymbolBounds::finite() const {
  for (auto& row : C)
    for (double v : row)
      if (!std::isfinite(v)) return false;
  return true;
}

SymbolBounds symbol_derivative_table(const Symbol& s, int n, int max_order, double x_range,
                                     double xi_range, int samples) {
  SymbolBounds out;
  out.max_order = max_order;
  out.C.assign(max_order + 1, std::vector<double>(max_order + 1, 0.0));
  auto binom = [](int a, int b) {
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  const double hx = 1e-2;
  for (int ix = 0; ix < samples; ++ix)
    for (int iz = 0; iz < samples; ++iz) {
      const double x0 = -x_range + 2.0 * x_range * ix / (samples - 1);
      const double z0 = -xi_range + 2.0 * xi_range * iz / (samples - 1);
      const double hz = 1e-2 * (1.0 + std::abs(z0));
      for (int a = 0; a <= max_order; ++a)
        for (int b = 0; b <= max_order; ++b) {
          cplx acc = 0.0;
          for (int p = 0; p <= a; ++p)
            for (int q = 0; q <= b; ++q) {
              Point x{x0 + (0.5 * a - p) * hx, n == 2 ? 0.3 : 0.0};
              Point z{z0 + (0.5 * b - q) * hz, n == 2 ? 0.7 : 0.0};
              const double c = binom(a, p) * binom(b, q) * (((p + q) % 2) ? -1.0 : 1.0);
              acc += c * s.eval(x, z);
            }
          const double d = std::abs(acc) / (std::pow(hx, a) * std::pow(hz, b));
          const double scale = std::pow(1.0 + std::abs(z0), s.order - b + s.delta * a);
          out.C[a][b] = std::max(out.C[a][b], d / scale);
        }
    }
  return out;
}

double frequency(const Grid& g, int j) { return (j - g.m / 2) / (2.0 * g.L); }

namespace {

// e^{2 pi i x_k xi_j} = (-1)^j w^{(2k+1) j}, w = e^{2 pi i / (2m)}, j signed.
struct Twiddle {
  int m;
  std::vector<cplx> W;
  explicit Twiddle(int m_) : m(m_), W(2 * std::size_t(m_)) {
    for (int r = 0; r < 2 * m; ++r) W[r] = std::polar(1.0, M_PI * r / m);
  }
  cplx operator()(int k, int jj) const {  // jj in [0, m)
    const long j = jj - m / 2;
    long e = ((2L * k + 1) * j) % (2L * m);
    if (e < 0) e += 2L * m;
    cplx v = W[std::size_t(e)];
    return (j & 1) ? -v : v;
  }
};

}  // namespace

std::vector<cplx> grid_fourier(const SampledFunction& f) {
  const Grid& g = f.grid;
  const int m = g.m;
  Twiddle T(m);
  if (g.n == 1) {
    std::vector<cplx> out(m);
    for (int j = 0; j < m; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < m; ++k)
        if (f.values[k] != cplx(0.0)) acc += f.values[k] * std::conj(T(k, j));
      out[j] = acc * g.h;
    }
    return out;
  }
  std::vector<cplx> tmp(g.size()), out(g.size());
  for (int k0 = 0; k0 < m; ++k0)
    for (int j1 = 0; j1 < m; ++j1) {
      cplx acc = 0.0;
      for (int k1 = 0; k1 < m; ++k1) acc += f.values[std::size_t(k0) * m + k1] * std::conj(T(k1, j1));
      tmp[std::size_t(k0) * m + j1] = acc;
    }
  for (int j0 = 0; j0 < m; ++j0)
    for (int j1 = 0; j1 < m; ++j1) {
      cplx acc = 0.0;
      for (int k0 = 0; k0 < m; ++k0) acc += tmp[std::size_t(k0) * m + j1] * std::conj(T(k0, j0));
      out[std::size_t(j0) * m + j1] = acc * g.cell_volume();
    }
  return out;
}

SampledFunction psdo_apply(const SampledFunction& f, const Symbol& s) {
  const Grid& g = f.grid;
  const int m = g.m;
  const double dxi = 1.0 / (2.0 * g.L);
  const double dv = g.n == 1 ? dxi : dxi * dxi;
  Twiddle T(m);
  auto fh = grid_fourier(f);
  SampledFunction out(g, false);
  if (g.n == 1) {
    std::vector<cplx> sig(m);
    if (s.x_independent)
      for (int j = 0; j < m; ++j) sig[j] = s.eval({0.0, 0.0}, {frequency(g, j), 0.0});
    for (int k = 0; k < m; ++k) {
      const Point x{g.coord(k), 0.0};
      cplx acc = 0.0;
      for (int j = 0; j < m; ++j) {
        const cplx sv = s.x_independent ? sig[j] : s.eval(x, {frequency(g, j), 0.0});
        acc += sv * T(k, j) * fh[j];
      }
      out.values[k] = acc * dv;
    }
    return out;
  }
  if (s.x_independent) {
    for (int j0 = 0; j0 < m; ++j0)
      for (int j1 = 0; j1 < m; ++j1)
        fh[std::size_t(j0) * m + j1] *= s.eval({0.0, 0.0}, {frequency(g, j0), frequency(g, j1)});
    std::vector<cplx> tmp(g.size());
    for (int j0 = 0; j0 < m; ++j0)
      for (int k1 = 0; k1 < m; ++k1) {
        cplx acc = 0.0;
        for (int j1 = 0; j1 < m; ++j1) acc += fh[std::size_t(j0) * m + j1] * T(k1, j1);
        tmp[std::size_t(j0) * m + k1] = acc;
      }
    for (int k0 = 0; k0 < m; ++k0)
      for (int k1 = 0; k1 < m; ++k1) {
        cplx acc = 0.0;
        for (int j0 = 0; j0 < m; ++j0) acc += tmp[std::size_t(j0) * m + k1] * T(k0, j0);
        out.values[std::size_t(k0) * m + k1] = acc * dv;
      }
    return out;
  }
  for (int k0 = 0; k0 < m; ++k0)
    for (int k1 = 0; k1 < m; ++k1) {
      const Point x{g.coord(k0), g.coord(k1)};
      cplx acc = 0.0;
      for (int j0 = 0; j0 < m; ++j0) {
        const cplx e0 = T(k0, j0);
        for (int j1 = 0; j1 < m; ++j1)
          acc += s.eval(x, {frequency(g, j0), frequency(g, j1)}) * e0 * T(k1, j1) * fh[std::size_t(j0) * m + j1];
      }
      out.values[std::size_t(k0) * m + k1] = acc * dv;
    }
  return out;
}

}  // namespace hardyloc
