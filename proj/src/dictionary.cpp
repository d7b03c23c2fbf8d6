#include "hardyloc/dictionary.hpp"

#include <algorithm>
#include <cmath>

namespace hardyloc {

double bump(const Point& z, int n) {
  double r2 = z[0] * z[0] + (n == 2 ? z[1] * z[1] : 0.0);
  if (r2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r2));
}

Jet bump(const std::vector<Jet>& z) {
  const int n = int(z.size());
  Jet r2 = z[0] * z[0];
  if (n == 2) r2 += z[1] * z[1];
  if (r2.value() >= 1.0) return Jet(z[0].n(), z[0].degree());
  Jet u = 1.0 - r2;
  return exp(reciprocal(u) * -1.0);
}

double TestFunction::operator()(const Point& x) const {
  Point y{x[0] / dil, x[1] / dil};
  Point z{(y[0] - shift[0]) / rho, (y[1] - shift[1]) / rho};
  double v = bump(z, n);
  if (v == 0.0) return 0.0;
  return scale * v * (1.0 + mod * y[mod_axis]);
}

Jet TestFunction::jet(const Point& x, int D) const {
  std::vector<Jet> y, z;
  for (int d = 0; d < n; ++d) {
    y.push_back(Jet::variable(n, D, x[d], d) * (1.0 / dil));
    z.push_back((y[d] + (-shift[d])) * (1.0 / rho));
  }
  Jet b = bump(z);
  if (mod != 0.0) b = b * (1.0 + y[mod_axis] * mod);
  return b * scale;
}

namespace {

struct AlphaBest {
  int a, b;
  double val = 0.0;
  Point at{0.0, 0.0};
};

void scan(const TestFunction& g, int D, std::vector<AlphaBest>& best, const Point& c, double half,
          int pts) {
  const int n = g.n;
  const double step = 2.0 * half / (pts - 1);
  auto visit = [&](const Point& x) {
    Jet j = g.jet(x, D);
    for (auto& ab : best) {
      double v = std::abs(j.derivative(ab.a, ab.b));
      if (v > ab.val) {
        ab.val = v;
        ab.at = x;
      }
    }
  };
  if (n == 1) {
    for (int i = 0; i < pts; ++i) visit({c[0] - half + i * step, 0.0});
  } else {
    for (int i = 0; i < pts; ++i)
      for (int k = 0; k < pts; ++k) visit({c[0] - half + i * step, c[1] - half + k * step});
  }
}

}  // namespace

std::vector<double> derivative_sup_norms(const TestFunction& g, int D) {
  std::vector<AlphaBest> best;
  for (int k = 0; k <= D; ++k)
    for (int b = 0; b <= (g.n == 2 ? k : 0); ++b) best.push_back({k - b, b});
  const double r = g.support_radius;
  const Point c{g.dil * g.shift[0], g.dil * g.shift[1]};
  const int coarse = g.n == 1 ? 4001 : 161;
  scan(g, D, best, c, r, coarse);
  double step = 2.0 * r / (coarse - 1);
  // local refinement around each coarse maximiser
  for (auto& ab : best) {
    std::vector<AlphaBest> one{ab};
    double half = step;
    for (int round = 0; round < 4; ++round) {
      Point at = one[0].at;
      scan(g, D, one, at, half, g.n == 1 ? 41 : 21);
      half *= g.n == 1 ? 0.1 : 0.2;
    }
    ab = one[0];
  }
  std::vector<double> out(D + 1, 0.0);
  for (auto& ab : best) out[ab.a + ab.b] = std::max(out[ab.a + ab.b], ab.val);
  return out;
}

namespace {

double integral_of(const TestFunction& g) {
  const double r = g.support_radius;
  const Point c{g.dil * g.shift[0], g.dil * g.shift[1]};
  if (g.n == 1) {
    const int k = 20000;
    const double h = 2.0 * r / k;
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += g({c[0] - r + (i + 0.5) * h, 0.0});
    return s * h;
  }
  const int k = 800;
  const double h = 2.0 * r / k;
  double s = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) s += g({c[0] - r + (i + 0.5) * h, c[1] - r + (j + 0.5) * h});
  return s * h * h;
}

void normalise(TestFunction& g, int N) {
  g.scale = 1.0;
  auto norms = derivative_sup_norms(g, N + 1);
  double sup = *std::max_element(norms.begin(), norms.end());
  g.scale = 1.0 / (sup * (1.0 + 1e-10));
  for (auto& v : norms) v *= g.scale;
  g.deriv_norms = norms;
  g.integral = integral_of(g);
}

}  // namespace

double Dictionary::reach() const {
  double r = 0.0;
  for (auto& m : members) r = std::max(r, m.support_radius);
  return r * (scales.empty() ? 0.0 : *std::max_element(scales.begin(), scales.end()));
}

std::string to_string(DictVariant v) { return v == DictVariant::centered0 ? "centered0" : "wide"; }

DictVariant dict_variant_from_string(const std::string& s) {
  if (s == "centered0" || s == "D0") return DictVariant::centered0;
  if (s == "wide" || s == "D") return DictVariant::wide;
  throw Error("unknown dictionary variant '" + s + "'");
}

void check_scales(const std::vector<double>& scales) {
  for (double t : scales)
    if (!(t > 0.0 && t < 1.0)) throw Error("dictionary scales must lie in (0, 1)");
}

Dictionary make_dictionary(int N, int n, const DictionarySpec& spec, double L) {
  if (N < 2) throw Error("dictionary needs N >= 2");
  if (n != 1 && n != 2) throw Error("dimension must be 1 or 2");
  if (spec.members < 1) throw Error("dictionary needs at least one member");
  if (spec.scales < 1) throw Error("dictionary needs at least one scale");
  Dictionary d;
  d.N = N;
  d.n = n;
  d.variant = spec.variant;
  for (int j = 0; j < spec.scales; ++j) d.scales.push_back(std::ldexp(spec.t_max, -j));
  check_scales(d.scales);

  std::vector<TestFunction> cand;
  TestFunction base;
  base.name = "bump";
  base.n = n;
  cand.push_back(base);
  for (int axis = 0; axis < n; ++axis)
    for (double sgn : {1.0, -1.0}) {
      TestFunction t = base;
      t.mod_axis = axis;
      t.mod = 0.5 * sgn;
      t.name = std::string("bump*(1") + (sgn > 0 ? "+" : "-") + (axis == 0 ? "x" : "y") + "/2)";
      cand.push_back(t);
    }
  std::vector<Point> shifts;
  if (n == 1)
    shifts = {{0.25, 0}, {-0.25, 0}, {0.5, 0}, {-0.5, 0}};
  else
    shifts = {{0.25, 0}, {0, 0.25}, {-0.25, 0}, {0, -0.25}};
  for (auto& s : shifts) {
    TestFunction t = base;
    t.shift = s;
    t.rho = 1.0 - std::hypot(s[0], s[1]);
    t.name = "translate(" + std::to_string(s[0]) + (n == 2 ? "," + std::to_string(s[1]) : "") + ")";
    cand.push_back(t);
  }
  if (spec.members > int(cand.size())) throw Error("dictionary has at most " + std::to_string(cand.size()) + " members");
  cand.resize(spec.members);
  for (auto& t : cand) normalise(t, N);
  d.members = cand;

  if (spec.variant == DictVariant::wide) {
    if (!(L >= 2.0)) throw Error("wide dictionary needs the domain half-width L >= 2");
    const double full = std::ldexp(1.0, 3 * (10 + n));
    d.wide_radius = std::min(full, L / 2.0);
    d.wide_truncated = d.wide_radius < full;
    TestFunction w = d.members[0];
    w.dil = d.wide_radius;
    w.support_radius = d.wide_radius;
    w.name = "bump(x/R)";
    for (std::size_t k = 0; k < w.deriv_norms.size(); ++k)
      w.deriv_norms[k] = d.members[0].deriv_norms[k] * std::pow(d.wide_radius, -double(k));
    w.integral = d.members[0].integral * std::pow(d.wide_radius, n);
    d.members.push_back(w);
  }
  return d;
}

}  // namespace hardyloc
