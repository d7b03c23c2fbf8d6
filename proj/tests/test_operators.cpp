#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fftw3.h>

#include <cmath>

#include "hardyloc/atoms.hpp"
#include "hardyloc/boundedness.hpp"
#include "hardyloc/corpus.hpp"
#include "oracles.hpp"

using namespace hardyloc;

namespace {

constexpr double kCi1 = 0.337403922900968135;  // Ci(1)
constexpr double kSi1 = 0.946083070367183015;  // Si(1)

double max_diff(const SampledFunction& a, const SampledFunction& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

SampledFunction impulse(const Grid& g) {
  SampledFunction d(g);
  const std::size_t c = g.m / 2;
  d.values[g.n == 1 ? c : c * g.m + c] = 1.0;
  return d;
}

// relative L^2 distance between T f on m cells and T f on 4m cells read at the coarse centres
double refined_error(int m, const StronglySingularKernel& k) {
  Grid g = make_grid(1, 8.0, m), gf = make_grid(1, 8.0, 4 * m);
  auto T = strongly_singular_apply(corpus_function(g, "bump"), k);
  auto Tf = strongly_singular_apply(corpus_function(gf, "bump"), k);
  double num = 0.0, den = 0.0;
  for (int j = 0; j < m; ++j) {
    const cplx ref = 0.5 * (Tf.values[4 * j + 1] + Tf.values[4 * j + 2]);
    num += std::norm(T.values[j] - ref);
    den += std::norm(ref);
  }
  return std::sqrt(num / den);
}

// Multiplier through FFTW: FFT index r carries xi = r / 2L (r < m/2) or (r - m) / 2L.
SampledFunction fftw_multiplier(const SampledFunction& f, const std::function<cplx(double, double)>& sigma) {
  const Grid& g = f.grid;
  const int m = g.m;
  std::vector<cplx> a(f.values), b(g.size());
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  fftw_plan fw = g.n == 1 ? fftw_plan_dft_1d(m, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE)
                          : fftw_plan_dft_2d(m, m, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(fw);
  fftw_destroy_plan(fw);
  auto xi = [&](int r) { return (r < m / 2 ? r : r - m) / (2.0 * g.L); };
  for (int r0 = 0; r0 < m; ++r0)
    for (int r1 = 0; r1 < (g.n == 2 ? m : 1); ++r1) {
      const std::size_t i = g.n == 2 ? std::size_t(r0) * m + r1 : std::size_t(r0);
      b[i] *= sigma(xi(r0), g.n == 2 ? xi(r1) : 0.0);
    }
  fftw_plan bw = g.n == 1 ? fftw_plan_dft_1d(m, pb, pa, FFTW_BACKWARD, FFTW_ESTIMATE)
                          : fftw_plan_dft_2d(m, m, pb, pa, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(bw);
  fftw_destroy_plan(bw);
  SampledFunction out(g, false);
  for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = a[i] / double(g.size());
  return out;
}

// midpoint rule at K and 2K points per axis, Richardson-extrapolated (error ~ K^-2)
cplx cell_oracle(const std::function<cplx(double, double)>& fn, int n, double x0, double x1, double y0, double y1,
                 int K) {
  const cplx a = oracle::box_integral(fn, n, x0, x1, y0, y1, K);
  const cplx b = oracle::box_integral(fn, n, x0, x1, y0, y1, 2 * K);
  return (4.0 * b - a) / 3.0;
}

}  // namespace

TEST_CASE("kernel shape") {
  StronglySingularKernel k;
  for (double r : {0.01, 0.3, 0.99, 1.4, 1.9}) {
    CHECK(k(Point{r, 0.0}, 1) == k(Point{-r, 0.0}, 1));
    CHECK(std::abs(k(Point{r, 0.0}, 1)) <= 1.0 / r + 1e-15);
  }
  CHECK(k(Point{0.0, 0.0}, 1) == cplx(0.0));
  CHECK(k(Point{2.0, 0.0}, 1) == cplx(0.0));
  CHECK(k.cutoff(0.5) == 1.0);
  CHECK(k.cutoff(1.0) == 1.0);
  CHECK(k.cutoff(2.0) == 0.0);
  CHECK(std::abs(k(Point{0.6, 0.8}, 2)) == doctest::Approx(1.0));
  CHECK(std::arg(k(Point{0.5, 0.0}, 1)) == doctest::Approx(2.0));
}

TEST_CASE("cell weights are exact integrals of the kernel") {
  StronglySingularKernel k;
  Grid g = make_grid(1, 8.0, 1024);
  auto w = strongly_singular_apply(impulse(g), k);
  const int c = g.m / 2;
  const double h = g.h;
  auto k1 = [&](double x, double) { return k(Point{x, 0.0}, 1); };

  // diagonal: 2 int_0^{h/2} = 2 F((h/2)^-1)
  CHECK(std::abs(w.values[c] - 2.0 * oracle::oscillatory_tail(2.0 / h)) <= 1e-10);
  // oscillating near cells, a plain cell, the cell straddling |z| = 1, the outer shell
  for (int j : {1, 2, 5, 32, 64, 100, 128})
    CHECK(std::abs(w.values[c + j] - cell_oracle(k1, 1, (j - 0.5) * h, (j + 0.5) * h, 0, 0, 200000)) <=
          1e-10);
  for (int j = 1; j < 140; ++j) CHECK(w.values[c + j] == w.values[c - j]);

  // the weights tile [-2, 2]: sum = 2 (F(1) + int_1^2 k)
  cplx sum = 0.0;
  for (auto v : w.values) sum += v;
  const cplx F1(-kCi1, M_PI / 2 - kSi1);
  CHECK(std::abs(oracle::oscillatory_tail(1.0) - F1) <= 1e-9);
  const cplx outer = cell_oracle(k1, 1, 1.0, 2.0, 0, 0, 500000);
  CHECK(std::abs(sum - 2.0 * (F1 + outer)) <= 1e-10);

  SUBCASE("theta changes the closed form") {
    StronglySingularKernel k2;
    k2.theta = 0.5;
    auto w2 = strongly_singular_apply(impulse(g), k2);
    // int_{-h/2}^{h/2} = (2 / theta) F((h/2)^-theta)
    CHECK(std::abs(w2.values[c] - 4.0 * oracle::oscillatory_tail(std::pow(h / 2, -0.5))) <= 1e-10);
  }

  SUBCASE("2D: polar cells") {
    Grid g2 = make_grid(2, 4.0, 128);
    auto w2 = strongly_singular_apply(impulse(g2), k);
    const int c2 = 64;
    const double h2 = g2.h;
    auto k2 = [&](double x, double y) { return k(Point{x, y}, 2); };
    auto at = [&](int a, int b) { return w2.values[std::size_t(c2 + a) * 128 + c2 + b]; };
    for (auto [a, b] : {std::pair{1, 0}, std::pair{2, 1}, std::pair{20, 7}, std::pair{16, 0}}) {
      auto ref = cell_oracle(k2, 2, (a - 0.5) * h2, (a + 0.5) * h2, (b - 0.5) * h2, (b + 0.5) * h2, 1000);
      CHECK(std::abs(at(a, b) - ref) <= 1e-8 * std::abs(ref));
      CHECK(at(a, b) == at(-b, a));
      CHECK(at(a, b) == at(b, -a));
    }
    // total over the plane: 2 pi int_0^2 e^{i/r} v(r) dr / r
    cplx s2 = 0.0;
    for (auto v : w2.values) s2 += v;
    CHECK(std::abs(s2 - 2.0 * M_PI * (F1 + outer)) <= 1e-9);
  }
}

TEST_CASE("refined-grid oracle for T") {
  StronglySingularKernel k;
  double prev = 1.0;
  for (int m : {256, 512, 1024}) {
    const double e = refined_error(m, k);
    CHECK(e <= 0.05);
    CHECK(e < prev);
    prev = e;
  }
  // point sampling aliases the phase near the diagonal and does not converge
  StronglySingularKernel pt;
  pt.rule = KernelRule::point;
  CHECK(refined_error(1024, pt) > 0.5);
}

TEST_CASE("T is linear and translation equivariant") {
  StronglySingularKernel k;
  Grid g = make_grid(1, 8.0, 512);
  auto f = corpus_function(g, "bump"), u = corpus_function(g, "random:2");
  CHECK(strongly_singular_apply(SampledFunction(g), k).max_abs() == 0.0);
  auto lhs = strongly_singular_apply(2.0 * f + (-0.5) * u, k);
  auto rhs = 2.0 * strongly_singular_apply(f, k) + (-0.5) * strongly_singular_apply(u, k);
  CHECK(max_diff(lhs, rhs) <= 1e-12 * lhs.max_abs());

  const int s = 7;
  SampledFunction fs(g);
  for (int i = s; i < g.m; ++i) fs.values[i] = f.values[i - s];
  auto Tf = strongly_singular_apply(f, k), Tfs = strongly_singular_apply(fs, k);
  for (int i = s; i < g.m; ++i) CHECK(Tfs.values[i] == Tf.values[i - s]);

  SampledFunction edge(g);
  edge.values[3] = 1.0;
  CHECK_THROWS_WITH_AS(strongly_singular_apply(edge, k), doctest::Contains("leaves the grid"), Error);
  StronglySingularKernel bad;
  bad.theta = 0.0;
  CHECK_THROWS_AS(strongly_singular_apply(f, bad), Error);
}

TEST_CASE("commutators") {
  StronglySingularKernel k;
  Grid g = make_grid(1, 8.0, 512);
  auto f = corpus_function(g, "multi-bump");
  auto c3 = SampledFunction::from(g, [](const Point&) { return 3.0; });
  const double scale = strongly_singular_apply(f, k).max_abs();
  CHECK(commutator_apply(c3, f, k).max_abs() <= 1e-12 * scale);
  CHECK(commutator_integrand(c3, f, k).max_abs() == 0.0);

  auto b1 = SampledFunction::from(g, [](const Point& x) { return std::sin(x[0]); });
  auto b2 = SampledFunction::from(g, [](const Point& x) { return std::log(1.0 + std::abs(x[0])); });
  CHECK(max_diff(commutator_apply(b1, f, k), commutator_integrand(b1, f, k)) <= 1e-10 * scale);
  auto sum = commutator_integrand(b1 + b2, f, k);
  auto parts = commutator_integrand(b1, f, k) + commutator_integrand(b2, f, k);
  CHECK(max_diff(sum, parts) <= 1e-12 * scale);

  SampledFunction cb(g, false);
  CHECK_THROWS_AS(commutator_apply(cb, f, k), Error);
  CHECK_THROWS_AS(commutator_apply(b1, corpus_function(make_grid(1, 8.0, 256), "bump"), k), Error);
}

TEST_CASE("pseudo-differential operators") {
  Grid g = make_grid(1, 8.0, 256);
  auto f = corpus_function(g, "random:1");
  const double scale = f.max_abs();

  CHECK(max_diff(psdo_apply(f, symbol_identity()), f) <= 1e-10 * scale);

  auto ip = symbol_imaginary_power(0.5);
  auto ref = fftw_multiplier(f, [&](double a, double b) { return ip.eval({0.0, 0.0}, {a, b}); });
  CHECK(max_diff(psdo_apply(f, ip), ref) <= 1e-10 * scale);
  // the general (x-dependent) path agrees with the separable one
  auto slow = ip;
  slow.x_independent = false;
  CHECK(max_diff(psdo_apply(f, slow), psdo_apply(f, ip)) <= 1e-10 * scale);

  auto co = psdo_apply(f, symbol_coefficient());
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(co.values[i] - (1.0 + 0.5 * std::cos(g.coord(int(i)))) * f.values[i]) <= 1e-10 * scale);

  Grid g2 = make_grid(2, 4.0, 32);
  auto f2 = SampledFunction::from(g2, [](const Point& x) { return std::exp(-x[0] * x[0] - 2.0 * x[1] * x[1]) * (1 + x[0]); });
  auto ip2 = symbol_imaginary_power(1.5);
  auto ref2 = fftw_multiplier(f2, [&](double a, double b) { return ip2.eval({0.0, 0.0}, {a, b}); });
  CHECK(max_diff(psdo_apply(f2, ip2), ref2) <= 1e-10 * f2.max_abs());
  auto slow2 = ip2;
  slow2.x_independent = false;
  CHECK(max_diff(psdo_apply(f2, slow2), ref2) <= 1e-10 * f2.max_abs());

  CHECK(parse_symbol("imaginary-power:0.25").name == "imaginary-power:0.25");
  CHECK_THROWS_AS(parse_symbol("imaginary-power:x"), Error);
  CHECK_THROWS_AS(parse_symbol("nope"), Error);
}

TEST_CASE("symbol derivative tables") {
  for (auto s : {symbol_identity(), symbol_coefficient(), symbol_imaginary_power(0.5), symbol_mixed()})
    for (int n : {1, 2}) {
      auto t = symbol_derivative_table(s, n);
      CHECK(t.finite());
      CHECK(t.C[0][0] >= 1.0 - 1e-12);
    }
  auto id = symbol_derivative_table(symbol_identity(), 1);
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b) CHECK(id.C[a][b] == (a == 0 && b == 0 ? 1.0 : 0.0));
}

TEST_CASE("boundedness experiments") {
  auto corpus = [](const Grid& g) { return corpus_generate(g, CorpusSpec{}); };
  Grid g = make_grid(1, 8.0, 512);

  OperatorSpec id;
  auto r = boundedness_experiment(id, parse_weight("exp:1", g), 2.0, corpus(g), BoundMode::strong);
  for (double v : r.ratios) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  OperatorSpec T;
  T.kind = OperatorSpec::Kind::strongly_singular;
  auto rT = boundedness_refinement(T, "const:1", 2.0, corpus, BoundMode::strong, 1, 8.0, 1024, 2048);
  CHECK(rT.stable);
  CHECK(rT.drift <= 0.25);
  CHECK(rT.coarse.sup_ratio == doctest::Approx(1.49743501298735).epsilon(1e-9));  // frozen

  auto atoms = [](const Grid& gg) {
    Weight w = parse_weight("exp:1", gg);
    std::vector<SampledFunction> out;
    for (auto& a : test_atom_family(gg, w, 20, 1.0, kInf, 0)) out.push_back(a.dense());
    return out;
  };
  auto rA = boundedness_refinement(T, "exp:1", 1.0, atoms, BoundMode::atom_l1, 1, 8.0, 1024, 2048);
  CHECK(rA.stable);
  CHECK(rA.drift <= 0.25);

  OperatorSpec C = T;
  C.kind = OperatorSpec::Kind::commutator;
  C.b = [](const Point& x) { return std::sin(x[0]); };
  auto rC = boundedness_experiment(C, parse_weight("const:1", g), 2.0, corpus(g), BoundMode::strong);
  CHECK(rC.b_bmo > 0.0);
  CHECK(std::isfinite(rC.sup_ratio));
  C.b = [](const Point&) { return 1.0; };
  CHECK_THROWS_WITH_AS(boundedness_experiment(C, parse_weight("const:1", g), 2.0, corpus(g), BoundMode::strong),
                       doctest::Contains("zero BMO"), Error);

  auto rW = boundedness_experiment(T, parse_weight("const:1", g), 1.0, corpus(g), BoundMode::weak);
  CHECK(!rW.probes.empty());
  CHECK(std::isfinite(rW.sup_ratio));

  auto d = make_dictionary(2, 1, DictionarySpec{});
  auto rH = boundedness_experiment(T, parse_weight("exp:1", g), 1.0, corpus(g), BoundMode::hardy_to_l1, &d);
  CHECK(std::isfinite(rH.sup_ratio));
  CHECK(rH.sup_ratio > 0.0);

  for (auto m : {BoundMode::strong, BoundMode::weak, BoundMode::hardy_to_l1, BoundMode::hardy_to_hardy,
                 BoundMode::atom_l1})
    CHECK(parse_bound_mode(to_string(m)) == m);
  CHECK_THROWS(parse_bound_mode("sideways"));
}
