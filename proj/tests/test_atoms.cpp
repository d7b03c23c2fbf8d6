#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "hardyloc/atoms.hpp"
#include "hardyloc/corpus.hpp"

using namespace hardyloc;

namespace {

Atom box_atom(const Grid& g, const Cube& q, const std::function<double(double)>& fn, double p) {
  Atom a;
  a.grid = g;
  a.cube = q;
  a.p = p;
  a.q = kInf;
  a.s = 0;
  for_each_cell(g, cells_in(g, q), [&](std::size_t i) {
    a.cells.push_back(i);
    a.vals.push_back(fn(g.coord(int(i))));
  });
  return a;
}

double err_inf(const SampledFunction& a, const SampledFunction& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a.values[i] - b.values[i]));
  return e;
}

HardyParams params(double p, int s) {
  auto hp = HardyParams::make(p, kInf, 1.0, 1);
  hp.s = s;
  hp.N = std::max(hp.N, s + 1);
  hp.validate();
  return hp;
}

}  // namespace

TEST_CASE("atom validation") {
  Grid g = make_grid(1, 8.0, 1024);
  Weight w = parse_weight("exp:1", g);
  const double p = 1.0;

  SUBCASE("normalised Haar oscillation on a small cube passes") {
    Cube q{{0.5, 0.0}, 0.5, 1, std::nullopt};
    const double c = std::pow(w.measure(q), -1.0 / p);
    auto a = box_atom(g, q, [&](double x) { return x < 0.5 ? -c : c; }, p);
    auto r = validate_atom(a, w);
    CHECK(r.moments_required);
    CHECK(r.pass());
    CHECK(r.moment_residual < 1e-12);
  }
  SUBCASE("indicator of a small cube fails on its mean") {
    Cube q{{0.5, 0.0}, 0.5, 1, std::nullopt};
    const double c = std::pow(w.measure(q), -1.0 / p);
    auto r = validate_atom(box_atom(g, q, [&](double) { return c; }, p), w);
    CHECK(r.support_ok);
    CHECK(r.norm_ok);
    CHECK_FALSE(r.moments_ok);
    CHECK_FALSE(r.pass());
  }
  SUBCASE("indicator of a unit cube passes without moments") {
    Cube q{{-2.0, 0.0}, 1.0, 1, std::nullopt};
    const double c = std::pow(w.measure(q), -1.0 / p);
    auto r = validate_atom(box_atom(g, q, [&](double) { return c; }, p), w);
    CHECK_FALSE(r.moments_required);
    CHECK(r.pass());
  }
  SUBCASE("overshooting the normalisation or the cube fails") {
    Cube q{{-2.0, 0.0}, 1.0, 1, std::nullopt};
    const double c = 1.01 * std::pow(w.measure(q), -1.0 / p);
    CHECK_FALSE(validate_atom(box_atom(g, q, [&](double) { return c; }, p), w).norm_ok);
    auto a = box_atom(g, q, [&](double) { return 0.5 * c; }, p);
    a.cube = Cube{{-2.0, 0.0}, 0.5, 1, std::nullopt};
    auto r = validate_atom(a, w);
    CHECK_FALSE(r.support_ok);
    CHECK(r.cells_outside > 0);
  }
  SUBCASE("constructed test atoms pass") {
    for (auto& a : test_atom_family(g, w, 20, 1.0, kInf, 0)) {
      CHECK(validate_atom(a, w).pass());
      REQUIRE(a.cube);
      CHECK(a.cube->side <= 2.0);
    }
    for (auto& a : test_atom_family(g, w, 8, 2.0 / 3.0, 2.0, 1)) CHECK(validate_atom(a, w).pass());
  }
}

TEST_CASE("trivial decompositions and norms") {
  Grid g = make_grid(1, 8.0, 512);
  Weight w = parse_weight("const:1", g);
  auto hp = params(1.0, 0);
  auto d = make_dictionary(hp.N, 1, DictionarySpec{});
  auto dec = atomic_decompose(SampledFunction(g), w, hp, d);
  CHECK(dec.atoms.empty());
  CHECK_FALSE(dec.single);
  CHECK(atomic_norm_upper(dec, 1.0) == 0.0);

  AtomicDecomposition one;
  one.grid = g;
  AtomEntry e;
  e.lambda = 3.0;
  one.atoms.push_back(e);
  CHECK(atomic_norm_upper(one, 1.0) == 3.0);

  AtomicOptions opt;
  opt.k_max = -40;
  CHECK_THROWS_WITH_AS(atomic_decompose(corpus_function(g, "tent"), w, hp, d, opt),
                       doctest::Contains("k_range too small"), Error);
}

TEST_CASE("a single atom decomposes and reconstructs (frozen norm)") {
  Grid g = make_grid(1, 8.0, 2048);
  Weight w = parse_weight("exp:1", g);
  auto hp = params(1.0, 0);
  auto d = make_dictionary(hp.N, 1, DictionarySpec{});
  Atom a = make_test_atom(g, w, Cube{{0.3, 0.0}, 0.5, 1, std::nullopt}, 1.0, kInf, 0);
  auto f = a.dense();
  auto dec = atomic_decompose(f, w, hp, d);
  CHECK(err_inf(reconstruct(dec), f) <= 1e-8 * f.max_abs());
  CHECK(atomic_norm_upper(dec, 1.0) == doctest::Approx(18.0931642171).epsilon(1e-9));
}

TEST_CASE("emitted atoms validate, stay small and telescope") {
  Grid g = make_grid(1, 8.0, 1024);
  for (auto [p, s, wd] : {std::tuple{1.0, 0, "exp:1"}, std::tuple{2.0 / 3.0, 1, "const:1"}}) {
    auto hp = params(p, s);
    Weight w = parse_weight(wd, g);
    auto d = make_dictionary(hp.N, 1, DictionarySpec{});
    for (auto& f : corpus_generate(g, CorpusSpec{})) {
      auto dec = atomic_decompose(f, w, hp, d);
      CHECK(dec.telescoping_error <= 1e-9);
      for (auto& h : dec.heights) CHECK(h.telescoping_error <= 1e-9);
      for (auto& e : dec.atoms) {
        CHECK(validate_atom(e.atom, w).pass());
        REQUIRE(e.atom.cube);
        CHECK(e.atom.cube->side <= 2.0 + 1e-12);
        CHECK(e.lambda > 0.0);
      }
      CHECK(err_inf(reconstruct(dec), f) <= 1e-8 * f.max_abs());
    }
  }
}

TEST_CASE("decomposition is degree-one homogeneous") {
  Grid g = make_grid(1, 8.0, 1024);
  Weight w = parse_weight("exp:1", g);
  auto hp = params(1.0, 0);
  auto d = make_dictionary(hp.N, 1, DictionarySpec{});
  for (const char* nm : {"tent", "multi-bump", "random:2"}) {
    auto f = corpus_function(g, nm);
    auto a = atomic_decompose(f, w, hp, d);
    auto b = atomic_decompose(2.0 * f, w, hp, d);
    REQUIRE(a.atoms.size() == b.atoms.size());
    for (std::size_t k = 0; k < a.atoms.size(); ++k) {
      CHECK(b.atoms[k].lambda == 2.0 * a.atoms[k].lambda);
      CHECK(b.atoms[k].k == a.atoms[k].k + 1);
      CHECK(b.atoms[k].atom.vals == a.atoms[k].atom.vals);
    }
  }
}

TEST_CASE("single-atom gate") {
  Grid g = make_grid(1, 8.0, 2048);
  Weight w = parse_weight("exp:1", g);
  auto hp = params(1.0, 0);
  auto d = make_dictionary(hp.N, 1, DictionarySpec{});
  AtomicOptions opt;
  opt.cz.margin_cells = 0;  // the level sets of a function with inf M f > 0 may reach the edge

  auto tent = corpus_function(g, "tent");
  auto no = atomic_decompose(tent, w, hp, d, opt);
  CHECK_FALSE(no.k0_finite);
  CHECK_FALSE(no.single);

  auto lifted = tent;
  for (auto& v : lifted.values) v += 0.2;
  auto Mf = grand_maximal(lifted, d, MaximalMode::nontangential);
  double inf = kInf;
  for (std::size_t i = 0; i < g.size(); ++i) inf = std::min(inf, Mf.re(i));
  REQUIRE(inf > 0.0);
  auto yes = atomic_decompose(lifted, w, hp, d, opt);
  CHECK(yes.k0_finite);
  REQUIRE(yes.single);
  CHECK(yes.lambda0 > 0.0);
  CHECK(validate_atom(*yes.single, w).pass());
  CHECK(err_inf(reconstruct(yes), lifted) <= 1e-8 * lifted.max_abs());
}

TEST_CASE("finite decompositions") {
  Grid g = make_grid(1, 8.0, 2048);
  Weight w = parse_weight("exp:1", g);
  auto hp = HardyParams::make(1.0, 2.0, 1.0, 1);
  auto d = make_dictionary(hp.N, 1, DictionarySpec{});

  FiniteInput one;
  one.atoms.push_back(make_test_atom(g, w, Cube{{0.3, 0.0}, 0.5, 1, std::nullopt}, 1.0, 2.0, 0));
  one.coeffs.push_back(1.0);
  auto fd = finite_decompose(one, w, hp, d, 64);
  CHECK(fd.finite_norm <= 1.0 + fd.eps);
  CHECK(fd.reconstruction_error <= 1e-8);
  CHECK_THROWS_WITH_AS(finite_decompose(one, w, hp, d, 2), doctest::Contains("increase K"), Error);

  FiniteInput three;
  auto fam = test_atom_family(g, w, 3, 1.0, 2.0, 0);
  for (int k = 0; k < 3; ++k) {
    three.atoms.push_back(fam[k]);
    three.coeffs.push_back(1.0 - 0.3 * k);
  }
  auto rows = finite_sweep(three, w, hp, d, {4, 8, 16, 32, 64, 96});
  std::vector<double> ok;
  for (auto& r : rows)
    if (r.ok) ok.push_back(r.ratio);
  REQUIRE(ok.size() >= 2);
  auto [lo, hi] = std::minmax_element(ok.begin(), ok.end());
  CHECK(*hi <= 1.3 * *lo);

  auto f3 = finite_decompose(three, w, hp, d, 64);
  // support box of side S in [8, 10] splits into ceil(S/2) unit-scale pieces
  CHECK(f3.support_box.side >= 8.0);
  CHECK((f3.N0 >= 4 && f3.N0 <= 8));
  CHECK(f3.N0 == int(std::ceil(f3.support_box.side / 2.0)));
  auto kinf = HardyParams::make(1.0, kInf, 1.0, 1);
  CHECK_THROWS(finite_decompose(three, w, kinf, d, 64));
}
