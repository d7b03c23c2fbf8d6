#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "hardyloc/corpus.hpp"
#include "hardyloc/grid.hpp"
#include "hardyloc/serialize.hpp"
#include "hardyloc/weight.hpp"

using namespace hardyloc;

TEST_CASE("grid sample points are cell centres") {
  Grid g = make_grid(1, 8.0, 16);
  CHECK(g.h == 1.0);
  CHECK(g.size() == 16);
  for (int j = 0; j < 16; ++j) CHECK(g.coord(j) == doctest::Approx(-7.5 + j));

  Grid g2 = make_grid(2, 4.0, 64);
  CHECK(g2.h == 0.125);
  CHECK(g2.size() == 4096);
  auto p = g2.point(g2.index(3, 5));
  CHECK(p[0] == doctest::Approx(-4.0 + 3.5 * 0.125));
  CHECK(p[1] == doctest::Approx(-4.0 + 5.5 * 0.125));
  CHECK(g2.unravel(g2.index(7, 9)) == std::array<int, 2>{7, 9});

  CHECK_THROWS_AS(make_grid(3, 4.0, 64), Error);
  CHECK_THROWS_AS(make_grid(1, -1.0, 64), Error);
  CHECK_THROWS_AS(make_grid(1, 1.0, 4), Error);
}

TEST_CASE("cube dilates and volumes") {
  Cube q{{0.25, -1.0}, 0.5, 2, std::nullopt};
  CHECK(q.volume() == doctest::Approx(0.25));
  Cube d = q.dilate(3.0);
  CHECK(d.side == doctest::Approx(1.5));
  CHECK(d.center == q.center);
  CHECK(q.diam() == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(q.contains({0.4, -0.8}));
  CHECK_FALSE(q.contains({0.6, -0.8}));
}

TEST_CASE("cells_in selects centres inside the closed cube") {
  Grid g = make_grid(1, 8.0, 16);
  // [-1, 1] holds centres -0.5 and 0.5 only
  IndexRange r = cells_in(g, Cube{{0.0, 0.0}, 2.0, 1, std::nullopt});
  CHECK(r.lo[0] == 7);
  CHECK(r.hi[0] == 9);
  // a closed cube whose edge sits on a centre includes it
  r = cells_in(g, Cube{{0.0, 0.0}, 1.0, 1, std::nullopt});
  CHECK(r.count(1) == 2);
  r = cells_in(g, Cube{{20.0, 0.0}, 1.0, 1, std::nullopt});
  CHECK(r.empty(1));
}

TEST_CASE("integration by midpoint sums") {
  Grid g = make_grid(1, 3.0, 96);
  auto one = SampledFunction::from(g, [](const Point&) { return 1.0; });
  CHECK(integrate(one).real() == doctest::Approx(6.0).epsilon(1e-12));
  auto odd = SampledFunction::from(g, [](const Point& x) { return x[0]; });
  CHECK(std::abs(integrate(odd)) < 1e-12);

  Grid g1 = make_grid(1, 1.0, 1 << 12);
  auto sq = SampledFunction::from(g1, [](const Point& x) { return x[0] * x[0]; });
  CHECK(std::abs(integrate(sq).real() - 2.0 / 3.0) < 1e-5);

  bool empty = false;
  integrate(sq, Cube{{5.0, 0.0}, 0.5, 1, std::nullopt}, &empty);
  CHECK(empty);
}

TEST_CASE("sampled functions reject non-finite values and stray imaginary parts") {
  Grid g = make_grid(1, 1.0, 8);
  SampledFunction f(g);
  f.values[3] = cplx(NAN, 0.0);
  CHECK_THROWS_AS(f.validate(), Error);
  SampledFunction r(g);
  r.values[2] = cplx(0.0, 1.0);
  CHECK_THROWS_AS(r.validate(), Error);
  r.real = false;
  CHECK_NOTHROW(r.validate());
}

TEST_CASE("weighted Lebesgue norms") {
  Grid g = make_grid(1, 1.0, 256);
  Weight one = parse_weight("const:1", g);
  auto f = SampledFunction::from(g, [](const Point&) { return 1.0; });
  CHECK(weighted_lp_norm(f, one, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  Weight e = parse_weight("exp:1", g);
  CHECK(weighted_lp_norm(f, e, kInf) == 1.0);

  // analytic: int_0^1 e^x dx
  Grid g2 = make_grid(1, 2.0, 1 << 12);
  Weight e2 = parse_weight("exp:1", g2);
  auto ind = SampledFunction::from(g2, [](const Point& x) { return x[0] >= 0.0 && x[0] <= 1.0 ? 1.0 : 0.0; });
  CHECK(std::abs(weighted_lp_norm(ind, e2, 1.0) - (std::exp(1.0) - 1.0)) < 1e-3);
}

TEST_CASE("weight descriptors") {
  Grid g = make_grid(1, 2.0, 64);
  for (const char* d : {"const:2", "exp:0.5", "powlog:1,1", "abspow:-0.5", "invloglin:0.1"}) {
    Weight w = parse_weight(d, g);
    for (double v : w.values()) {
      CHECK(std::isfinite(v));
      CHECK(v > 0.0);
    }
  }
  CHECK_THROWS(parse_weight("const", g));
  CHECK_THROWS(parse_weight("nonsense:1", g));
  CHECK_THROWS(parse_weight("const:-1", g));
  Weight w = parse_weight("exp:1", g);
  Cube q{{0.5, 0.0}, 1.0, 1, std::nullopt};
  double direct = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (q.contains(g.point(i))) direct += w[i] * g.h;
  CHECK(w.measure(q) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("json and csv round trips") {
  Grid g = make_grid(2, 1.0, 8);
  auto f = SampledFunction::from_complex(g, [](const Point& x) { return cplx(x[0], x[1] * x[1]); });
  auto back = function_from_json(to_json(f));
  CHECK(back.grid == g);
  CHECK_FALSE(back.real);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back.values[i] == f.values[i]);

  std::stringstream ss;
  write_function_csv(ss, f);
  auto csv = read_function_csv(ss, g);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(csv.values[i] - f.values[i]) < 1e-15);

  Cube q{{0.5, -0.25}, 0.75, 2, DyadicAddress{2, {1, 3}}};
  Cube q2 = cube_from_json(to_json(q));
  CHECK(q2.side == q.side);
  CHECK(q2.center == q.center);
  REQUIRE(q2.address);
  CHECK(q2.address->index == std::array<int, 2>{1, 3});
}

TEST_CASE("corpus") {
  Grid g = make_grid(1, 8.0, 256);
  auto names = expand_names(CorpusSpec{});
  CHECK(names.size() == 10);
  auto a = corpus_generate(g, CorpusSpec{{"standard"}, 7});
  auto b = corpus_generate(g, CorpusSpec{{"standard"}, 7});
  REQUIRE(a.size() == 10);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].values == b[k].values);
  auto tent = corpus_function(g, "tent");
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(tent.re(i) == doctest::Approx(std::max(0.0, 1.0 - std::abs(g.coord(int(i))))));
  CHECK_THROWS_AS(corpus_function(g, "nope"), UsageError);
  CHECK_THROWS_AS(corpus_function(g, "random:0"), UsageError);
  CHECK_THROWS_AS(parse_corpus(","), UsageError);
  CHECK(parse_corpus("tent,,bump").names.size() == 2);
}
