#include "hardyloc/corpus.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "hardyloc/compensated.hpp"
#include "hardyloc/dictionary.hpp"
#include "hardyloc/whitney.hpp"

namespace hardyloc {

namespace {

double radius(const Point& x, int n) { return n == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]); }

double closed_bump(double r, double R) {
  const double z = r / R;
  return z < 1.0 ? std::exp(-1.0 / (1.0 - z * z)) : 0.0;
}

// 53-bit uniform in [-1, 1); avoids distribution objects whose output is library-defined.
double uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-52 - 1.0; }

SampledFunction random_member(const Grid& g, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + std::uint64_t(k));
  const int J = 5;
  const double a0 = 0.5 + 0.25 * (uniform(rng) + 1.0);
  std::vector<double> a(J + 1), b(J + 1), c(J + 1), d(J + 1);
  for (int j = 1; j <= J; ++j) {
    a[j] = uniform(rng) / j;
    b[j] = uniform(rng) / j;
    c[j] = uniform(rng) / j;
    d[j] = uniform(rng) / j;
  }
  const int n = g.n;
  auto f = SampledFunction::from(g, [&](const Point& x) {
    const double r = radius(x, n);
    const double cut = 1.0 - smoothstep((r - 1.0) / 0.5, 3);
    if (cut == 0.0) return 0.0;
    double v = a0;
    for (int j = 1; j <= J; ++j) {
      v += a[j] * std::cos(j * x[0]) + b[j] * std::sin(j * x[0]);
      if (n == 2) v += c[j] * std::cos(j * x[1]) + d[j] * std::sin(j * x[1]);
    }
    return v * cut;
  });
  // Nonzero pairing with the centred base bump at the coarsest scale.
  DD acc;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f.re(i) * bump(g.point(i), n);
  if (std::abs(acc.value()) * g.cell_volume() < 1e-8)
    throw Error("random corpus member " + std::to_string(k) + " pairs to zero with the base bump");
  return f;
}

}  // namespace

CorpusSpec parse_corpus(const std::string& csv, std::uint64_t seed) {
  CorpusSpec s;
  s.names.clear();
  s.seed = seed;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) s.names.push_back(item);
  if (s.names.empty()) throw UsageError("empty corpus list");
  return s;
}

std::vector<std::string> expand_names(const CorpusSpec& spec) {
  std::vector<std::string> out;
  for (auto& nm : spec.names) {
    if (nm == "standard") {
      for (const char* b : {"tent", "bump", "haar-osc", "multi-bump"}) out.push_back(b);
      for (int k = 1; k <= 6; ++k) out.push_back("random:" + std::to_string(k));
    } else {
      out.push_back(nm);
    }
  }
  return out;
}

SampledFunction corpus_function(const Grid& g, const std::string& name, std::uint64_t seed) {
  const int n = g.n;
  if (name == "tent")
    return SampledFunction::from(g, [n](const Point& x) { return std::max(0.0, 1.0 - radius(x, n)); });
  if (name == "bump")
    return SampledFunction::from(g, [n](const Point& x) { return closed_bump(radius(x, n), 1.2); });
  if (name == "haar-osc")
    return SampledFunction::from(g, [n](const Point& x) {
      if (std::abs(x[0]) > 1.0 || (n == 2 && std::abs(x[1]) > 1.0)) return 0.0;
      return x[0] < 0.0 ? -1.0 : 1.0;
    });
  if (name == "multi-bump")
    return SampledFunction::from(g, [n](const Point& x) {
      auto at = [&](double c, double R) { return closed_bump(radius(Point{x[0] - c, x[1]}, n), R); };
      return at(-2.0, 0.6) - 0.7 * at(0.5, 0.4) + 0.5 * at(2.5, 0.8);
    });
  const std::string pre = "random:";
  if (name.rfind(pre, 0) == 0) {
    int k = 0;
    try {
      std::size_t pos = 0;
      k = std::stoi(name.substr(pre.size()), &pos);
      if (pos != name.size() - pre.size()) k = 0;
    } catch (const std::logic_error&) {
      k = 0;
    }
    if (k < 1) throw UsageError("bad random corpus index in '" + name + "'");
    return random_member(g, k, seed);
  }
  throw UsageError("unknown corpus function '" + name + "'");
}

std::vector<SampledFunction> corpus_generate(const Grid& g, const CorpusSpec& spec) {
  std::vector<SampledFunction> out;
  for (auto& nm : expand_names(spec)) out.push_back(corpus_function(g, nm, spec.seed));
  return out;
}

}  // namespace hardyloc
