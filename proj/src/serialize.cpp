#include "hardyloc/serialize.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hardyloc {

json to_json(const Grid& g) { return {{"n", g.n}, {"L", g.L}, {"m", g.m}, {"h", g.h}}; }

Grid grid_from_json(const json& j) {
  return make_grid(j.at("n").get<int>(), j.at("L").get<double>(), j.at("m").get<int>());
}

json to_json(const Cube& q) {
  json c = json::array();
  for (int d = 0; d < q.n; ++d) c.push_back(q.center[d]);
  json j = {{"center", c}, {"side", q.side}};
  if (q.address) {
    json idx = json::array();
    for (int d = 0; d < q.n; ++d) idx.push_back(q.address->index[d]);
    j["level"] = q.address->level;
    j["index"] = idx;
  }
  return j;
}

Cube cube_from_json(const json& j) {
  Cube q;
  auto& c = j.at("center");
  q.n = int(c.size());
  for (int d = 0; d < q.n; ++d) q.center[d] = c[d].get<double>();
  q.side = j.at("side").get<double>();
  if (j.contains("level")) {
    DyadicAddress a;
    a.level = j["level"].get<int>();
    for (int d = 0; d < q.n; ++d) a.index[d] = j["index"][d].get<int>();
    q.address = a;
  }
  return q;
}

json to_json(const WhitneyCover& c) {
  json out = json::array();
  for (auto& wc : c.cubes) {
    json j = to_json(wc.cube);
    j["dist_to_complement"] = wc.dist;
    out.push_back(j);
  }
  return out;
}

json to_json(const SampledFunction& f) {
  json vals = json::array();
  for (auto& v : f.values) {
    if (f.real)
      vals.push_back(v.real());
    else
      vals.push_back({v.real(), v.imag()});
  }
  return {{"grid", to_json(f.grid)}, {"real", f.real}, {"values", vals}};
}

SampledFunction function_from_json(const json& j) {
  Grid g = grid_from_json(j.at("grid"));
  bool real = j.value("real", true);
  auto& vals = j.at("values");
  if (vals.size() != g.size()) throw Error("function JSON has wrong sample count");
  SampledFunction f(g, real);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i].is_array())
      f.values[i] = cplx(vals[i][0].get<double>(), vals[i][1].get<double>());
    else
      f.values[i] = vals[i].get<double>();
  }
  f.validate();
  return f;
}

void write_function_csv(std::ostream& os, const SampledFunction& f) {
  const Grid& g = f.grid;
  os << (g.n == 1 ? "x,re,im\n" : "x,y,re,im\n");
  os << std::setprecision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    Point x = g.point(i);
    os << x[0] << ',';
    if (g.n == 2) os << x[1] << ',';
    os << f.values[i].real() << ',' << f.values[i].imag() << '\n';
  }
}

void write_function_csv(const std::string& path, const SampledFunction& f) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  write_function_csv(os, f);
}

SampledFunction read_function_csv(std::istream& is, const Grid& g) {
  SampledFunction f(g, true);
  std::string line;
  std::size_t i = 0;
  const std::size_t ncols = std::size_t(g.n) + 2;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (!(std::isdigit((unsigned char)line[0]) || line[0] == '-' || line[0] == '+' || line[0] == '.'))
      continue;  // header
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) cols.push_back(std::stod(tok));
    if (cols.size() != ncols) throw Error("CSV row has wrong column count");
    if (i >= g.size()) throw Error("CSV has more rows than grid samples");
    Point x = g.point(i);
    for (int d = 0; d < g.n; ++d)
      if (std::abs(cols[d] - x[d]) > 1e-9 * g.h) throw Error("CSV coordinates do not match grid");
    f.values[i] = cplx(cols[g.n], cols[g.n + 1]);
    if (cols[g.n + 1] != 0.0) f.real = false;
    ++i;
  }
  if (i != g.size()) throw Error("CSV has fewer rows than grid samples");
  f.validate();
  return f;
}

SampledFunction read_function_csv(const std::string& path, const Grid& g) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read " + path);
  return read_function_csv(is, g);
}

}  // namespace hardyloc
