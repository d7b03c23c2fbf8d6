#include "hardyloc/weight.hpp"

#include <cmath>
#include <sstream>

#include "hardyloc/serialize.hpp"

namespace hardyloc {

PrefixTable::PrefixTable(const Grid& g, const std::vector<double>& v) : n_(g.n), m_(g.m) {
  if (v.size() != g.size()) throw Error("prefix table size mismatch");
  if (n_ == 1) {
    s_.assign(std::size_t(m_ + 1), DD{});
    for (int i = 0; i < m_; ++i) s_[i + 1] = s_[i] + DD{v[i], 0.0};
    return;
  }
  s_.assign(std::size_t(m_ + 1) * (m_ + 1), DD{});
  auto idx = [&](int i, int j) { return std::size_t(i) * (m_ + 1) + j; };
  for (int i = 0; i < m_; ++i) {
    DD row;
    for (int j = 0; j < m_; ++j) {
      row += v[g.index(i, j)];
      s_[idx(i + 1, j + 1)] = s_[idx(i, j + 1)] + row;
    }
  }
}

double PrefixTable::box_sum(const std::array<int, 2>& lo, const std::array<int, 2>& hi) const {
  if (n_ == 1) return (s_[hi[0]] - s_[lo[0]]).value();
  DD t = at(hi[0], hi[1]);
  t += -at(lo[0], hi[1]);
  t += -at(hi[0], lo[1]);
  t += at(lo[0], lo[1]);
  return t.value();
}

double PrefixTable::range_sum(const IndexRange& r) const {
  if (r.empty(n_)) return 0.0;
  return box_sum(r.lo, r.hi);
}

Weight::Weight(const SampledFunction& base, std::string name, std::string descriptor)
    : grid_(base.grid), v_(base.real_part()), name_(std::move(name)),
      descriptor_(std::move(descriptor)) {
  for (std::size_t i = 0; i < base.size(); ++i) {
    double x = v_[i];
    if (!(x > 0.0) || !std::isfinite(x) || base.values[i].imag() != 0.0)
      throw Error("weight must be strictly positive and finite");
  }
}

const PrefixTable& Weight::power_table(double e) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->tables.find(e);
  if (it != cache_->tables.end()) return *it->second;
  std::vector<double> w(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) w[i] = e == 1.0 ? v_[i] : std::pow(v_[i], e);
  auto t = std::make_shared<const PrefixTable>(grid_, w);
  cache_->tables.emplace(e, t);
  return *t;
}

double Weight::measure(const IndexRange& r) const {
  return power_table(1.0).range_sum(r) * grid_.cell_volume();
}

double Weight::measure(const Cube& q) const { return measure(cells_in(grid_, q)); }

double Weight::total() const {
  IndexRange r;
  r.hi = {grid_.m, grid_.m};
  return measure(r);
}

double Weight::min() const {
  double m = kInf;
  for (double x : v_) m = std::min(m, x);
  return m;
}

namespace {

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw Error("bad number");
    } catch (const std::exception&) {
      throw Error("bad weight parameter: '" + tok + "'");
    }
  }
  return out;
}

double norm(const Point& x, int n) { return n == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]); }

}  // namespace

Weight parse_weight(const std::string& desc, const Grid& g) {
  auto colon = desc.find(':');
  if (colon == std::string::npos) throw Error("weight descriptor needs kind:params, got '" + desc + "'");
  std::string kind = desc.substr(0, colon), rest = desc.substr(colon + 1);
  const int n = g.n;
  if (kind == "file") {
    SampledFunction f = read_function_csv(rest, g);
    return Weight(f, "file", desc);
  }
  auto a = parse_numbers(rest);
  auto need = [&](std::size_t k) {
    if (a.size() != k) throw Error("weight '" + kind + "' expects " + std::to_string(k) + " parameter(s)");
  };
  SampledFunction f;
  if (kind == "const") {
    need(1);
    f = SampledFunction::from(g, [&](const Point&) { return a[0]; });
  } else if (kind == "exp") {
    need(1);
    f = SampledFunction::from(g, [&](const Point& x) { return std::exp(a[0] * norm(x, n)); });
  } else if (kind == "powlog") {
    need(2);
    f = SampledFunction::from(g, [&](const Point& x) {
      double r = norm(x, n);
      return std::pow(1.0 + r * std::pow(std::log(2.0 + r), a[0]), a[1]);
    });
  } else if (kind == "abspow") {
    need(1);
    f = SampledFunction::from(g, [&](const Point& x) { return std::pow(norm(x, n), a[0]); });
  } else if (kind == "invloglin") {
    need(1);
    f = SampledFunction::from(g, [&](const Point& x) {
      double r = norm(x, n);
      return std::pow(1.0 + r * std::log1p(r), -(n + a[0]));
    });
  } else {
    throw Error("unknown weight kind '" + kind + "'");
  }
  return Weight(f, kind, desc);
}

double weighted_lp_norm(const SampledFunction& f, const Weight& w, double p) {
  if (!(p > 0.0)) throw Error("L^p exponent must be positive");
  if (f.grid != w.grid()) throw Error("grid mismatch");
  if (std::isinf(p)) return f.max_abs();
  DD s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double a = std::abs(f.values[i]);
    if (a != 0.0) s += (p == 1.0 ? a : std::pow(a, p)) * w[i];
  }
  double v = s.value() * f.grid.cell_volume();
  return p == 1.0 ? v : std::pow(v, 1.0 / p);
}

double weighted_lp_norm(const SampledFunction& f, const Weight& w, double p,
                        const std::vector<std::size_t>& cells) {
  if (!(p > 0.0)) throw Error("L^p exponent must be positive");
  if (std::isinf(p)) {
    double m = 0.0;
    for (auto i : cells) m = std::max(m, std::abs(f.values[i]));
    return m;
  }
  DD s;
  for (auto i : cells) {
    double a = std::abs(f.values[i]);
    if (a != 0.0) s += (p == 1.0 ? a : std::pow(a, p)) * w[i];
  }
  double v = s.value() * f.grid.cell_volume();
  return p == 1.0 ? v : std::pow(v, 1.0 / p);
}

}  // namespace hardyloc
