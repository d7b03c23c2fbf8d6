#pragma once

#include <deque>
#include <vector>

#include "hardyloc/grid.hpp"

namespace hardyloc::detail {

// out[j] = best(v[j..j+w-1]) for j in [0, v.size()-w], Cmp(a,b) true when a beats b.
template <class Cmp>
std::vector<double> sliding(const std::vector<double>& v, int w, Cmp better) {
  std::vector<double> out;
  if (w <= 0 || int(v.size()) < w) return out;
  out.resize(v.size() - w + 1);
  std::deque<int> dq;
  for (int i = 0; i < int(v.size()); ++i) {
    while (!dq.empty() && !better(v[dq.back()], v[i])) dq.pop_back();
    dq.push_back(i);
    if (dq.front() <= i - w) dq.pop_front();
    if (i >= w - 1) out[i - w + 1] = v[dq.front()];
  }
  return out;
}

inline std::vector<double> sliding_min(const std::vector<double>& v, int w) {
  return sliding(v, w, [](double a, double b) { return a < b; });
}
inline std::vector<double> sliding_max(const std::vector<double>& v, int w) {
  return sliding(v, w, [](double a, double b) { return a > b; });
}

// Windowed extremum of an m^n field over s^n windows; result has (m-s+1)^n entries
// laid out like the grid with side m-s+1.
template <class F>
std::vector<double> window_extremum(const Grid& g, const std::vector<double>& v, int s, F&& op) {
  const int m = g.m;
  if (g.n == 1) return op(v, s);
  const int k = m - s + 1;
  std::vector<double> rows(std::size_t(m) * k);
  std::vector<double> line(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) line[j] = v[g.index(i, j)];
    auto r = op(line, s);
    for (int j = 0; j < k; ++j) rows[std::size_t(i) * k + j] = r[j];
  }
  std::vector<double> out(std::size_t(k) * k);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < m; ++i) line[i] = rows[std::size_t(i) * k + j];
    auto c = op(line, s);
    for (int i = 0; i < k; ++i) out[std::size_t(i) * k + j] = c[i];
  }
  return out;
}

}  // namespace hardyloc::detail
