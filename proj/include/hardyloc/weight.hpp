#pragma once

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "hardyloc/compensated.hpp"
#include "hardyloc/grid.hpp"

namespace hardyloc {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Summed-area table over grid cells. Box sums are half-open index boxes.
class PrefixTable {
 public:
  PrefixTable() = default;
  PrefixTable(const Grid& g, const std::vector<double>& v);
  double box_sum(const std::array<int, 2>& lo, const std::array<int, 2>& hi) const;
  double box_sum(const CellBox& b) const {
    return box_sum(b.lo, {b.lo[0] + b.side, b.lo[1] + b.side});
  }
  double range_sum(const IndexRange& r) const;

 private:
  int n_ = 1, m_ = 0;
  std::vector<DD> s_;
  const DD& at(int i, int j) const { return s_[std::size_t(i) * (m_ + 1) + j]; }
};

class Weight {
 public:
  Weight() = default;
  Weight(const SampledFunction& base, std::string name, std::string descriptor = "");

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }
  const std::string& name() const { return name_; }
  const std::string& descriptor() const { return descriptor_; }
  SampledFunction as_function() const { return SampledFunction::from_real(grid_, v_); }

  // Cached prefix table of w^e.
  const PrefixTable& power_table(double e) const;
  // w(Q) by midpoint quadrature over cells with centre in Q.
  double measure(const Cube& q) const;
  double measure(const IndexRange& r) const;
  double total() const;
  double min() const;

 private:
  Grid grid_;
  std::vector<double> v_;
  std::string name_, descriptor_;
  struct Cache {
    std::mutex mu;
    std::map<double, std::shared_ptr<const PrefixTable>> tables;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// Descriptors: const:c, exp:c, powlog:a,b, abspow:g, invloglin:g, file:<csv path>.
Weight parse_weight(const std::string& desc, const Grid& g);

// (sum |f|^p w h^n)^{1/p}; p = inf gives max |f|.
double weighted_lp_norm(const SampledFunction& f, const Weight& w, double p);
// Same, restricted to the given cells.
double weighted_lp_norm(const SampledFunction& f, const Weight& w, double p,
                        const std::vector<std::size_t>& cells);

}  // namespace hardyloc
