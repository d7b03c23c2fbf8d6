#pragma once

#include <vector>

#include "hardyloc/dictionary.hpp"
#include "hardyloc/grid.hpp"
#include "hardyloc/hardy_params.hpp"
#include "hardyloc/weight.hpp"

namespace hardyloc {

// sup over grid-aligned cubes Q containing x with |Q| < 1 of the average of |f|.
SampledFunction local_hl_maximal(const SampledFunction& f);

enum class MaximalMode { centered, nontangential };

// Precomputed lattice kernels phi_t(k h) t^{-n} h^n for every (member, scale).
class MaximalOperator {
 public:
  MaximalOperator(const Grid& g, const Dictionary& d);

  SampledFunction apply(const SampledFunction& f, MaximalMode mode) const;
  // f given by its nonzero cells; returns the full field.
  std::vector<double> apply_sparse(const std::vector<std::size_t>& cells,
                                   const std::vector<double>& vals, MaximalMode mode) const;
  // Convolution phi_t * f for one (member, scale) pair.
  std::vector<cplx> convolve(const SampledFunction& f, int member, int scale) const;

  const Grid& grid() const { return g_; }
  const Dictionary& dictionary() const { return d_; }
  int kernel_radius(int scale) const;  // max over members, in cells

 private:
  struct Kernel {
    int member, scale, radius;
    std::vector<double> w;  // dense (2R+1)^n, offset k -> w[k + R]
  };
  Grid g_;
  Dictionary d_;
  std::vector<Kernel> ks_;

  template <class T>
  void scatter(const Kernel& k, const std::vector<std::size_t>& cells, const std::vector<T>& vals,
               std::vector<T>& out) const;
  std::vector<double> finish(std::vector<std::vector<double>>& per_scale, MaximalMode mode) const;
};

SampledFunction grand_maximal(const SampledFunction& f, const Dictionary& d, MaximalMode mode);

// ||M^0_N f||_{L^p_w}, centered mode.
double hardy_quasi_norm(const SampledFunction& f, const Weight& w, const HardyParams& hp,
                        const Dictionary& d);
double hardy_quasi_norm(const SampledFunction& f, const Weight& w, double p,
                        const MaximalOperator& op);

// Both halves of |f| <= M^0 f <= C M^loc f, measured.
struct DominationReport {
  double upper_constant = 0.0;  // sup M^0 f / M^loc f where M^loc f > 0
  double lower_excess = 0.0;    // sup (I |f| - M^0 f), I = max member integral
  double modulus_term = 0.0;    // I * sup_{|x-y| <= t_min} |f(x) - f(y)|
};
DominationReport maximal_domination(const SampledFunction& f, const Dictionary& d);

// ||M^loc f||_{L^p_w} / ||f||_{L^p_w}
double local_maximal_ratio(const SampledFunction& f, const Weight& w, double p);

}  // namespace hardyloc
