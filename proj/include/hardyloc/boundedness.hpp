#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hardyloc/dictionary.hpp"
#include "hardyloc/operators.hpp"
#include "hardyloc/weight.hpp"

namespace hardyloc {

enum class BoundMode { strong, weak, hardy_to_l1, hardy_to_hardy, atom_l1 };

struct OperatorSpec {
  enum class Kind { identity, strongly_singular, commutator, psdo } kind = Kind::identity;
  StronglySingularKernel kernel;
  std::function<double(const Point&)> b;  // commutator symbol
  std::string b_name;
  Symbol symbol = symbol_identity();
  std::string name() const;
};

struct BoundProbe {
  int input = 0;
  double lambda = 0.0;  // weak mode only
  double value = 0.0;
};

struct BoundednessReport {
  std::string op;
  std::string weight;
  double p = 1.0;
  BoundMode mode = BoundMode::strong;
  int m = 0;
  std::vector<double> ratios;  // per input
  double sup_ratio = 0.0;
  double b_bmo = 0.0;          // commutator normalisation
  std::vector<BoundProbe> probes;
};

// Hardy modes need `dict`. Commutator ratios are divided by ||b||_BMO.
BoundednessReport boundedness_experiment(const OperatorSpec& op, const Weight& w, double p,
                                         const std::vector<SampledFunction>& corpus, BoundMode mode,
                                         const Dictionary* dict = nullptr);

struct RefinementReport {
  BoundednessReport coarse, fine;
  double drift = 0.0;  // |fine - coarse| / coarse on the sup ratio
  bool stable = false;
};

// Runs the experiment on make_grid(n, L, m1) and make_grid(n, L, m2).
RefinementReport boundedness_refinement(const OperatorSpec& op, const std::string& weight_desc, double p,
                                        const std::function<std::vector<SampledFunction>(const Grid&)>& corpus,
                                        BoundMode mode, int n, double L, int m1, int m2,
                                        const Dictionary* dict = nullptr, double tol = 0.25);

std::string to_string(BoundMode m);
BoundMode parse_bound_mode(const std::string& s);

}  // namespace hardyloc
