#pragma once

#include <optional>
#include <vector>

#include "hardyloc/dictionary.hpp"
#include "hardyloc/hardy_params.hpp"
#include "hardyloc/maximal.hpp"
#include "hardyloc/projection.hpp"
#include "hardyloc/weight.hpp"
#include "hardyloc/whitney.hpp"

namespace hardyloc {

struct CZOptions {
  WhitneyWindow window = WhitneyWindow::desk();
  double cond_threshold = 1e12;
  int margin_cells = 1;
};

struct BadPart {
  bool projected = false;  // l_i < 1
  std::vector<std::size_t> cells;
  std::vector<double> vals;
};

struct CZDecomposition {
  double lambda = 0.0;
  HardyParams params;
  OpenSet omega;
  WhitneyCover cover;
  PartitionOfUnity pu;
  std::vector<std::optional<MomentProjector>> projectors;  // per cube, projected branch only
  std::vector<std::vector<double>> coeffs;                  // P_i coefficients, empty on the plain branch
  std::vector<BadPart> bad;
  SampledFunction g;
  SampledFunction Mf;  // the maximal function the set was cut from

  // diagnostics filled at construction
  double max_cond = 1.0;
  int rank_deficient = 0;
  double orthogonality_residual = 0.0;
  double reconstruction_error = 0.0;  // max |f - g - sum b_i| / ||f||_inf

  std::size_t size() const { return cover.cubes.size(); }
  double side(std::size_t i) const { return cover.cubes[i].cube.side; }
  // P_i(x) eta_i(x) on the eta cells of cube i (zeros on the plain branch).
  std::vector<double> p_eta(std::size_t i) const;
};

// Full pipeline: M_N f (non-tangential, given dictionary), superlevel set, Whitney
// cover, partition of unity, projections and bad parts.
CZDecomposition cz_decompose(const SampledFunction& f, double lambda, const HardyParams& hp,
                             const Dictionary& dict, const CZOptions& opt = {});
// Same, reusing an already computed M_N f.
CZDecomposition cz_decompose(const SampledFunction& f, const SampledFunction& Mf, double lambda,
                             const HardyParams& hp, const CZOptions& opt = {});

struct CZDiagnostics {
  double C2 = 0.0;  // max_i sup |P_i eta_i| / lambda
  double C3 = 0.0;  // max_i max_{Q_i^*} M^0 b_i / M f
  double C9 = 0.0;  // ||g||_inf / lambda
  double decay_exponent = 0.0;  // fixed-effects log-log slope of M^0 b_i outside Q_i^*
  int decay_points = 0;
  int decay_cubes = 0;
  double sum_b_ratio = 0.0;     // ||sum |b_i| ||_{L^q_w} / ||f||_{L^q_w}
  double good_part_ratio = 0.0; // int M^0 g w / (lambda^{1-p} int (M f)^p w)
  double max_projected_side = 0.0;
  int projected = 0;
  int plain = 0;
};

// M0 is the centred operator used for M^0; the decomposition supplies M f.
CZDiagnostics verify_czd(const CZDecomposition& dec, const SampledFunction& f, const Weight& w,
                         const MaximalOperator& M0);

}  // namespace hardyloc
