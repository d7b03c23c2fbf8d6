#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hardyloc/czd.hpp"
#include "hardyloc/dictionary.hpp"
#include "hardyloc/grid.hpp"
#include "hardyloc/hardy_params.hpp"
#include "hardyloc/maximal.hpp"
#include "hardyloc/weight.hpp"

namespace hardyloc {

enum class AtomKind { standard, single };

struct Atom {
  Grid grid;
  std::vector<std::size_t> cells;  // support, sorted
  std::vector<double> vals;
  std::optional<Cube> cube;  // absent for a single atom
  AtomKind kind = AtomKind::standard;
  double p = 1.0;
  double q = kInf;
  int s = 0;

  SampledFunction dense() const;
  double max_abs() const;
};

struct AtomReport {
  bool support_ok = true;
  bool norm_ok = true;
  bool moments_required = false;
  bool moments_ok = true;
  double norm = 0.0;   // ||a||_{L^q_w}
  double bound = 0.0;  // w(Q)^{1/q - 1/p}
  double norm_slack = 0.0;       // norm / bound
  double moment_residual = 0.0;  // worst |sum a (x - x_Q)^alpha h^n| / (||a||_inf |Q|^{1+|alpha|/n})
  std::size_t cells_outside = 0;
  bool pass() const { return support_ok && norm_ok && moments_ok; }
};

// tau: norm slack; moment_tol: bound on the scaled moment residual.
AtomReport validate_atom(const Atom& a, const Weight& w, double tau = 1e-8, double moment_tol = 1e-6);

struct AtomEntry {
  Atom atom;
  double lambda = 0.0;
  int k = 0;            // height exponent
  int i = 0;            // 1-based ordinal within the height, ordered by (cube, piece)
  int cube = -1;        // Whitney cube index at height k
  int piece = 0;
  Cube base;            // enlarged cube before splitting
  int case_id = 0;      // 1: l >= 1, 2: 1/(16n) <= |Q| < 1, 3: smaller
  bool enlarged = false;
};

struct HeightInfo {
  int k = 0;
  std::size_t omega_cells = 0;
  std::size_t cubes = 0;
  std::size_t atoms = 0;
  double telescoping_error = 0.0;  // max |sum_i h_i - (g^{k'} - g^k)| / ||f||_inf
  int overlap_L = 0;               // max #{i : Q_i^k* meets Q_j^k'*}
};

struct AtomicDecomposition {
  Grid grid;
  HardyParams params;
  std::vector<AtomEntry> atoms;
  std::optional<Atom> single;
  double lambda0 = 0.0;
  bool k0_finite = false;
  int k0 = 0;      // meaningful when k0_finite
  int k_low = 0;   // lowest height used
  int k_top = 0;   // 2^{k_top} > max M f
  std::vector<HeightInfo> heights;
  double telescoping_error = 0.0;
  double g_low_norm = 0.0;  // ||g^{k_low}||_inf / ||f||_inf when no single atom is emitted
  double max_cross_projection = 0.0;  // max |P_ij eta_j| / 2^{k'}
  int enlarged = 0;
  int split = 0;
  int forced_unit = 0;
  int dropped_noise = 0;     // pieces with max |h| <= 1e-12 ||f||_inf, left out
  double dropped_max = 0.0;  // largest such max |h| / ||f||_inf
};

struct AtomicOptions {
  CZOptions cz;
  std::optional<int> k_max;  // must satisfy k_max + 1 >= k_top
};

AtomicDecomposition atomic_decompose(const SampledFunction& f, const Weight& w, const HardyParams& hp,
                                     const Dictionary& dict, const AtomicOptions& opt = {});
AtomicDecomposition atomic_decompose(const SampledFunction& f, const SampledFunction& Mf,
                                     const Weight& w, const HardyParams& hp,
                                     const AtomicOptions& opt = {});

// (sum |lambda|^p + |lambda_0|^p)^{1/p}
double atomic_norm_upper(const AtomicDecomposition& dec, double p);
SampledFunction reconstruct(const AtomicDecomposition& dec);

// Smooth oscillating atom on `cube` with moments through degree s removed and exact
// normalisation ||a||_{L^q_w} = w(Q)^{1/q - 1/p}.
Atom make_test_atom(const Grid& g, const Weight& w, const Cube& cube, double p, double q, int s,
                    double freq = 3.0, double phase = 0.0);

// `count` test atoms with centres spread over |x_1| <= min(4, L - 4), sides 2, 1, 1/2, 1/4
// cycling, varied frequency and phase.
std::vector<Atom> test_atom_family(const Grid& g, const Weight& w, int count, double p, double q, int s);

struct FiniteInput {
  std::vector<Atom> atoms;
  std::vector<double> coeffs;
  SampledFunction sum(const Grid& g) const;
};

struct FinitePiece {
  Cube cube;
  double mu = 0.0;
  double norm = 0.0;       // ||r chi_P||_{L^q_w}
  double threshold = 0.0;  // eps w(P)^{1/q - 1/p}
};

struct FiniteDecomposition {
  int K = 0;
  AtomicDecomposition full;
  std::vector<AtomEntry> kept;  // the F_K entries
  bool single_kept = false;
  std::vector<FinitePiece> pieces;
  Cube support_box;
  int N0 = 0;
  double eps = 0.0;
  double hardy_norm = 0.0;
  double constructed_norm = 0.0;
  double input_norm = kInf;  // from the given list, when every listed atom validates
  double finite_norm = 0.0;  // min of the two
  double ratio = 0.0;        // finite_norm / hardy_norm
  double reconstruction_error = 0.0;
};

FiniteDecomposition finite_decompose(const FiniteInput& in, const Weight& w, const HardyParams& hp,
                                     const Dictionary& dict, int K, const AtomicOptions& opt = {});

struct FiniteSweepRow {
  int K = 0;
  bool ok = false;
  double ratio = 0.0;
  std::size_t kept = 0;
  std::string error;
};
std::vector<FiniteSweepRow> finite_sweep(const FiniteInput& in, const Weight& w, const HardyParams& hp,
                                         const Dictionary& dict, const std::vector<int>& Ks,
                                         const AtomicOptions& opt = {});

std::string to_string(AtomKind k);

}  // namespace hardyloc
