#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hardyloc/corpus.hpp"
#include "hardyloc/dictionary.hpp"
#include "hardyloc/hardy_params.hpp"

namespace hardyloc::app {

struct ExperimentConfig {
  std::string experiment;  // weights, maximal, czd, atoms, norm-equiv, op-bound, finite

  int n = 1;
  double L = 8.0;
  int m = 1024;
  int m_fine = 0;  // refinement grid for norm-equiv / op-bound; 0 means 2 m

  std::string weight = "const:1";

  double p = 1.0;
  double q = std::numeric_limits<double>::infinity();
  double q_omega = 1.0;
  int s = -1;  // -1: minimal admissible
  int N = -1;  // -1: minimal admissible, raised to s + 1

  DictionarySpec dict;

  std::vector<std::string> corpus{"standard"};
  std::uint64_t seed = 0;

  // weights
  std::vector<double> p_sweep{1.5, 2.0, 4.0};
  double side_cap = 1.0;
  std::string family = "all";
  double alpha = 0.0;

  // czd: heights as fractions of max M f
  std::vector<double> heights{0.5, 0.125};

  // op-bound
  std::string op = "T";  // identity, T, commutator, psdo
  double theta = 1.0;
  int excluded_radius = -1;
  std::string kernel_rule = "cell";  // cell | point
  std::string symbol = "identity";
  std::string b = "sin";  // commutator symbol: sin, abs, log
  std::string mode = "strong";
  double op_p = 2.0;

  // finite
  std::vector<int> K{4, 8, 16, 32, 64};
  int finite_atoms = 3;

  std::string out_dir = "hardyloc-out";
  std::string baseline;
  bool update_baseline = false;
  double tolerance = 0.25;

  HardyParams params() const;
  void validate() const;
};

// INI file with sections [grid] [weight] [hardy] [dictionary] [corpus] [weights] [czd]
// [operator] [finite] [output]; see README for keys.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

// Every numerically relevant field, one key=value per line in a fixed order.
std::string canonical_config(const ExperimentConfig& c);

std::vector<double> parse_doubles(const std::string& csv);
std::vector<int> parse_ints(const std::string& csv);
std::vector<std::string> parse_strings(const std::string& csv);

}  // namespace hardyloc::app
