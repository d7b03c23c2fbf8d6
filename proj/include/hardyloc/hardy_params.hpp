#pragma once

#include <limits>
#include <string>

namespace hardyloc {

// (p, q, s, N) with critical index q_omega in dimension n.
struct HardyParams {
  double p = 1.0;
  double q = std::numeric_limits<double>::infinity();
  int s = 0;
  int N = 2;
  double q_omega = 1.0;
  int n = 1;

  // floor(n (q_omega / p - 1))
  int min_s() const;
  // max{0, floor(n (q_omega / p - 1))} + 2
  int min_N() const;
  bool q_infinite() const;
  // Throws Error describing the first violated relation.
  void validate() const;
  std::string describe() const;

  // Minimal admissible s and N.
  static HardyParams make(double p, double q, double q_omega, int n);
};

}  // namespace hardyloc
