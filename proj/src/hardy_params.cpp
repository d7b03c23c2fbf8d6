#include "hardyloc/hardy_params.hpp"

#include <cmath>
#include <sstream>

#include "hardyloc/weight.hpp"

namespace hardyloc {

namespace {
int floor_index(double v) { return int(std::floor(v + 1e-12)); }
}  // namespace

int HardyParams::min_s() const { return floor_index(n * (q_omega / p - 1.0)); }

int HardyParams::min_N() const { return std::max(0, min_s()) + 2; }

bool HardyParams::q_infinite() const { return std::isinf(q); }

void HardyParams::validate() const {
  if (n != 1 && n != 2) throw Error("dimension must be 1 or 2");
  if (!(p > 0.0 && p <= 1.0)) throw Error("p must lie in (0, 1]");
  if (!(q_omega >= 1.0) || !std::isfinite(q_omega)) throw Error("q_omega must be >= 1");
  if (!(q > q_omega)) throw Error("q must exceed q_omega");
  if (s < 0) throw Error("s must be nonnegative");
  if (s < min_s())
    throw Error("s = " + std::to_string(s) + " below the admissible minimum " + std::to_string(min_s()));
  if (N < min_N())
    throw Error("N = " + std::to_string(N) + " below the minimum " + std::to_string(min_N()));
  if (N <= s) throw Error("N must exceed s");
}

std::string HardyParams::describe() const {
  std::ostringstream os;
  os << "p=" << p << " q=" << (q_infinite() ? std::string("inf") : std::to_string(q)) << " s=" << s
     << " N=" << N << " q_omega=" << q_omega << " n=" << n;
  return os.str();
}

HardyParams HardyParams::make(double p, double q, double q_omega, int n) {
  HardyParams hp;
  hp.p = p;
  hp.q = std::isinf(q) ? kInf : q;
  hp.q_omega = q_omega;
  hp.n = n;
  hp.s = std::max(0, hp.min_s());
  hp.N = hp.min_N();
  if (hp.N <= hp.s) hp.N = hp.s + 1;
  return hp;
}

}  // namespace hardyloc
