#pragma once

#include <string>
#include <vector>

#include "hardyloc/grid.hpp"
#include "hardyloc/jet.hpp"

namespace hardyloc {

// psi(z) = exp(-1/(1-|z|^2)) on |z| < 1.
double bump(const Point& z, int n);
Jet bump(const std::vector<Jet>& z);

// phi(x) = scale * psi((x/dil - shift)/rho) * (1 + mod * (x/dil)_axis)
struct TestFunction {
  std::string name;
  int n = 1;
  Point shift{0.0, 0.0};
  double rho = 1.0;
  double dil = 1.0;
  int mod_axis = 0;
  double mod = 0.0;
  double scale = 1.0;
  double support_radius = 1.0;
  std::vector<double> deriv_norms;  // max over |alpha| = k of sup |D^alpha phi|, k = 0..N+1
  double integral = 0.0;

  double operator()(const Point& x) const;
  Jet jet(const Point& x, int D) const;
};

// sup over the support of |D^alpha g| for every |alpha| <= D, maximised per order k.
std::vector<double> derivative_sup_norms(const TestFunction& g, int D);

enum class DictVariant { centered0, wide };

struct DictionarySpec {
  int members = 4;
  int scales = 6;
  double t_max = 0.75;
  DictVariant variant = DictVariant::centered0;
};

struct Dictionary {
  int N = 2;
  int n = 1;
  DictVariant variant = DictVariant::centered0;
  std::vector<TestFunction> members;
  std::vector<double> scales;
  double wide_radius = 1.0;  // R of the wide dilate; 1 for the unit-support family
  bool wide_truncated = false;

  double reach() const;  // max support radius times max scale
};

std::string to_string(DictVariant v);
DictVariant dict_variant_from_string(const std::string& s);

// Normalised bump, modulated bumps psi (1 +- x_d/2), translates, in that order,
// truncated to spec.members. The wide variant appends psi_norm(x/R),
// R = min(2^{3(10+n)}, L/2).
Dictionary make_dictionary(int N, int n, const DictionarySpec& spec, double L = 0.0);

// Throws unless every scale lies in (0, 1).
void check_scales(const std::vector<double>& scales);

}  // namespace hardyloc
