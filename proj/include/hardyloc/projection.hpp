#pragma once

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hardyloc/grid.hpp"

namespace hardyloc {

using SparseField = std::vector<std::pair<std::size_t, double>>;

// Multi-indices of total degree <= s in n variables, ordered by degree.
std::vector<std::array<int, 2>> monomials(int n, int s);

double monomial(const std::array<int, 2>& alpha, const Point& u, int n);

// Orthogonal projection onto P_s in L^2(eta dx / int eta), monomials in the scaled
// variable u = (x - center) / scale. Min-norm pseudo-inverse of the Gram matrix, so
// rank-deficient systems (cubes with fewer cells than monomials) still satisfy the
// normal equations.
class MomentProjector {
 public:
  MomentProjector() = default;
  MomentProjector(const Grid& g, const SparseField& eta, const Point& center, double scale, int s,
                  double cond_threshold = 1e12);

  // Coefficients of the projection of v, given on the eta cells in eta order.
  std::vector<double> project(const std::vector<double>& v) const;
  double eval(const std::vector<double>& coeffs, const Point& x) const;
  // Weighted moments sum v u^alpha eta h^n for every alpha.
  std::vector<double> moments(const std::vector<double>& v) const;

  double cond() const { return cond_; }
  int rank() const { return rank_; }
  int dim() const { return int(alphas_.size()); }
  const Point& center() const { return center_; }
  double scale() const { return scale_; }
  int degree() const { return s_; }
  const SparseField& eta() const { return eta_; }

 private:
  Grid grid_;
  SparseField eta_;
  Point center_{0.0, 0.0};
  double scale_ = 1.0;
  int s_ = 0;
  std::vector<std::array<int, 2>> alphas_;
  Eigen::MatrixXd basis_;  // cells x dim, u^alpha at each eta cell
  Eigen::MatrixXd pinv_;   // pseudo-inverse of the normalised Gram matrix
  double eta_mass_ = 0.0;
  double cond_ = 1.0;
  int rank_ = 0;
};

struct PolyProjection {
  std::vector<double> coeffs;  // scaled-monomial basis
  Point center{0.0, 0.0};
  double scale = 1.0;
  int s = 0;
  int n = 1;
  double cond = 1.0;
  int rank = 0;
  double orthogonality_residual = 0.0;  // max_alpha |<f - P, u^alpha eta>| / ||f||_inf

  double operator()(const Point& x) const;
};

PolyProjection poly_project(const SampledFunction& f, const SparseField& eta, const Point& center,
                            double scale, int s, double cond_threshold = 1e12);

}  // namespace hardyloc
