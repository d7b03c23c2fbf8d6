#include "hardyloc/projection.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace hardyloc {

std::vector<std::array<int, 2>> monomials(int n, int s) {
  std::vector<std::array<int, 2>> out;
  for (int deg = 0; deg <= s; ++deg) {
    if (n == 1) {
      out.push_back({deg, 0});
    } else {
      for (int b = 0; b <= deg; ++b) out.push_back({deg - b, b});
    }
  }
  return out;
}

double monomial(const std::array<int, 2>& alpha, const Point& u, int n) {
  double v = 1.0;
  for (int k = 0; k < alpha[0]; ++k) v *= u[0];
  if (n == 2)
    for (int k = 0; k < alpha[1]; ++k) v *= u[1];
  return v;
}

MomentProjector::MomentProjector(const Grid& g, const SparseField& eta, const Point& center,
                                 double scale, int s, double cond_threshold)
    : grid_(g), eta_(eta), center_(center), scale_(scale), s_(s), alphas_(monomials(g.n, s)) {
  if (s < 0) throw Error("polynomial degree must be nonnegative");
  const int dim = int(alphas_.size());
  const int nc = int(eta.size());
  basis_.resize(nc, dim);
  Eigen::VectorXd w(nc);
  for (int c = 0; c < nc; ++c) {
    Point x = g.point(eta[c].first);
    Point u{(x[0] - center[0]) / scale, g.n == 2 ? (x[1] - center[1]) / scale : 0.0};
    for (int a = 0; a < dim; ++a) basis_(c, a) = monomial(alphas_[a], u, g.n);
    w(c) = eta[c].second;
    eta_mass_ += eta[c].second;
  }
  if (!(eta_mass_ > 0.0)) throw Error("projection weight has zero mass");
  Eigen::MatrixXd G = basis_.transpose() * w.asDiagonal() * basis_ / eta_mass_;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  rank_ = int(svd.rank());
  cond_ = sv(dim - 1) > 0.0 ? sv(0) / sv(dim - 1) : std::numeric_limits<double>::infinity();
  // A tensor grid with s+1 distinct coordinates per axis is unisolvent for P_s, so a
  // large condition number there means the weight itself is degenerate.
  if (cond_ > cond_threshold) {
    bool enough = true;
    for (int d = 0; d < g.n; ++d) {
      std::set<int> distinct;
      for (auto& [i, v] : eta)
        if (v > 0.0) distinct.insert(g.unravel(i)[d]);
      if (int(distinct.size()) < s + 1) enough = false;
    }
    if (enough) throw Error("degenerate moment system (condition number " + std::to_string(cond_) + ")");
  }
  Eigen::VectorXd inv(dim);
  const double tol = svd.threshold() * sv(0);
  for (int k = 0; k < dim; ++k) inv(k) = sv(k) > tol ? 1.0 / sv(k) : 0.0;
  pinv_ = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

std::vector<double> MomentProjector::moments(const std::vector<double>& v) const {
  const int dim = int(alphas_.size());
  std::vector<double> out(dim, 0.0);
  const double hv = grid_.cell_volume();
  for (int a = 0; a < dim; ++a) {
    double acc = 0.0;
    for (std::size_t c = 0; c < v.size(); ++c) acc += v[c] * basis_(Eigen::Index(c), a) * eta_[c].second;
    out[a] = acc * hv;
  }
  return out;
}

std::vector<double> MomentProjector::project(const std::vector<double>& v) const {
  const int dim = int(alphas_.size());
  if (v.size() != eta_.size()) throw Error("projection input has wrong length");
  Eigen::VectorXd r(dim);
  auto mom = moments(v);
  const double hv = grid_.cell_volume();
  for (int a = 0; a < dim; ++a) r(a) = mom[a] / hv / eta_mass_;
  Eigen::VectorXd c = pinv_ * r;
  return std::vector<double>(c.data(), c.data() + dim);
}

double MomentProjector::eval(const std::vector<double>& coeffs, const Point& x) const {
  Point u{(x[0] - center_[0]) / scale_, grid_.n == 2 ? (x[1] - center_[1]) / scale_ : 0.0};
  double v = 0.0;
  for (std::size_t a = 0; a < alphas_.size(); ++a) v += coeffs[a] * monomial(alphas_[a], u, grid_.n);
  return v;
}

double PolyProjection::operator()(const Point& x) const {
  Point u{(x[0] - center[0]) / scale, n == 2 ? (x[1] - center[1]) / scale : 0.0};
  auto al = monomials(n, s);
  double v = 0.0;
  for (std::size_t a = 0; a < al.size(); ++a) v += coeffs[a] * monomial(al[a], u, n);
  return v;
}

PolyProjection poly_project(const SampledFunction& f, const SparseField& eta, const Point& center,
                            double scale, int s, double cond_threshold) {
  MomentProjector pr(f.grid, eta, center, scale, s, cond_threshold);
  std::vector<double> v(eta.size());
  for (std::size_t c = 0; c < eta.size(); ++c) v[c] = f.values[eta[c].first].real();
  PolyProjection out;
  out.coeffs = pr.project(v);
  out.center = center;
  out.scale = scale;
  out.s = s;
  out.n = f.grid.n;
  out.cond = pr.cond();
  out.rank = pr.rank();
  std::vector<double> diff(eta.size());
  for (std::size_t c = 0; c < eta.size(); ++c)
    diff[c] = v[c] - pr.eval(out.coeffs, f.grid.point(eta[c].first));
  const double fm = std::max(f.max_abs(), 1e-300);
  for (double m : pr.moments(diff)) out.orthogonality_residual = std::max(out.orthogonality_residual, std::abs(m) / fm);
  return out;
}

}  // namespace hardyloc
