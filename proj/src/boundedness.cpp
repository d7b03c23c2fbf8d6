#include "hardyloc/boundedness.hpp"

#include <cmath>
#include <optional>

#include "hardyloc/corpus.hpp"
#include "hardyloc/maximal.hpp"
#include "hardyloc/muckenhoupt.hpp"

namespace hardyloc {

std::string OperatorSpec::name() const {
  switch (kind) {
    case Kind::identity: return "identity";
    case Kind::strongly_singular: return "T:theta=" + std::to_string(kernel.theta);
    case Kind::commutator: return "commutator:" + b_name + ",theta=" + std::to_string(kernel.theta);
    case Kind::psdo: return "psdo:" + symbol.name;
  }
  return "?";
}

std::string to_string(BoundMode m) {
  switch (m) {
    case BoundMode::strong: return "strong";
    case BoundMode::weak: return "weak";
    case BoundMode::hardy_to_l1: return "hardy-to-L1";
    case BoundMode::hardy_to_hardy: return "hardy-to-hardy";
    case BoundMode::atom_l1: return "atom-L1";
  }
  return "?";
}

BoundMode parse_bound_mode(const std::string& s) {
  for (auto m : {BoundMode::strong, BoundMode::weak, BoundMode::hardy_to_l1, BoundMode::hardy_to_hardy,
                 BoundMode::atom_l1})
    if (s == to_string(m)) return m;
  throw UsageError("unknown boundedness mode '" + s + "'");
}

BoundednessReport boundedness_experiment(const OperatorSpec& op, const Weight& w, double p,
                                         const std::vector<SampledFunction>& corpus, BoundMode mode,
                                         const Dictionary* dict) {
  if (corpus.empty()) throw Error("boundedness experiment needs a nonempty corpus");
  const Grid& g = corpus.front().grid;
  BoundednessReport r;
  r.op = op.name();
  r.weight = w.descriptor();
  r.p = p;
  r.mode = mode;
  r.m = g.m;
  const bool hardy = mode == BoundMode::hardy_to_l1 || mode == BoundMode::hardy_to_hardy;
  if (hardy && !dict) throw Error("hardy modes need a dictionary");
  std::optional<MaximalOperator> M;
  if (hardy) M.emplace(g, *dict);

  SampledFunction b;
  if (op.kind == OperatorSpec::Kind::commutator) {
    if (!op.b) throw Error("commutator needs a symbol b");
    b = SampledFunction::from(g, op.b);
    r.b_bmo = bmo_loc_norm(b).value;
    if (!(r.b_bmo > 0.0)) throw Error("commutator symbol has zero BMO norm");
  }
  auto apply = [&](const SampledFunction& f) {
    switch (op.kind) {
      case OperatorSpec::Kind::identity: return f;
      case OperatorSpec::Kind::strongly_singular: return strongly_singular_apply(f, op.kernel);
      case OperatorSpec::Kind::commutator: {
        auto c = commutator_apply(b, f, op.kernel);
        c *= 1.0 / r.b_bmo;
        return c;
      }
      case OperatorSpec::Kind::psdo: return psdo_apply(f, op.symbol);
    }
    return f;
  };

  const double wtot = w.total();
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const SampledFunction& f = corpus[k];
    if (!(f.grid == g)) throw Error("corpus members live on different grids");
    SampledFunction tf = apply(f);
    double ratio = 0.0;
    switch (mode) {
      case BoundMode::strong: {
        const double d = weighted_lp_norm(f, w, p);
        ratio = d > 0.0 ? weighted_lp_norm(tf, w, p) / d : 0.0;
        break;
      }
      case BoundMode::weak: {
        const double d = weighted_lp_norm(f, w, p);
        const auto a = tf.abs();
        double top = 0.0;
        for (double v : a) top = std::max(top, v);
        for (int j = 0; j <= 60 && d > 0.0 && top > 0.0; ++j) {
          const double lam = top * std::pow(2.0, -0.5 * j);
          DD meas;
          for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] > lam) meas += w[i];
          const double wm = meas.value() * g.cell_volume();
          if (wm >= wtot * (1.0 - 1e-12)) break;  // level set fills the grid: unresolvable
          const double q = lam * std::pow(wm, 1.0 / p) / d;
          r.probes.push_back({int(k), lam, q});
          ratio = std::max(ratio, q);
        }
        break;
      }
      case BoundMode::hardy_to_l1: {
        const double d = hardy_quasi_norm(f, w, p, *M);
        ratio = d > 0.0 ? weighted_lp_norm(tf, w, p) / d : 0.0;
        break;
      }
      case BoundMode::hardy_to_hardy: {
        const double d = hardy_quasi_norm(f, w, p, *M);
        ratio = d > 0.0 ? hardy_quasi_norm(tf, w, p, *M) / d : 0.0;
        break;
      }
      case BoundMode::atom_l1: ratio = weighted_lp_norm(tf, w, 1.0); break;
    }
    if (mode != BoundMode::weak) r.probes.push_back({int(k), 0.0, ratio});
    r.ratios.push_back(ratio);
    r.sup_ratio = std::max(r.sup_ratio, ratio);
  }
  return r;
}

RefinementReport boundedness_refinement(const OperatorSpec& op, const std::string& weight_desc, double p,
                                        const std::function<std::vector<SampledFunction>(const Grid&)>& corpus,
                                        BoundMode mode, int n, double L, int m1, int m2,
                                        const Dictionary* dict, double tol) {
  RefinementReport out;
  Grid g1 = make_grid(n, L, m1), g2 = make_grid(n, L, m2);
  out.coarse = boundedness_experiment(op, parse_weight(weight_desc, g1), p, corpus(g1), mode, dict);
  out.fine = boundedness_experiment(op, parse_weight(weight_desc, g2), p, corpus(g2), mode, dict);
  const double c = out.coarse.sup_ratio;
  out.drift = c > 0.0 ? std::abs(out.fine.sup_ratio - c) / c : (out.fine.sup_ratio == 0.0 ? 0.0 : kInf);
  out.stable = out.drift <= tol && std::isfinite(out.fine.sup_ratio);
  return out;
}

}  // namespace hardyloc
