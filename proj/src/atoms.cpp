#include "hardyloc/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hardyloc/projection.hpp"

namespace hardyloc {

std::string to_string(AtomKind k) { return k == AtomKind::standard ? "standard" : "single"; }

SampledFunction Atom::dense() const {
  SampledFunction f(grid, true);
  for (std::size_t c = 0; c < cells.size(); ++c) f.values[cells[c]] = vals[c];
  return f;
}

double Atom::max_abs() const {
  double m = 0.0;
  for (double v : vals) m = std::max(m, std::abs(v));
  return m;
}

namespace {

double lq_norm_sparse(const Grid& g, const std::vector<std::size_t>& cells,
                      const std::vector<double>& vals, const Weight& w, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : vals) m = std::max(m, std::abs(v));
    return m;
  }
  DD acc;
  for (std::size_t c = 0; c < cells.size(); ++c) acc += std::pow(std::abs(vals[c]), q) * w[cells[c]];
  return std::pow(acc.value() * g.cell_volume(), 1.0 / q);
}

double rpow(double x, double e) { return e == 0.0 ? 1.0 : std::pow(x, e); }

constexpr double kNoiseFloor = 1e-12;

}  // namespace

AtomReport validate_atom(const Atom& a, const Weight& w, double tau, double moment_tol) {
  AtomReport r;
  const Grid& g = a.grid;
  const double inv_q = std::isinf(a.q) ? 0.0 : 1.0 / a.q;
  double wq = 0.0;
  if (a.kind == AtomKind::single || !a.cube) {
    wq = w.total();
  } else {
    const Cube& q = *a.cube;
    for (std::size_t c = 0; c < a.cells.size(); ++c)
      if (a.vals[c] != 0.0 && !q.contains(g.point(a.cells[c]), 1e-9 * g.h)) ++r.cells_outside;
    r.support_ok = r.cells_outside == 0;
    wq = w.measure(q);
  }
  r.norm = lq_norm_sparse(g, a.cells, a.vals, w, a.q);
  r.bound = wq > 0.0 ? rpow(wq, inv_q - 1.0 / a.p) : kInf;
  r.norm_slack = r.bound > 0.0 ? r.norm / r.bound : kInf;
  r.norm_ok = r.norm <= (1.0 + tau) * r.bound;

  if (a.kind == AtomKind::standard && a.cube && a.cube->volume() < 1.0) {
    r.moments_required = true;
    const Cube& q = *a.cube;
    const double amax = a.max_abs();
    if (amax > 0.0) {
      for (auto& al : monomials(g.n, a.s)) {
        DD acc;
        for (std::size_t c = 0; c < a.cells.size(); ++c) {
          Point x = g.point(a.cells[c]);
          Point u{x[0] - q.center[0], g.n == 2 ? x[1] - q.center[1] : 0.0};
          acc += a.vals[c] * monomial(al, u, g.n);
        }
        const int deg = al[0] + al[1];
        const double scale = amax * std::pow(q.volume(), 1.0 + double(deg) / g.n);
        r.moment_residual = std::max(r.moment_residual, std::abs(acc.value() * g.cell_volume()) / scale);
      }
    }
    r.moments_ok = r.moment_residual <= moment_tol;
  }
  return r;
}

AtomicDecomposition atomic_decompose(const SampledFunction& f, const Weight& w, const HardyParams& hp,
                                     const Dictionary& dict, const AtomicOptions& opt) {
  SampledFunction Mf = grand_maximal(f, dict, MaximalMode::nontangential);
  return atomic_decompose(f, Mf, w, hp, opt);
}

namespace {

struct Sparse {
  std::vector<double> dense;
  std::vector<std::size_t> touched;
  std::vector<std::uint8_t> mark;
  explicit Sparse(std::size_t n) : dense(n, 0.0), mark(n, 0) {}
  void add(std::size_t i, double v) {
    if (!mark[i]) {
      mark[i] = 1;
      touched.push_back(i);
    }
    dense[i] += v;
  }
  void clear() {
    for (auto i : touched) {
      dense[i] = 0.0;
      mark[i] = 0;
    }
    touched.clear();
  }
};

bool stars_meet(const Cube& a, const Cube& b, int n) {
  for (int d = 0; d < n; ++d)
    if (a.hi(d) < b.lo(d) || b.hi(d) < a.lo(d)) return false;
  return true;
}

}  // namespace

AtomicDecomposition atomic_decompose(const SampledFunction& f, const SampledFunction& Mf,
                                     const Weight& w, const HardyParams& hp,
                                     const AtomicOptions& opt) {
  hp.validate();
  if (!f.real) throw Error("atomic decomposition needs a real-valued function");
  const Grid& g = f.grid;
  const int n = g.n;
  AtomicDecomposition out;
  out.grid = g;
  out.params = hp;
  const double fmax = f.max_abs();
  if (fmax == 0.0) return out;

  double inf = kInf, sup = 0.0, minpos = kInf;
  for (std::size_t x = 0; x < g.size(); ++x) {
    const double v = Mf.re(x);
    inf = std::min(inf, v);
    sup = std::max(sup, v);
    if (v > 0.0) minpos = std::min(minpos, v);
  }
  if (!(sup > 0.0)) return out;
  int e;
  std::frexp(sup, &e);
  out.k_top = e;  // sup < 2^e
  if (inf > 0.0) {
    std::frexp(inf, &e);  // 2^{e-1} <= inf < 2^e
    out.k0_finite = true;
    out.k0 = e;
    out.k_low = e;
  } else {
    std::frexp(minpos, &e);
    out.k_low = e - 2;
  }
  if (opt.k_max && *opt.k_max + 1 < out.k_top)
    throw Error("k_range too small: need k_max >= " + std::to_string(out.k_top - 1));

  // Heights where the level set changes; the sets are nested so counts suffice.
  std::vector<int> ks;
  std::size_t prev = std::size_t(-1);
  for (int k = out.k_low; k <= out.k_top; ++k) {
    const double lam = std::ldexp(1.0, k);
    std::size_t cnt = 0;
    for (std::size_t x = 0; x < g.size(); ++x) cnt += Mf.re(x) > lam;
    if (cnt != prev || k == out.k_top) ks.push_back(k);
    prev = cnt;
  }
  // Drop k_top when its set equals the one below (it is empty anyway).
  std::vector<CZDecomposition> decs;
  decs.reserve(ks.size());
  for (int k : ks) decs.push_back(cz_decompose(f, Mf, std::ldexp(1.0, k), hp, opt.cz));
  while (decs.size() >= 2 && decs[decs.size() - 1].omega.count() == decs[decs.size() - 2].omega.count()) {
    decs.pop_back();
    ks.pop_back();
  }

  const double gamma = 1.0 + std::ldexp(1.0, -12 - n);
  const double star = 1.0 + std::ldexp(1.0, -(9 + n));
  const double inv_p = 1.0 / hp.p;
  Sparse h(g.size()), eta_i(g.size());
  std::vector<double> tele(g.size());

  for (std::size_t lvl = 0; lvl + 1 < decs.size(); ++lvl) {
    const CZDecomposition& A = decs[lvl];
    const CZDecomposition& B = decs[lvl + 1];
    HeightInfo info;
    info.k = ks[lvl];
    info.omega_cells = A.omega.count();
    info.cubes = A.size();

    // cell -> B cubes whose eta covers it
    std::vector<std::vector<int>> cover_b(g.size());
    for (std::size_t j = 0; j < B.size(); ++j)
      for (auto& [c, v] : B.pu.eta[j])
        if (v != 0.0) cover_b[c].push_back(int(j));
    // measured bound on how many level-k stars meet one level-k' star
    std::vector<int> meet(B.size(), 0);
    for (std::size_t i = 0; i < A.size(); ++i)
      for (std::size_t j = 0; j < B.size(); ++j)
        if (stars_meet(A.cover.cubes[i].cube.dilate(star), B.cover.cubes[j].cube.dilate(star), n)) ++meet[j];
    for (int c : meet) info.overlap_L = std::max(info.overlap_L, c);
    const double Lov = std::max(1, info.overlap_L);

    std::fill(tele.begin(), tele.end(), 0.0);
    const double lam_next = std::ldexp(1.0, ks[lvl + 1]);
    int ordinal = 0;
    for (std::size_t i = 0; i < A.size(); ++i) {
      const Cube& Qi = A.cover.cubes[i].cube;
      for (auto& [c, v] : A.pu.eta[i]) eta_i.add(c, v);
      for (std::size_t c = 0; c < A.bad[i].cells.size(); ++c) h.add(A.bad[i].cells[c], A.bad[i].vals[c]);

      std::vector<int> js;
      for (auto& [c, v] : A.pu.eta[i])
        if (v != 0.0)
          for (int j : cover_b[c]) js.push_back(j);
      std::sort(js.begin(), js.end());
      js.erase(std::unique(js.begin(), js.end()), js.end());

      bool plain_touch = false;
      for (int j : js) {
        const BadPart& bj = B.bad[j];
        for (std::size_t c = 0; c < bj.cells.size(); ++c) {
          const double ei = eta_i.mark[bj.cells[c]] ? eta_i.dense[bj.cells[c]] : 0.0;
          if (ei != 0.0) h.add(bj.cells[c], -ei * bj.vals[c]);
        }
        if (!bj.projected) {
          plain_touch = true;
          continue;
        }
        const MomentProjector& pj = *B.projectors[j];
        const auto& eta_j = B.pu.eta[j];
        std::vector<double> v(eta_j.size());
        bool any = false;
        for (std::size_t c = 0; c < eta_j.size(); ++c) {
          const std::size_t x = eta_j[c].first;
          const double ei = eta_i.mark[x] ? eta_i.dense[x] : 0.0;
          v[c] = ei == 0.0 ? 0.0 : (f.re(x) - pj.eval(B.coeffs[j], g.point(x))) * ei;
          any = any || v[c] != 0.0;
        }
        if (!any) continue;
        auto cij = pj.project(v);
        for (std::size_t c = 0; c < eta_j.size(); ++c) {
          const std::size_t x = eta_j[c].first;
          const double add = pj.eval(cij, g.point(x)) * eta_j[c].second;
          out.max_cross_projection = std::max(out.max_cross_projection, std::abs(add) / lam_next);
          h.add(x, add);
        }
      }

      // Enlarged cube.
      const double li = Qi.side;
      int case_id = li >= 1.0 ? 1 : (Qi.volume() >= 1.0 / (16.0 * n) ? 2 : 3);
      Cube qt;
      if (case_id != 3 && li >= Lov * n / (gamma - 1.0))
        qt = Qi.dilate(gamma);
      else
        qt = Qi.dilate(star * 64.0 * n);
      bool enlarged = false;
      std::vector<std::size_t> supp;
      for (auto x : h.touched)
        if (h.dense[x] != 0.0) supp.push_back(x);
      std::sort(supp.begin(), supp.end());
      double need = 0.0;
      for (auto x : supp) {
        Point p = g.point(x);
        for (int d = 0; d < n; ++d) need = std::max(need, 2.0 * std::abs(p[d] - qt.center[d]));
      }
      if (need > qt.side) {
        qt.side = need;
        enlarged = true;
        ++out.enlarged;
      }
      if ((case_id == 1 || plain_touch) && qt.side < 1.0) {
        qt.side = 1.0;
        ++out.forced_unit;
      }
      qt.address.reset();

      // Split into pieces of side in (1, 2] when needed.
      const int cnt = qt.side > 2.0 ? int(std::ceil(qt.side / 2.0)) : 1;
      if (cnt > 1) ++out.split;
      const double ps = qt.side / cnt;
      std::map<int, std::vector<std::size_t>> by_piece;
      for (auto x : supp) {
        Point p = g.point(x);
        int key = 0;
        for (int d = n - 1; d >= 0; --d) {
          int t = int(std::floor((p[d] - qt.lo(d)) / ps));
          t = std::clamp(t, 0, cnt - 1);
          key = key * cnt + t;
        }
        by_piece[key].push_back(x);
      }
      for (auto& [key, cells] : by_piece) {
        Cube pc;
        pc.n = n;
        pc.side = ps;
        int kk = key;
        for (int d = 0; d < n; ++d) {
          const int t = kk % cnt;
          kk /= cnt;
          pc.center[d] = qt.lo(d) + (t + 0.5) * ps;
        }
        if (cnt == 1) pc = qt;
        double mx = 0.0;
        for (auto x : cells) mx = std::max(mx, std::abs(h.dense[x]));
        if (mx == 0.0) continue;
        // Pieces at rounding level carry no signal; normalising them would amplify noise.
        if (mx <= kNoiseFloor * fmax) {
          ++out.dropped_noise;
          out.dropped_max = std::max(out.dropped_max, mx / fmax);
          continue;
        }
        const double lam = mx * std::pow(w.measure(pc), inv_p);
        AtomEntry e;
        e.atom.grid = g;
        e.atom.cells = cells;
        for (auto x : cells) e.atom.vals.push_back(h.dense[x] / lam);
        e.atom.cube = pc;
        e.atom.p = hp.p;
        e.atom.q = hp.q;
        e.atom.s = hp.s;
        e.lambda = lam;
        e.k = ks[lvl];
        e.i = ++ordinal;
        e.cube = int(i);
        e.piece = key;
        e.base = qt;
        e.case_id = case_id;
        e.enlarged = enlarged;
        out.atoms.push_back(std::move(e));
        ++info.atoms;
      }
      for (auto x : h.touched) tele[x] += h.dense[x];
      h.clear();
      eta_i.clear();
    }
    double te = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x)
      te = std::max(te, std::abs(tele[x] - (B.g.re(x) - A.g.re(x))));
    info.telescoping_error = te / fmax;
    out.telescoping_error = std::max(out.telescoping_error, info.telescoping_error);
    out.heights.push_back(info);
  }

  const SampledFunction& glow = decs.front().g;
  const double gn = glow.max_abs();
  if (out.k0_finite) {
    if (gn > 0.0) {
      out.lambda0 = gn * std::pow(w.total(), inv_p);
      Atom a;
      a.grid = g;
      a.kind = AtomKind::single;
      a.p = hp.p;
      a.q = hp.q;
      a.s = hp.s;
      for (std::size_t x = 0; x < g.size(); ++x)
        if (glow.re(x) != 0.0) {
          a.cells.push_back(x);
          a.vals.push_back(glow.re(x) / out.lambda0);
        }
      out.single = std::move(a);
    }
  } else {
    out.g_low_norm = gn / fmax;
  }
  return out;
}

double atomic_norm_upper(const AtomicDecomposition& dec, double p) {
  DD acc;
  for (auto& e : dec.atoms) acc += std::pow(std::abs(e.lambda), p);
  if (dec.single) acc += std::pow(std::abs(dec.lambda0), p);
  const double s = acc.value();
  return s > 0.0 ? std::pow(s, 1.0 / p) : 0.0;
}

SampledFunction reconstruct(const AtomicDecomposition& dec) {
  const Grid& g = dec.grid;
  std::vector<DD> acc(g.size());
  for (auto& e : dec.atoms)
    for (std::size_t c = 0; c < e.atom.cells.size(); ++c) acc[e.atom.cells[c]] += e.lambda * e.atom.vals[c];
  if (dec.single)
    for (std::size_t c = 0; c < dec.single->cells.size(); ++c)
      acc[dec.single->cells[c]] += dec.lambda0 * dec.single->vals[c];
  SampledFunction f(g, true);
  for (std::size_t x = 0; x < g.size(); ++x) f.values[x] = acc[x].value();
  return f;
}

Atom make_test_atom(const Grid& g, const Weight& w, const Cube& cube, double p, double q, int s,
                    double freq, double phase) {
  SparseField psi;
  std::vector<double> osc;
  const double r = 0.5 * cube.side;
  for_each_cell(g, cells_in(g, cube), [&](std::size_t x) {
    Point pt = g.point(x);
    Point z{(pt[0] - cube.center[0]) / r, g.n == 2 ? (pt[1] - cube.center[1]) / r : 0.0};
    const double b = bump(z, g.n);
    if (b <= 0.0) return;
    psi.emplace_back(x, b);
    double arg = phase + freq * z[0] * M_PI;
    if (g.n == 2) arg += 0.5 * freq * z[1] * M_PI;
    osc.push_back(std::cos(arg));
  });
  if (psi.empty()) throw Error("test atom cube holds no cells");
  Atom a;
  a.grid = g;
  a.cube = cube;
  a.p = p;
  a.q = q;
  a.s = s;
  MomentProjector pr(g, psi, cube.center, cube.side, s);
  auto c = pr.project(osc);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    a.cells.push_back(psi[k].first);
    a.vals.push_back((osc[k] - pr.eval(c, g.point(psi[k].first))) * psi[k].second);
  }
  const double nrm = lq_norm_sparse(g, a.cells, a.vals, w, q);
  if (!(nrm > 0.0)) throw Error("test atom vanishes after moment removal");
  const double target = rpow(w.measure(cube), (std::isinf(q) ? 0.0 : 1.0 / q) - 1.0 / p);
  for (double& v : a.vals) v *= target / nrm;
  return a;
}

std::vector<Atom> test_atom_family(const Grid& g, const Weight& w, int count, double p, double q, int s) {
  std::vector<Atom> out;
  const double R = std::max(0.0, std::min(4.0, g.L - 4.0));
  for (int k = 0; k < count; ++k) {
    const double c = count > 1 ? -R + 2.0 * R * k / (count - 1) : 0.0;
    Cube q3{{c, g.n == 2 ? 0.5 * c : 0.0}, std::ldexp(2.0, -(k % 4)), g.n, std::nullopt};
    out.push_back(make_test_atom(g, w, q3, p, q, s, 2.0 + k % 3, 0.3 * k));
  }
  return out;
}

SampledFunction FiniteInput::sum(const Grid& g) const {
  if (atoms.size() != coeffs.size()) throw Error("atom list and coefficient list differ in length");
  std::vector<DD> acc(g.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (!(atoms[k].grid == g)) throw Error("grid mismatch");
    for (std::size_t c = 0; c < atoms[k].cells.size(); ++c) acc[atoms[k].cells[c]] += coeffs[k] * atoms[k].vals[c];
  }
  SampledFunction f(g, true);
  for (std::size_t x = 0; x < g.size(); ++x) f.values[x] = acc[x].value();
  return f;
}

namespace {

FiniteDecomposition finite_from(const FiniteInput& in, const SampledFunction& f, const AtomicDecomposition& full,
                                const Weight& w, const HardyParams& hp, double hardy_norm, int K) {
  const Grid& g = f.grid;
  const int n = g.n;
  FiniteDecomposition d;
  d.K = K;
  d.full = full;
  d.hardy_norm = hardy_norm;
  for (auto& e : full.atoms)
    if (std::abs(e.i) + std::abs(e.k) <= K) d.kept.push_back(e);
  d.single_kept = bool(full.single);

  std::vector<DD> acc(g.size());
  for (auto& e : d.kept)
    for (std::size_t c = 0; c < e.atom.cells.size(); ++c) acc[e.atom.cells[c]] += e.lambda * e.atom.vals[c];
  if (full.single)
    for (std::size_t c = 0; c < full.single->cells.size(); ++c)
      acc[full.single->cells[c]] += full.lambda0 * full.single->vals[c];
  SampledFunction r(g, true);
  for (std::size_t x = 0; x < g.size(); ++x) r.values[x] = f.re(x) - acc[x].value();

  // Support box of f and the remainder.
  std::array<double, 2> lo{kInf, kInf}, hi{-kInf, -kInf};
  bool any = false;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (f.re(x) == 0.0 && r.re(x) == 0.0) continue;
    any = true;
    Point p = g.point(x);
    for (int dd = 0; dd < n; ++dd) {
      lo[dd] = std::min(lo[dd], p[dd] - 0.5 * g.h);
      hi[dd] = std::max(hi[dd], p[dd] + 0.5 * g.h);
    }
  }
  double S = 1.0;
  Point c{0.0, 0.0};
  if (any)
    for (int dd = 0; dd < n; ++dd) {
      S = std::max(S, hi[dd] - lo[dd]);
      c[dd] = 0.5 * (lo[dd] + hi[dd]);
    }
  d.support_box = Cube{c, S, n, std::nullopt};
  const int cnt = int(std::ceil(S / 2.0));
  d.N0 = n == 1 ? cnt : cnt * cnt;
  const double ps = S / cnt;
  const double inv_q = std::isinf(hp.q) ? 0.0 : 1.0 / hp.q;
  d.eps = std::pow(double(d.N0), -1.0 / hp.p) * hardy_norm;

  std::map<int, std::vector<std::size_t>> by_piece;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (r.re(x) == 0.0) continue;
    Point p = g.point(x);
    int key = 0;
    for (int dd = n - 1; dd >= 0; --dd) {
      int t = std::clamp(int(std::floor((p[dd] - d.support_box.lo(dd)) / ps)), 0, cnt - 1);
      key = key * cnt + t;
    }
    by_piece[key].push_back(x);
  }
  DD lam_p;
  for (auto& e : d.kept) lam_p += std::pow(std::abs(e.lambda), hp.p);
  if (full.single) lam_p += std::pow(std::abs(full.lambda0), hp.p);
  for (auto& [key, cells] : by_piece) {
    FinitePiece pc;
    pc.cube.n = n;
    pc.cube.side = ps;
    int kk = key;
    for (int dd = 0; dd < n; ++dd) {
      pc.cube.center[dd] = d.support_box.lo(dd) + (kk % cnt + 0.5) * ps;
      kk /= cnt;
    }
    std::vector<double> vals;
    for (auto x : cells) vals.push_back(r.re(x));
    pc.norm = lq_norm_sparse(g, cells, vals, w, hp.q);
    const double wp = w.measure(pc.cube);
    pc.threshold = d.eps * rpow(wp, inv_q - 1.0 / hp.p);
    if (pc.norm > pc.threshold)
      throw Error("increase K: remainder piece norm " + std::to_string(pc.norm) + " exceeds " +
                  std::to_string(pc.threshold));
    pc.mu = pc.norm * rpow(wp, 1.0 / hp.p - inv_q);
    lam_p += std::pow(pc.mu, hp.p);
    d.pieces.push_back(pc);
  }
  d.constructed_norm = std::pow(lam_p.value(), 1.0 / hp.p);

  bool all_valid = !in.atoms.empty();
  DD in_p;
  for (std::size_t k = 0; k < in.atoms.size(); ++k) {
    all_valid = all_valid && validate_atom(in.atoms[k], w).pass();
    in_p += std::pow(std::abs(in.coeffs[k]), hp.p);
  }
  if (all_valid) d.input_norm = std::pow(in_p.value(), 1.0 / hp.p);
  d.finite_norm = std::min(d.constructed_norm, d.input_norm);
  d.ratio = hardy_norm > 0.0 ? d.finite_norm / hardy_norm : 0.0;

  // The finite decomposition must reproduce f exactly: kept atoms + pieces.
  double err = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) err = std::max(err, std::abs(acc[x].value() + r.re(x) - f.re(x)));
  const double fm = f.max_abs();
  d.reconstruction_error = fm > 0.0 ? err / fm : 0.0;
  return d;
}

}  // namespace

FiniteDecomposition finite_decompose(const FiniteInput& in, const Weight& w, const HardyParams& hp,
                                     const Dictionary& dict, int K, const AtomicOptions& opt) {
  if (std::isinf(hp.q)) throw Error("finite decomposition needs q < infinity");
  if (in.atoms.empty()) throw Error("finite decomposition needs at least one atom");
  const Grid& g = in.atoms.front().grid;
  SampledFunction f = in.sum(g);
  MaximalOperator op(g, dict);
  auto full = atomic_decompose(f, op.apply(f, MaximalMode::nontangential), w, hp, opt);
  return finite_from(in, f, full, w, hp, hardy_quasi_norm(f, w, hp.p, op), K);
}

std::vector<FiniteSweepRow> finite_sweep(const FiniteInput& in, const Weight& w, const HardyParams& hp,
                                         const Dictionary& dict, const std::vector<int>& Ks,
                                         const AtomicOptions& opt) {
  if (std::isinf(hp.q)) throw Error("finite decomposition needs q < infinity");
  if (in.atoms.empty()) throw Error("finite decomposition needs at least one atom");
  const Grid& g = in.atoms.front().grid;
  SampledFunction f = in.sum(g);
  MaximalOperator op(g, dict);
  auto full = atomic_decompose(f, op.apply(f, MaximalMode::nontangential), w, hp, opt);
  const double hn = hardy_quasi_norm(f, w, hp.p, op);
  std::vector<FiniteSweepRow> rows;
  for (int K : Ks) {
    FiniteSweepRow row;
    row.K = K;
    try {
      auto d = finite_from(in, f, full, w, hp, hn, K);
      row.ok = true;
      row.ratio = d.ratio;
      row.kept = d.kept.size();
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hardyloc
