#include "app/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "app/baseline.hpp"
#include "hardyloc/atoms.hpp"
#include "hardyloc/boundedness.hpp"
#include "hardyloc/corpus.hpp"
#include "hardyloc/czd.hpp"
#include "hardyloc/maximal.hpp"
#include "hardyloc/muckenhoupt.hpp"
#include "hardyloc/serialize.hpp"

namespace hardyloc::app {

using nlohmann::json;

namespace {

CubeFamily family_of(const std::string& s) {
  if (s == "all") return CubeFamily::all;
  if (s == "dyadic" || s == "dyadic_sides") return CubeFamily::dyadic_sides;
  throw UsageError("unknown cube family '" + s + "'");
}

std::string num_key(const std::string& base, double v) {
  std::ostringstream os;
  os << base << "(" << std::setprecision(6) << v << ")";
  return os.str();
}

std::function<double(const Point&)> commutator_symbol(const std::string& name) {
  if (name == "sin") return [](const Point& x) { return std::sin(2.0 * x[0]); };
  if (name == "abs") return [](const Point& x) { return std::abs(x[0]); };
  if (name == "log") return [](const Point& x) { return std::log(std::abs(x[0])); };
  throw UsageError("unknown commutator symbol '" + name + "'");
}

Result weights_experiment(const ExperimentConfig& c) {
  Result r;
  Grid g = make_grid(c.n, c.L, c.m);
  Weight w = parse_weight(c.weight, g);
  const CubeFamily fam = family_of(c.family);
  Table t{"ap_loc", {"p", "constant", "argmax_center", "argmax_side", "cubes", "duality_rel_err",
                     "small_doubling", "large_doubling", "phi_constant"}, {}};
  json rows = json::array();
  bool monotone = true;
  double prev = 0.0;
  std::vector<double> sweep = c.p_sweep;
  std::sort(sweep.begin(), sweep.end());
  for (double p : sweep) {
    if (!(p >= 1.0)) throw UsageError("A_p sweep needs p >= 1");
    ApLocReport rep = ap_loc_constant(w, p, c.side_cap, fam);
    double dual = 0.0, sd = 0.0, ld = 0.0;
    if (p > 1.0) {
      auto props = check_weight_properties(w, p, {}, c.side_cap, fam);
      dual = props.duality_rel_err;
      sd = props.small_doubling;
      ld = props.large_doubling;
    }
    double phi = 0.0;
    if (c.alpha > 0.0 && p > 1.0) phi = ap_phi_constant(w, p, c.alpha, fam).constant;
    if (!rows.empty() && rep.constant > prev) monotone = false;
    prev = rep.constant;
    t.rows.push_back(json::array({p, rep.constant, to_json(rep.argmax)["center"], rep.argmax.side, rep.cubes, dual, sd, ld, phi}));
    rows.push_back({{"p", p}, {"constant", rep.constant}, {"duality_rel_err", dual}, {"cubes", rep.cubes}});
    r.constants[num_key("A_p", p)] = rep.constant;
    if (c.alpha > 0.0 && p > 1.0) r.constants[num_key("A_p_phi", p)] = phi;
  }
  r.summary["weight"] = w.descriptor();
  r.summary["side_cap"] = c.side_cap;
  r.summary["family"] = to_string(fam);
  r.summary["sweep"] = rows;
  r.summary["monotone_in_p"] = monotone;
  r.summary["constant"] = t.rows.empty() ? 0.0 : t.rows.front()[1].get<double>();
  if (!monotone) r.failure = "A_p constants increase with p";
  r.tables.push_back(std::move(t));
  return r;
}

Result maximal_experiment(const ExperimentConfig& c) {
  Result r;
  Grid g = make_grid(c.n, c.L, c.m);
  Weight w = parse_weight(c.weight, g);
  HardyParams hp = c.params();
  Dictionary d = make_dictionary(hp.N, c.n, c.dict, c.L);
  MaximalOperator M(g, d);
  CorpusSpec cs{c.corpus, c.seed};
  auto names = expand_names(cs);
  Table t{"maximal", {"function", "hardy_norm", "hl_ratio", "upper_constant", "lower_excess", "modulus_term"}, {}};
  double up = 0.0, hl = 0.0;
  for (auto& nm : names) {
    auto f = corpus_function(g, nm, c.seed);
    const double hn = hardy_quasi_norm(f, w, hp.p, M);
    const double ratio = local_maximal_ratio(f, w, std::max(hp.p, 1.0));
    auto dom = maximal_domination(f, d);
    up = std::max(up, dom.upper_constant);
    hl = std::max(hl, ratio);
    t.rows.push_back(json::array({nm, hn, ratio, dom.upper_constant, dom.lower_excess, dom.modulus_term}));
    r.constants["hardy_norm:" + nm] = hn;
    if (dom.lower_excess > dom.modulus_term + 1e-12)
      r.failure = "lower domination bound violated beyond the modulus term for " + nm;
  }
  r.constants["domination_upper_max"] = up;
  r.constants["hl_ratio_max"] = hl;
  r.summary["dictionary"] = {{"N", d.N}, {"members", d.members.size()}, {"scales", d.scales}, {"reach", d.reach()}};
  r.summary["domination_upper_max"] = up;
  r.summary["hl_ratio_max"] = hl;
  r.tables.push_back(std::move(t));
  return r;
}

Result czd_experiment(const ExperimentConfig& c) {
  Result r;
  Grid g = make_grid(c.n, c.L, c.m);
  Weight w = parse_weight(c.weight, g);
  HardyParams hp = c.params();
  Dictionary d = make_dictionary(hp.N, c.n, c.dict, c.L);
  MaximalOperator M(g, d);
  auto names = expand_names({c.corpus, c.seed});
  Table t{"czd", {"function", "height_fraction", "lambda", "cubes", "projected", "plain", "C2", "C3", "C9",
                  "decay_exponent", "decay_points", "reconstruction_error", "orthogonality_residual",
                  "sum_b_ratio", "good_part_ratio", "max_cond"}, {}};
  Table cubes{"czd_cubes", {"function", "height_fraction", "i", "center", "side", "branch", "dist"}, {}};
  double C2 = 0.0, C3 = 0.0, C9 = 0.0, decay = -kInf, rec = 0.0, good = 0.0, sumb = 0.0;
  int skipped = 0;
  for (auto& nm : names) {
    auto f = corpus_function(g, nm, c.seed);
    auto Mf = M.apply(f, MaximalMode::nontangential);
    double mx = 0.0, mn = kInf;
    for (std::size_t i = 0; i < g.size(); ++i) mx = std::max(mx, Mf.re(i)), mn = std::min(mn, Mf.re(i));
    for (double frac : c.heights) {
      const double lam = frac * mx;
      if (!(lam > mn)) {
        ++skipped;
        continue;
      }
      auto dec = cz_decompose(f, Mf, lam, hp);
      auto dg = verify_czd(dec, f, w, M);
      C2 = std::max(C2, dg.C2);
      C3 = std::max(C3, dg.C3);
      C9 = std::max(C9, dg.C9);
      if (dg.decay_points > 0) decay = std::max(decay, dg.decay_exponent);
      rec = std::max(rec, dec.reconstruction_error);
      good = std::max(good, dg.good_part_ratio);
      sumb = std::max(sumb, dg.sum_b_ratio);
      t.rows.push_back(json::array({nm, frac, lam, dec.size(), dg.projected, dg.plain, dg.C2, dg.C3, dg.C9,
                                    dg.decay_exponent, dg.decay_points, dec.reconstruction_error,
                                    dec.orthogonality_residual, dg.sum_b_ratio, dg.good_part_ratio, dec.max_cond}));
      for (std::size_t i = 0; i < dec.size(); ++i)
        cubes.rows.push_back(json::array({nm, frac, i, to_json(dec.cover.cubes[i].cube)["center"], dec.side(i),
                                          dec.bad[i].projected ? "projected" : "plain", dec.cover.cubes[i].dist}));
    }
  }
  r.constants["C2_max"] = C2;
  r.constants["C3_max"] = C3;
  r.constants["C9_max"] = C9;
  r.constants["good_part_ratio_max"] = good;
  r.constants["sum_b_ratio_max"] = sumb;
  r.summary = {{"C2_max", C2}, {"C3_max", C3}, {"C9_max", C9}, {"reconstruction_error_max", rec},
               {"good_part_ratio_max", good}, {"sum_b_ratio_max", sumb}, {"skipped_heights", skipped},
               {"decay_threshold", -(c.n + hp.s + 1) + 0.5}};
  if (std::isfinite(decay)) {
    r.summary["decay_exponent_worst"] = decay;
    r.constants["decay_exponent_worst"] = decay;
  } else {
    r.summary["decay_exponent_worst"] = nullptr;
  }
  if (rec > 1e-10) r.failure = "reconstruction error above 1e-10";
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(cubes));
  return r;
}

Result atoms_experiment(const ExperimentConfig& c) {
  Result r;
  Grid g = make_grid(c.n, c.L, c.m);
  Weight w = parse_weight(c.weight, g);
  HardyParams hp = c.params();
  Dictionary d = make_dictionary(hp.N, c.n, c.dict, c.L);
  MaximalOperator M(g, d);
  auto names = expand_names({c.corpus, c.seed});
  Table per{"atoms_functions", {"function", "atoms", "failing", "reconstruction_error", "telescoping_error",
                                "atomic_norm", "hardy_norm", "ratio", "k_low", "k_top", "single_atom",
                                "lambda0", "g_low_norm", "enlarged", "split"}, {}};
  Table man{"atoms_manifest", {"function", "k", "i", "case", "center", "side", "lambda", "pass",
                               "norm_slack", "moment_residual"}, {}};
  std::size_t total = 0, failing = 0;
  double rec = 0.0, lo = kInf, hi = 0.0;
  for (auto& nm : names) {
    auto f = corpus_function(g, nm, c.seed);
    auto dec = atomic_decompose(f, M.apply(f, MaximalMode::nontangential), w, hp);
    std::size_t bad = 0;
    for (auto& e : dec.atoms) {
      auto rep = validate_atom(e.atom, w);
      bad += !rep.pass();
      man.rows.push_back(json::array({nm, e.k, e.i, e.case_id, to_json(*e.atom.cube)["center"], e.atom.cube->side,
                                      e.lambda, rep.pass(), rep.norm_slack, rep.moment_residual}));
    }
    if (dec.single && !validate_atom(*dec.single, w).pass()) ++bad;
    auto rc = reconstruct(dec);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(rc.re(i) - f.re(i)));
    err /= std::max(f.max_abs(), 1e-300);
    const double an = atomic_norm_upper(dec, hp.p), hn = hardy_quasi_norm(f, w, hp.p, M);
    const double ratio = hn > 0.0 ? an / hn : 0.0;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    rec = std::max(rec, err);
    total += dec.atoms.size() + (dec.single ? 1 : 0);
    failing += bad;
    per.rows.push_back(json::array({nm, dec.atoms.size(), bad, err, dec.telescoping_error, an, hn, ratio, dec.k_low,
                                    dec.k_top, bool(dec.single), dec.lambda0, dec.g_low_norm, dec.enlarged, dec.split}));
    r.constants["atomic_norm:" + nm] = an;
  }
  r.constants["ratio_min"] = lo;
  r.constants["ratio_max"] = hi;
  r.summary = {{"atoms", total}, {"failing", failing}, {"all_valid", failing == 0},
               {"reconstruction_error_max", rec}, {"ratio_min", lo}, {"ratio_max", hi}, {"params", hp.describe()}};
  if (failing) r.failure = std::to_string(failing) + " atoms fail validation";
  if (rec > 1e-8) r.failure = "reconstruction error above 1e-8";
  r.tables.push_back(std::move(per));
  r.tables.push_back(std::move(man));
  return r;
}

Result norm_equiv_experiment(const ExperimentConfig& c) {
  Result r;
  HardyParams hp = c.params();
  Dictionary d = make_dictionary(hp.N, c.n, c.dict, c.L);
  auto names = expand_names({c.corpus, c.seed});
  Table t{"norm_equiv", {"function", "m", "atomic_norm", "hardy_norm", "ratio"}, {}};
  json levels = json::array();
  std::vector<std::pair<double, double>> ends;
  for (int m : {c.m, c.m_fine ? c.m_fine : 2 * c.m}) {
    Grid g = make_grid(c.n, c.L, m);
    Weight w = parse_weight(c.weight, g);
    MaximalOperator M(g, d);
    double lo = kInf, hi = 0.0;
    for (auto& nm : names) {
      auto f = corpus_function(g, nm, c.seed);
      auto dec = atomic_decompose(f, M.apply(f, MaximalMode::nontangential), w, hp);
      const double an = atomic_norm_upper(dec, hp.p), hn = hardy_quasi_norm(f, w, hp.p, M);
      const double ratio = hn > 0.0 ? an / hn : 0.0;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      t.rows.push_back(json::array({nm, m, an, hn, ratio}));
    }
    ends.emplace_back(lo, hi);
    levels.push_back({{"m", m}, {"ratio_min", lo}, {"ratio_max", hi}, {"spread", hi / lo}});
    r.constants["ratio_min@" + std::to_string(m)] = lo;
    r.constants["ratio_max@" + std::to_string(m)] = hi;
  }
  const double dlo = std::abs(ends[1].first - ends[0].first) / ends[0].first;
  const double dhi = std::abs(ends[1].second - ends[0].second) / ends[0].second;
  r.summary = {{"levels", levels}, {"drift_min", dlo}, {"drift_max", dhi},
               {"spread_ok", ends[0].second / ends[0].first <= 100.0 && ends[1].second / ends[1].first <= 100.0},
               {"drift_ok", dlo <= 0.25 && dhi <= 0.25}};
  r.tables.push_back(std::move(t));
  return r;
}

Result op_bound_experiment(const ExperimentConfig& c) {
  Result r;
  HardyParams hp = c.params();
  Dictionary d = make_dictionary(hp.N, c.n, c.dict, c.L);
  OperatorSpec op;
  if (c.op == "identity")
    op.kind = OperatorSpec::Kind::identity;
  else if (c.op == "T")
    op.kind = OperatorSpec::Kind::strongly_singular;
  else if (c.op == "commutator")
    op.kind = OperatorSpec::Kind::commutator;
  else if (c.op == "psdo")
    op.kind = OperatorSpec::Kind::psdo;
  else
    throw UsageError("unknown operator '" + c.op + "'");
  op.kernel.theta = c.theta;
  op.kernel.excluded_radius = c.excluded_radius;
  if (c.kernel_rule == "cell") op.kernel.rule = KernelRule::cell;
  else if (c.kernel_rule == "point") op.kernel.rule = KernelRule::point;
  else throw UsageError("unknown kernel_rule '" + c.kernel_rule + "' (cell | point)");
  if (op.kind == OperatorSpec::Kind::commutator) {
    op.b = commutator_symbol(c.b);
    op.b_name = c.b;
  }
  if (op.kind == OperatorSpec::Kind::psdo) {
    try {
      op.symbol = parse_symbol(c.symbol);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  const BoundMode mode = parse_bound_mode(c.mode);
  const bool atoms = std::find(c.corpus.begin(), c.corpus.end(), "test-atoms") != c.corpus.end();
  auto corpus = [&](const Grid& g) {
    if (atoms) {
      Weight w = parse_weight(c.weight, g);
      std::vector<SampledFunction> out;
      for (auto& a : test_atom_family(g, w, 20, 1.0, kInf, hp.s)) out.push_back(a.dense());
      return out;
    }
    return corpus_generate(g, {c.corpus, c.seed});
  };
  auto rep = boundedness_refinement(op, c.weight, c.op_p, corpus, mode, c.n, c.L, c.m,
                                    c.m_fine ? c.m_fine : 2 * c.m, &d, c.tolerance);
  Table t{"op_bound", {"m", "input", "lambda", "value"}, {}};
  for (auto* b : {&rep.coarse, &rep.fine})
    for (auto& pr : b->probes) t.rows.push_back(json::array({b->m, pr.input, pr.lambda, pr.value}));
  r.constants["sup_ratio@" + std::to_string(rep.coarse.m)] = rep.coarse.sup_ratio;
  r.constants["sup_ratio@" + std::to_string(rep.fine.m)] = rep.fine.sup_ratio;
  r.summary = {{"operator", rep.coarse.op}, {"mode", to_string(mode)}, {"p", c.op_p},
               {"sup_ratio_coarse", rep.coarse.sup_ratio}, {"sup_ratio_fine", rep.fine.sup_ratio},
               {"drift", rep.drift}, {"stable", rep.stable}, {"b_bmo", rep.coarse.b_bmo}};
  r.tables.push_back(std::move(t));
  return r;
}

Result finite_experiment(const ExperimentConfig& c) {
  Result r;
  Grid g = make_grid(c.n, c.L, c.m);
  Weight w = parse_weight(c.weight, g);
  HardyParams hp = c.params();
  Dictionary d = make_dictionary(hp.N, c.n, c.dict, c.L);
  FiniteInput in;
  in.atoms = test_atom_family(g, w, c.finite_atoms, hp.p, hp.q, hp.s);
  for (int k = 0; k < c.finite_atoms; ++k) in.coeffs.push_back(k % 2 ? -0.5 : 1.0);
  auto rows = finite_sweep(in, w, hp, d, c.K);
  Table t{"finite", {"K", "ok", "ratio", "kept", "error"}, {}};
  json sweep = json::array();
  for (auto& row : rows) {
    t.rows.push_back(json::array({row.K, row.ok, row.ratio, row.kept, row.error}));
    sweep.push_back({{"K", row.K}, {"ok", row.ok}, {"ratio", row.ratio}});
    if (row.ok) r.constants["ratio@K=" + std::to_string(row.K)] = row.ratio;
  }
  r.summary = {{"sweep", sweep}, {"atoms", c.finite_atoms}};
  r.tables.push_back(std::move(t));
  return r;
}

std::string fmt_cell(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
    return s;
  }
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(17) << v.get<double>();
    return os.str();
  }
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt_cell(v[i]);
    return s;
  }
  return v.dump();
}

}  // namespace

bool has_nan(const json& j) {
  if (j.is_number_float()) return std::isnan(j.get<double>());
  if (j.is_array() || j.is_object())
    for (auto& v : j)
      if (has_nan(v)) return true;
  return false;
}

void write_csv(const std::string& path, const Table& t) {
  std::ofstream os(path);
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt_cell(row[i]);
    os << "\n";
  }
}

Result run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "weights") return weights_experiment(cfg);
  if (cfg.experiment == "maximal") return maximal_experiment(cfg);
  if (cfg.experiment == "czd") return czd_experiment(cfg);
  if (cfg.experiment == "atoms") return atoms_experiment(cfg);
  if (cfg.experiment == "norm-equiv") return norm_equiv_experiment(cfg);
  if (cfg.experiment == "op-bound") return op_bound_experiment(cfg);
  if (cfg.experiment == "finite") return finite_experiment(cfg);
  throw UsageError("unknown experiment '" + cfg.experiment + "'");
}

int run(const ExperimentConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
  } catch (const Error& e) {
    log << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  const std::string canon = canonical_config(cfg);
  const std::string fp = sha256_hex(canon);
  Result res;
  try {
    res = run_experiment(cfg);
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    log << "compute error: " << e.what() << "\n";
    return kCompute;
  }

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["experiment"] = cfg.experiment;
  doc["fingerprint"] = fp;
  doc["config"] = canon;
  doc["result"] = res.summary;
  doc["constants"] = json::object();
  for (auto& [k, v] : res.constants) doc["constants"][k] = v;
  bool nan = has_nan(doc);
  for (auto& t : res.tables)
    for (auto& row : t.rows) nan = nan || has_nan(row);

  std::filesystem::create_directories(cfg.out_dir);
  const std::string stem = (std::filesystem::path(cfg.out_dir) / cfg.experiment).string();
  std::ofstream(stem + ".json") << doc.dump(2) << "\n";
  for (auto& t : res.tables) write_csv((std::filesystem::path(cfg.out_dir) / (t.name + ".csv")).string(), t);

  if (nan) {
    log << "compute error: NaN in artifacts\n";
    return kCompute;
  }
  if (!res.failure.empty()) {
    log << "compute error: " << res.failure << "\n";
    return kCompute;
  }
  if (cfg.baseline.empty()) return kOk;
  Baseline base;
  try {
    base = Baseline::load(cfg.baseline);
  } catch (const Error& e) {
    log << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  if (cfg.update_baseline) {
    BaselineEntry e;
    e.experiment = cfg.experiment;
    for (auto& [k, v] : res.constants) e.constants[k] = {v, cfg.tolerance};
    base.put(fp, std::move(e));
    base.save(cfg.baseline);
    log << "baseline updated: " << fp << "\n";
    return kOk;
  }
  const BaselineEntry* stored = base.find(fp);
  if (!stored) {
    log << "no baseline entry for fingerprint " << fp << "; nothing to compare\n";
    return kOk;
  }
  Comparison cmp = compare(*stored, res.constants);
  std::ofstream(stem + ".baseline.json") << json{{"fingerprint", fp}, {"ok", cmp.ok}, {"constants", cmp.report}}.dump(2) << "\n";
  if (!cmp.ok) {
    log << "regression against baseline " << fp << ":\n";
    for (auto& d : cmp.diffs) log << "  " << d << "\n";
    return kRegression;
  }
  return kOk;
}

}  // namespace hardyloc::app
