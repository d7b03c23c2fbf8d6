#include "app/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hardyloc/weight.hpp"

namespace hardyloc::app {

namespace pt = boost::property_tree;

std::vector<std::string> parse_strings(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto a = item.find_first_not_of(" \t"), b = item.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  for (auto& s : parse_strings(csv)) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::logic_error&) {
      pos = 0;
    }
    if (pos != s.size()) throw UsageError("not a number: '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  for (auto& s : parse_strings(csv)) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(s, &pos);
    } catch (const std::logic_error&) {
      pos = 0;
    }
    if (pos != s.size()) throw UsageError("not an integer: '" + s + "'");
    out.push_back(v);
  }
  return out;
}

HardyParams ExperimentConfig::params() const {
  HardyParams hp = HardyParams::make(p, q, q_omega, n);
  if (s >= 0) hp.s = s;
  if (N >= 0)
    hp.N = N;
  else
    hp.N = std::max(hp.N, hp.s + 1);
  return hp;
}

void ExperimentConfig::validate() const {
  static const std::vector<std::string> kinds{"weights", "maximal", "czd", "atoms", "norm-equiv", "op-bound", "finite"};
  if (std::find(kinds.begin(), kinds.end(), experiment) == kinds.end())
    throw UsageError("unknown experiment '" + experiment + "'");
  if (n != 1 && n != 2) throw UsageError("dimension must be 1 or 2");
  if (m < 8 || !(L > 0.0)) throw UsageError("grid needs m >= 8 and L > 0");
  if (m_fine != 0 && m_fine <= m) throw UsageError("refinement grid must be finer than the base grid");
  if (!(tolerance > 0.0)) throw UsageError("tolerance must be positive");
  if (dict.members < 1 || dict.scales < 1 || !(dict.t_max > 0.0 && dict.t_max < 1.0))
    throw UsageError("dictionary needs members >= 1, scales >= 1, 0 < t_max < 1");
  try {
    params().validate();
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  try {
    parse_weight(weight, make_grid(n, L, m));
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  for (double h : heights)
    if (!(h > 0.0)) throw UsageError("czd heights must be positive fractions");
  if (experiment == "finite" && std::isinf(q)) throw UsageError("finite experiment needs q < inf");
  if (kernel_rule != "cell" && kernel_rule != "point") throw UsageError("kernel_rule must be cell or point");
}

namespace {

template <class T>
void get(const pt::ptree& t, const char* key, T& v) {
  if (auto o = t.get_optional<std::string>(key)) {
    std::istringstream is(*o);
    T tmp{};
    is >> tmp;
    if (is.fail() || !(is >> std::ws).eof()) throw UsageError(std::string("bad value for ") + key + ": '" + *o + "'");
    v = tmp;
  }
}

void get_str(const pt::ptree& t, const char* key, std::string& v) {
  if (auto o = t.get_optional<std::string>(key)) v = *o;
}

void get_q(const pt::ptree& t, const char* key, double& v) {
  if (auto o = t.get_optional<std::string>(key)) {
    if (*o == "inf" || *o == "infinity")
      v = std::numeric_limits<double>::infinity();
    else
      v = parse_doubles(*o).at(0);
  }
}

}  // namespace

ExperimentConfig load_config(const std::string& path, ExperimentConfig c) {
  if (!std::filesystem::exists(path)) throw UsageError("config file not found: " + path);
  pt::ptree t;
  try {
    pt::read_ini(path, t);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError(std::string("cannot parse config: ") + e.what());
  }
  get_str(t, "experiment.kind", c.experiment);
  get(t, "grid.n", c.n);
  get(t, "grid.L", c.L);
  get(t, "grid.m", c.m);
  get(t, "grid.m_fine", c.m_fine);
  get_str(t, "weight.desc", c.weight);
  get(t, "hardy.p", c.p);
  get_q(t, "hardy.q", c.q);
  get(t, "hardy.q_omega", c.q_omega);
  get(t, "hardy.s", c.s);
  get(t, "hardy.N", c.N);
  get(t, "dictionary.members", c.dict.members);
  get(t, "dictionary.scales", c.dict.scales);
  get(t, "dictionary.t_max", c.dict.t_max);
  if (auto v = t.get_optional<std::string>("dictionary.variant")) {
    try {
      c.dict.variant = dict_variant_from_string(*v);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (auto v = t.get_optional<std::string>("corpus.names")) c.corpus = parse_strings(*v);
  get(t, "corpus.seed", c.seed);
  if (auto v = t.get_optional<std::string>("weights.p_sweep")) c.p_sweep = parse_doubles(*v);
  get(t, "weights.side_cap", c.side_cap);
  get_str(t, "weights.family", c.family);
  get(t, "weights.alpha", c.alpha);
  if (auto v = t.get_optional<std::string>("czd.heights")) c.heights = parse_doubles(*v);
  get_str(t, "operator.kind", c.op);
  get(t, "operator.theta", c.theta);
  get(t, "operator.excluded_radius", c.excluded_radius);
  get_str(t, "operator.kernel_rule", c.kernel_rule);
  get_str(t, "operator.symbol", c.symbol);
  get_str(t, "operator.b", c.b);
  get_str(t, "operator.mode", c.mode);
  get(t, "operator.p", c.op_p);
  if (auto v = t.get_optional<std::string>("finite.K")) c.K = parse_ints(*v);
  get(t, "finite.atoms", c.finite_atoms);
  get_str(t, "output.dir", c.out_dir);
  get_str(t, "output.baseline", c.baseline);
  get(t, "output.tolerance", c.tolerance);
  return c;
}

std::string canonical_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  auto list = [&](const auto& v) {
    std::ostringstream s;
    s << std::setprecision(17);
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
    return s.str();
  };
  const HardyParams hp = c.params();
  os << "experiment=" << c.experiment << "\n"
     << "grid=" << c.n << "," << c.L << "," << c.m << "," << c.m_fine << "\n"
     << "weight=" << c.weight << "\n"
     << "hardy=" << hp.p << "," << hp.q << "," << hp.q_omega << "," << hp.s << "," << hp.N << "\n"
     << "dictionary=" << c.dict.members << "," << c.dict.scales << "," << c.dict.t_max << ","
     << to_string(c.dict.variant) << "\n"
     << "corpus=" << list(c.corpus) << ";seed=" << c.seed << "\n";
  if (c.experiment == "weights")
    os << "weights=" << list(c.p_sweep) << ";" << c.side_cap << ";" << c.family << ";" << c.alpha << "\n";
  if (c.experiment == "czd") os << "heights=" << list(c.heights) << "\n";
  if (c.experiment == "op-bound")
    os << "operator=" << c.op << ";" << c.theta << ";" << c.kernel_rule << ";" << c.excluded_radius << ";" << c.symbol << ";" << c.b
       << ";" << c.mode << ";" << c.op_p << "\n";
  if (c.experiment == "finite") os << "finite=" << list(c.K) << ";" << c.finite_atoms << "\n";
  return os.str();
}

}  // namespace hardyloc::app
