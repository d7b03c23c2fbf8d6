#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "app/baseline.hpp"
#include "app/config.hpp"
#include "app/experiments.hpp"

using namespace hardyloc;
using namespace hardyloc::app;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kRoot = fs::temp_directory_path() / ("hardyloc_cli_" + std::to_string(::getpid()));
struct Cleanup {
  ~Cleanup() { fs::remove_all(kRoot); }
} cleanup;

fs::path scratch(const std::string& name) {
  fs::path p = kRoot / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

int run_quiet(const ExperimentConfig& c) {
  std::ostringstream log;
  return run(c, log);
}

int shell(const std::string& args) {
  const std::string cmd = std::string(HARDYLOC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

ExperimentConfig small(const std::string& kind, const fs::path& out) {
  ExperimentConfig c;
  c.experiment = kind;
  c.m = 256;
  c.out_dir = out.string();
  return c;
}

}  // namespace

TEST_CASE("sha256 of a standard vector") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("").substr(0, 16) == "e3b0c44298fc1c14");
}

TEST_CASE("config files") {
  auto dir = scratch("config");
  const auto ini = dir / "run.ini";
  std::ofstream(ini) << "[experiment]\nkind = czd\n[grid]\nm = 512\nL = 4\n[weight]\ndesc = exp:1\n"
                        "[hardy]\np = 0.6667\nq = inf\ns = 1\n[czd]\nheights = 0.5,0.25\n"
                        "[operator]\nkernel_rule = point\n";
  auto c = load_config(ini.string());
  CHECK(c.experiment == "czd");
  CHECK(c.m == 512);
  CHECK(c.L == 4.0);
  CHECK(c.weight == "exp:1");
  CHECK(std::isinf(c.q));
  CHECK(c.heights == std::vector<double>{0.5, 0.25});
  CHECK(c.kernel_rule == "point");
  CHECK(c.params().s == 1);
  CHECK(c.params().N >= 2);
  CHECK_NOTHROW(c.validate());

  std::ofstream(dir / "bad.ini") << "[grid]\nm = many\n";
  CHECK_THROWS_WITH_AS(load_config((dir / "bad.ini").string()), doctest::Contains("grid.m"), UsageError);
  CHECK_THROWS_AS(load_config((dir / "missing.ini").string()), UsageError);

  ExperimentConfig e;
  e.experiment = "nonsense";
  CHECK_THROWS_AS(e.validate(), UsageError);
  e.experiment = "weights";
  e.m = 4;
  CHECK_THROWS_AS(e.validate(), UsageError);
  e.m = 256;
  e.kernel_rule = "trapezoid";
  CHECK_THROWS_AS(e.validate(), UsageError);
  e.kernel_rule = "cell";
  e.p = 0.1;
  e.s = 0;  // below the minimal admissible order
  CHECK_THROWS_AS(e.validate(), UsageError);
  e.experiment = "finite";
  e.p = 1.0;
  e.s = -1;
  CHECK_THROWS_AS(e.validate(), UsageError);  // q = inf
  CHECK(run_quiet(e) == kUsage);
}

TEST_CASE("fingerprint covers the numerics and nothing else") {
  ExperimentConfig a;
  a.experiment = "op-bound";
  const std::string fa = sha256_hex(canonical_config(a));
  auto differs = [&](auto mutate) {
    ExperimentConfig b = a;
    mutate(b);
    return sha256_hex(canonical_config(b)) != fa;
  };
  CHECK(differs([](ExperimentConfig& c) { c.m = 512; }));
  CHECK(differs([](ExperimentConfig& c) { c.L = 4.0; }));
  CHECK(differs([](ExperimentConfig& c) { c.weight = "exp:1"; }));
  CHECK(differs([](ExperimentConfig& c) { c.p = 0.75; }));
  CHECK(differs([](ExperimentConfig& c) { c.seed = 3; }));
  CHECK(differs([](ExperimentConfig& c) { c.dict.scales = 5; }));
  CHECK(differs([](ExperimentConfig& c) { c.theta = 0.5; }));
  CHECK(differs([](ExperimentConfig& c) { c.kernel_rule = "point"; }));
  CHECK(differs([](ExperimentConfig& c) { c.op = "commutator"; }));
  CHECK_FALSE(differs([](ExperimentConfig& c) { c.out_dir = "elsewhere"; }));
  CHECK_FALSE(differs([](ExperimentConfig& c) { c.baseline = "b.json"; }));
  CHECK_FALSE(differs([](ExperimentConfig& c) { c.tolerance = 0.1; }));
}

TEST_CASE("weights experiment: constant weight") {
  auto dir = scratch("weights");
  auto c = small("weights", dir);
  REQUIRE(run_quiet(c) == kOk);
  auto doc = load_json(dir / "weights.json");
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["fingerprint"] == sha256_hex(canonical_config(c)));
  int seen = 0;
  for (auto& [k, v] : doc["constants"].items())
    if (k.rfind("A_p", 0) == 0) {
      CHECK(v.get<double>() == doctest::Approx(1.0).epsilon(1e-14));
      ++seen;
    }
  CHECK(seen == 3);
  CHECK(doc["result"]["monotone_in_p"] == true);
  CHECK(fs::exists(dir / "ap_loc.csv"));
}

TEST_CASE("atoms experiment validates every atom") {
  auto dir = scratch("atoms");
  auto c = small("atoms", dir);
  c.m = 512;
  c.weight = "exp:1";
  c.corpus = {"tent"};
  REQUIRE(run_quiet(c) == kOk);
  auto doc = load_json(dir / "atoms.json");
  CHECK(doc["result"]["all_valid"] == true);
  CHECK(doc["result"]["failing"] == 0);
  CHECK(doc["result"]["atoms"].get<int>() > 0);
}

TEST_CASE("repeated runs are byte-identical") {
  for (const char* kind : {"weights", "czd", "op-bound"}) {
    auto d1 = scratch(std::string("rep1_") + kind), d2 = scratch(std::string("rep2_") + kind);
    auto c = small(kind, d1);
    REQUIRE(run_quiet(c) == kOk);
    c.out_dir = d2.string();
    REQUIRE(run_quiet(c) == kOk);
    int files = 0;
    for (auto& e : fs::directory_iterator(d1)) {
      CHECK(slurp(e.path()) == slurp(d2 / e.path().filename()));
      ++files;
    }
    CHECK(files >= 2);
  }
}

TEST_CASE("baseline round trip and regression detection") {
  auto dir = scratch("baseline");
  auto c = small("czd", dir / "out");
  c.baseline = (dir / "base.json").string();
  c.update_baseline = true;
  REQUIRE(run_quiet(c) == kOk);
  REQUIRE(fs::exists(c.baseline));

  c.update_baseline = false;
  CHECK(run_quiet(c) == kOk);
  auto cmp = load_json(dir / "out" / "czd.baseline.json");
  CHECK(cmp["ok"] == true);
  CHECK(cmp["fingerprint"] == sha256_hex(canonical_config(c)));

  // a different configuration has no entry: nothing to compare
  auto other = c;
  other.m = 128;
  CHECK(run_quiet(other) == kOk);

  auto base = load_json(c.baseline);
  auto& consts = base["entries"].begin().value()["constants"];
  consts["C2_max"]["value"] = 2.0 * consts["C2_max"]["value"].get<double>();
  std::ofstream(c.baseline) << base.dump(2);
  CHECK(run_quiet(c) == kRegression);
  CHECK(load_json(dir / "out" / "czd.baseline.json")["ok"] == false);

  std::ofstream(c.baseline) << "{ not json";
  CHECK(run_quiet(c) == kUsage);
}

TEST_CASE("compute failures exit 3") {
  auto dir = scratch("fail");
  auto c = small("czd", dir);
  c.L = 2.0;  // bump plus dictionary reach does not fit: the level set touches the edge
  CHECK(run_quiet(c) == kCompute);
  CHECK(has_nan(json{{"a", 1.0}, {"b", json::array({std::nan("")})}}));
  CHECK_FALSE(has_nan(json{{"a", 1.0}, {"b", nullptr}}));
}

TEST_CASE("the command-line binary") {
  auto dir = scratch("binary");
  const std::string out = " --out " + (dir / "o").string();
  CHECK(shell("weights --grid 256,8 --weight const:1" + out) == 0);
  CHECK(fs::exists(dir / "o" / "weights.json"));
  CHECK(shell("") == kUsage);
  CHECK(shell("weights --grid 256" + out) == kUsage);
  CHECK(shell("weights --weight nonsense:1" + out) == kUsage);
  CHECK(shell("weights --config " + (dir / "none.ini").string() + out) == kUsage);
  CHECK(shell("weights --update-baseline" + out) == kUsage);
  CHECK(shell("--help") == 0);

  const std::string base = " --baseline " + (dir / "b.json").string();
  CHECK(shell("atoms --grid 256,8 --weight exp:1" + out + base + " --update-baseline") == 0);
  CHECK(shell("atoms --grid 256,8 --weight exp:1" + out + base) == 0);
  CHECK(shell("atoms --grid 256,8 --weight exp:1 --seed 9" + out + base) == 0);  // no entry

  std::ofstream(dir / "c.ini") << "[experiment]\nkind = atoms\n[grid]\nm = 64\n";
  CHECK(shell("weights --config " + (dir / "c.ini").string() + out) == 0);
  // the subcommand wins over the file's kind
  CHECK(fs::exists(dir / "o" / "weights.json"));
}
