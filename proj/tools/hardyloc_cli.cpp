#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "app/config.hpp"
#include "app/experiments.hpp"

using namespace hardyloc;
using namespace hardyloc::app;

int main(int argc, char** argv) {
  CLI::App cli{"hardyloc: weighted local Hardy space experiments"};
  cli.require_subcommand(1);
  std::string config, grid, weight, out, baseline;
  bool update = false;
  std::optional<std::uint64_t> seed;
  for (const char* name : {"weights", "maximal", "czd", "atoms", "norm-equiv", "op-bound", "finite"}) {
    auto* sub = cli.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config, "INI config file")->check(CLI::ExistingFile);
    sub->add_option("--grid", grid, "m,L,n");
    sub->add_option("--weight", weight, "weight descriptor, e.g. exp:1");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--baseline", baseline, "baseline JSON path");
    sub->add_flag("--update-baseline", update, "store this run's constants as the baseline");
    sub->add_option("--seed", seed, "corpus seed");
  }
  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  ExperimentConfig cfg;
  try {
    if (!config.empty()) cfg = load_config(config);
    cfg.experiment = cli.get_subcommands().front()->get_name();
    if (!grid.empty()) {
      auto parts = parse_strings(grid);
      if (parts.size() < 2 || parts.size() > 3) throw UsageError("--grid expects m,L[,n]");
      cfg.m = parse_ints(parts[0]).at(0);
      cfg.L = parse_doubles(parts[1]).at(0);
      if (parts.size() == 3) cfg.n = parse_ints(parts[2]).at(0);
    }
    if (!weight.empty()) cfg.weight = weight;
    if (!out.empty()) cfg.out_dir = out;
    if (!baseline.empty()) cfg.baseline = baseline;
    if (update) cfg.update_baseline = true;
    if (seed) cfg.seed = *seed;
    if (cfg.update_baseline && cfg.baseline.empty()) throw UsageError("--update-baseline needs --baseline");
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  return run(cfg, std::cerr);
}
