#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "app/config.hpp"
#include "json.hpp"

namespace hardyloc::app {

constexpr int kSchemaVersion = 1;

enum ExitCode { kOk = 0, kRegression = 1, kUsage = 2, kCompute = 3 };

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<nlohmann::json> rows;  // each an array matching header
};

struct Result {
  nlohmann::json summary;
  std::map<std::string, double> constants;  // regression-managed measurements
  std::vector<Table> tables;
  std::string failure;  // nonempty: a correctness check failed (exit 3 after writing artifacts)
};

Result run_experiment(const ExperimentConfig& cfg);

// True when any number in j is NaN or infinite where a finite value is required.
bool has_nan(const nlohmann::json& j);

void write_csv(const std::string& path, const Table& t);

// Full run: validate, compute, write artifacts, baseline handling. Returns the exit code.
int run(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace hardyloc::app
