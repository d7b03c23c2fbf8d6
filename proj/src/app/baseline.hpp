#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace hardyloc::app {

std::string sha256_hex(const std::string& data);

struct StoredConstant {
  double value = 0.0;
  double tolerance = 0.25;  // relative
};

struct BaselineEntry {
  std::string experiment;
  std::map<std::string, StoredConstant> constants;
};

struct Comparison {
  bool ok = true;
  std::vector<std::string> diffs;
  nlohmann::json report;
};

class Baseline {
 public:
  // A missing file is an empty baseline.
  static Baseline load(const std::string& path);
  void save(const std::string& path) const;

  const BaselineEntry* find(const std::string& fingerprint) const;
  void put(const std::string& fingerprint, BaselineEntry e) { entries_[fingerprint] = std::move(e); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, BaselineEntry> entries_;
};

// Relative comparison with an absolute floor of 1e-12 for values near zero.
Comparison compare(const BaselineEntry& stored, const std::map<std::string, double>& measured);

}  // namespace hardyloc::app
