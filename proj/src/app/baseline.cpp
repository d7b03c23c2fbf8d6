#include "app/baseline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "hardyloc/corpus.hpp"

namespace hardyloc::app {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

Baseline Baseline::load(const std::string& path) {
  Baseline b;
  if (!std::filesystem::exists(path)) return b;
  std::ifstream in(path);
  nlohmann::json j;
  try {
    in >> j;
    for (auto& [fp, e] : j.at("entries").items()) {
      BaselineEntry be;
      be.experiment = e.at("experiment").get<std::string>();
      for (auto& [name, c] : e.at("constants").items())
        be.constants[name] = {c.at("value").get<double>(), c.at("tolerance").get<double>()};
      b.entries_[fp] = std::move(be);
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("malformed baseline file " + path + ": " + e.what());
  }
  return b;
}

void Baseline::save(const std::string& path) const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["entries"] = nlohmann::json::object();
  for (auto& [fp, e] : entries_) {
    nlohmann::json je;
    je["experiment"] = e.experiment;
    je["constants"] = nlohmann::json::object();
    for (auto& [name, c] : e.constants) je["constants"][name] = {{"value", c.value}, {"tolerance", c.tolerance}};
    j["entries"][fp] = je;
  }
  auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream(path) << j.dump(2) << "\n";
}

const BaselineEntry* Baseline::find(const std::string& fingerprint) const {
  auto it = entries_.find(fingerprint);
  return it == entries_.end() ? nullptr : &it->second;
}

Comparison compare(const BaselineEntry& stored, const std::map<std::string, double>& measured) {
  Comparison c;
  c.report = nlohmann::json::array();
  for (auto& [name, sc] : stored.constants) {
    auto it = measured.find(name);
    nlohmann::json row{{"name", name}, {"stored", sc.value}, {"tolerance", sc.tolerance}};
    if (it == measured.end()) {
      c.ok = false;
      c.diffs.push_back(name + ": missing from this run");
      row["status"] = "missing";
    } else {
      const double dev = std::abs(it->second - sc.value);
      const bool pass = dev <= sc.tolerance * std::abs(sc.value) + 1e-12;
      row["measured"] = it->second;
      row["status"] = pass ? "ok" : "regression";
      if (!pass) {
        c.ok = false;
        std::ostringstream os;
        os << name << ": stored " << sc.value << ", measured " << it->second << " (tolerance " << sc.tolerance << ")";
        c.diffs.push_back(os.str());
      }
    }
    c.report.push_back(row);
  }
  return c;
}

}  // namespace hardyloc::app
