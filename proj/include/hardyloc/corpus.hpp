#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hardyloc/grid.hpp"

namespace hardyloc {

// Bad user input (unknown names, malformed descriptors) as opposed to compute failures.
struct UsageError : Error {
  using Error::Error;
};

struct CorpusSpec {
  // tent, bump, haar-osc, multi-bump, random:<k>; "standard" expands to the 10-member set.
  std::vector<std::string> names{"standard"};
  std::uint64_t seed = 0;
};

CorpusSpec parse_corpus(const std::string& csv, std::uint64_t seed = 0);
std::vector<std::string> expand_names(const CorpusSpec& spec);
SampledFunction corpus_function(const Grid& g, const std::string& name, std::uint64_t seed = 0);
std::vector<SampledFunction> corpus_generate(const Grid& g, const CorpusSpec& spec);

}  // namespace hardyloc
