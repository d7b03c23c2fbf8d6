#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "hardyloc/grid.hpp"
#include "hardyloc/whitney.hpp"

namespace hardyloc {

using json = nlohmann::json;

json to_json(const Grid& g);
Grid grid_from_json(const json& j);
json to_json(const Cube& q);
Cube cube_from_json(const json& j);

// [{level, index, center, side, dist_to_complement}, ...]
json to_json(const WhitneyCover& c);

// {grid: {...}, real: bool, values: [...]}; real functions store one number per
// sample, complex ones a [re, im] pair.
json to_json(const SampledFunction& f);
SampledFunction function_from_json(const json& j);

// CSV with columns x[,y],re,im and a header row.
void write_function_csv(std::ostream& os, const SampledFunction& f);
void write_function_csv(const std::string& path, const SampledFunction& f);
// Reads the CSV written above; rows must be in grid order.
SampledFunction read_function_csv(std::istream& is, const Grid& g);
SampledFunction read_function_csv(const std::string& path, const Grid& g);

}  // namespace hardyloc
