#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "wvn/metric.hpp"

namespace wvn {

// Space files are JSON objects:
//   {"points": [labels...], "dist": [[...], ...]}          explicit metric
//   {"points": [labels...], "edges": [[i, j, w], ...]}      shortest-path metric
// A family file wraps several spaces: {"kind": "...", "spaces": [space, ...]}.
// Distances are written with 17 significant digits so they read back bit-exact.

FiniteMetricSpace space_from_json(const nlohmann::json& j);

/// Accepts either a family document or a single space (a family of one).
SpaceFamily family_from_json(const nlohmann::json& j);

SpaceFamily read_family_file(const std::string& path);

void write_space(std::ostream& out, const FiniteMetricSpace& space, int indent = 0);
void write_family(std::ostream& out, const SpaceFamily& family);

std::string format_double(double value);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace wvn
