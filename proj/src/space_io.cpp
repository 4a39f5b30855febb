#include "wvn/space_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "wvn/generators.hpp"

namespace wvn {

using Json = nlohmann::json;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

FiniteMetricSpace space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("points")) throw Error(ErrorCode::invalid_input, "space document needs 'points'");
  std::vector<std::string> labels;
  try {
    labels = j.at("points").get<std::vector<std::string>>();
  } catch (const Json::exception&) {
    throw Error(ErrorCode::invalid_input, "'points' must be an array of strings");
  }
  if (j.contains("dist")) {
    std::vector<std::vector<double>> raw;
    try {
      raw = j.at("dist").get<std::vector<std::vector<double>>>();
    } catch (const Json::exception&) {
      throw Error(ErrorCode::invalid_input, "'dist' must be an array of numeric arrays");
    }
    if (raw.size() != labels.size()) throw Error(ErrorCode::invalid_input, "'dist' row count does not match 'points'");
    return validate_metric(raw, std::move(labels));
  }
  if (j.contains("edges")) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned() || !e[2].is_number())
        throw Error(ErrorCode::invalid_input, "each edge must be [i, j, weight]");
      edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>());
    }
    return metric_from_edges(std::move(labels), edges);
  }
  throw Error(ErrorCode::invalid_input, "space document needs 'dist' or 'edges'");
}

SpaceFamily family_from_json(const Json& j) {
  if (j.is_object() && j.contains("spaces")) {
    SpaceFamily family;
    family.kind = j.value("kind", std::string("from_file"));
    if (!j.at("spaces").is_array()) throw Error(ErrorCode::invalid_input, "'spaces' must be an array");
    for (const auto& s : j.at("spaces")) family.spaces.push_back(space_from_json(s));
    if (family.spaces.empty()) throw Error(ErrorCode::invalid_input, "family file has no spaces");
    return family;
  }
  return {{space_from_json(j)}, "from_file"};
}

SpaceFamily read_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open family file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_input, "malformed family file '" + path + "': " + e.what());
  }
  return family_from_json(j);
}

void write_space(std::ostream& out, const FiniteMetricSpace& space, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  out << pad << "{\n" << pad << "  \"points\": [";
  for (std::size_t i = 0; i < space.size(); ++i) out << (i ? ", " : "") << Json(space.labels()[i]).dump();
  out << "],\n" << pad << "  \"dist\": [\n";
  for (std::size_t i = 0; i < space.size(); ++i) {
    out << pad << "    [";
    for (std::size_t j = 0; j < space.size(); ++j) out << (j ? ", " : "") << format_double(space(i, j));
    out << "]" << (i + 1 < space.size() ? "," : "") << "\n";
  }
  out << pad << "  ]\n" << pad << "}";
}

void write_family(std::ostream& out, const SpaceFamily& family) {
  out << "{\n  \"kind\": " << Json(family.kind).dump() << ",\n  \"spaces\": [\n";
  for (std::size_t s = 0; s < family.spaces.size(); ++s) {
    write_space(out, family.spaces[s], 4);
    out << (s + 1 < family.spaces.size() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
}

void write_text_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::io, "write failed for '" + path + "'");
}

}  // namespace wvn
