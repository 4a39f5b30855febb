#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wvn/metric.hpp"

namespace wvn {

/// Closed balls of the square lattice (spacing * graph metric of Z^2),
/// centered at random lattice points. Radii are drawn from [min_radius, radius].
struct GridBalls {
  int radius = 2;
  int min_radius = -1;  // negative: same as radius
  std::size_t count = 1;
  double spacing = 1.0;
};

/// Random rooted trees with maximum vertex degree `degree` and height <= depth.
struct BoundedDegreeTrees {
  int degree = 3;
  int depth = 3;
  std::size_t count = 1;
};

/// A centre with `n` arms of length 1, each cut into `subdivision` edges.
struct StarFamily {
  std::vector<std::size_t> arms;
  int subdivision = 1;
};

/// Word-metric balls in the Cayley graph of a preset group: z2, z3, hex, free2.
struct RipsSample {
  std::string group = "z2";
  int radius = 2;
  std::size_t count = 1;
};

struct FromFile {
  std::string path;
};

struct PathGraph {
  std::size_t length = 10;  // points 0..length-1, unit steps
};

struct GridGraph {
  std::size_t width = 12;
  std::size_t height = 12;
  double spacing = 1.0;
};

using FamilySpec = std::variant<GridBalls, BoundedDegreeTrees, StarFamily, RipsSample, FromFile, PathGraph, GridGraph>;

FamilySpec family_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FamilySpec& spec);
std::string family_kind(const FamilySpec& spec);

/// Deterministic for a fixed (spec, seed).
SpaceFamily generate_family(const FamilySpec& spec, std::uint64_t seed);

/// Weighted undirected edges -> shortest-path metric. Throws when disconnected.
FiniteMetricSpace metric_from_edges(std::vector<std::string> labels,
                                    const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges);

FiniteMetricSpace star_space(std::size_t arms, int subdivision = 1);
FiniteMetricSpace path_space(std::size_t length, double step = 1.0);
FiniteMetricSpace grid_space(std::size_t width, std::size_t height, double spacing = 1.0);

}  // namespace wvn
