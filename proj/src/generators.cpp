#include "wvn/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "wvn/rng.hpp"
#include "wvn/space_io.hpp"

namespace wvn {

namespace {

using Json = nlohmann::json;

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_input, std::string("family field '") + key + "': " + e.what());
  }
}

std::string coord_label(std::int64_t x, std::int64_t y) {
  std::ostringstream out;
  out << "(" << x << "," << y << ")";
  return out.str();
}

SpaceFamily make_grid_balls(const GridBalls& spec, std::uint64_t seed) {
  if (spec.radius < 0 || spec.count == 0 || !(spec.spacing > 0.0))
    throw Error(ErrorCode::invalid_input, "grid_balls needs radius >= 0, count >= 1, spacing > 0");
  const int lo = spec.min_radius < 0 ? spec.radius : spec.min_radius;
  if (lo > spec.radius) throw Error(ErrorCode::invalid_input, "grid_balls min_radius exceeds radius");

  Rng rng(derive_seed(seed, {0x67726964}));
  SpaceFamily family;
  family.kind = "grid_balls";
  for (std::size_t b = 0; b < spec.count; ++b) {
    const int r = static_cast<int>(rng.uniform_int(lo, spec.radius));
    const std::int64_t cx = rng.uniform_int(-1000, 1000);
    const std::int64_t cy = rng.uniform_int(-1000, 1000);
    std::vector<std::array<int, 2>> offsets;
    for (int dx = -r; dx <= r; ++dx)
      for (int dy = -r; dy <= r; ++dy)
        if (std::abs(dx) + std::abs(dy) <= r) offsets.push_back({dx, dy});
    std::vector<std::string> labels;
    std::vector<std::vector<double>> raw(offsets.size(), std::vector<double>(offsets.size()));
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      labels.push_back(coord_label(cx + offsets[i][0], cy + offsets[i][1]));
      for (std::size_t j = 0; j < offsets.size(); ++j) {
        const int steps = std::abs(offsets[i][0] - offsets[j][0]) + std::abs(offsets[i][1] - offsets[j][1]);
        raw[i][j] = spec.spacing * steps;
      }
    }
    family.spaces.push_back(validate_metric(raw, std::move(labels)));
  }
  return family;
}

SpaceFamily make_trees(const BoundedDegreeTrees& spec, std::uint64_t seed) {
  if (spec.degree < 1 || spec.depth < 0 || spec.count == 0)
    throw Error(ErrorCode::invalid_input, "bounded_degree_trees needs degree >= 1, depth >= 0, count >= 1");
  Rng rng(derive_seed(seed, {0x74726565}));
  SpaceFamily family;
  family.kind = "bounded_degree_trees";
  for (std::size_t t = 0; t < spec.count; ++t) {
    std::vector<int> level{0};
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    for (std::size_t v = 0; v < level.size(); ++v) {
      if (level[v] >= spec.depth) continue;
      const std::int64_t children = v == 0 ? rng.uniform_int(1, spec.degree) : rng.uniform_int(0, spec.degree - 1);
      for (std::int64_t c = 0; c < children; ++c) {
        edges.emplace_back(v, level.size(), 1.0);
        level.push_back(level[v] + 1);
      }
    }
    std::vector<std::string> labels;
    for (std::size_t v = 0; v < level.size(); ++v) labels.push_back("v" + std::to_string(v));
    family.spaces.push_back(metric_from_edges(std::move(labels), edges));
  }
  return family;
}

// Group elements: integer vectors for the abelian presets, reduced words for free2.
struct GroupPreset {
  std::string name;
  std::size_t rank = 0;  // abelian presets only

  bool abelian() const { return name != "free2"; }

  double norm(const std::vector<std::int64_t>& v) const {
    if (name == "hex") return static_cast<double>((std::llabs(v[0]) + std::llabs(v[1]) + std::llabs(v[0] + v[1])) / 2);
    double s = 0;
    for (auto c : v) s += static_cast<double>(std::llabs(c));
    return s;
  }
};

GroupPreset preset(const std::string& name) {
  if (name == "z2" || name == "hex") return {name, 2};
  if (name == "z3") return {name, 3};
  if (name == "free2") return {name, 0};
  throw Error(ErrorCode::invalid_input, "unknown group preset '" + name + "' (expected z2, z3, hex, free2)");
}

char inverse_letter(char c) { return static_cast<char>(c ^ 0x20); }  // a <-> A, b <-> B

std::string reduce_word(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (!out.empty() && out.back() == inverse_letter(c)) out.pop_back();
    else out.push_back(c);
  }
  return out;
}

std::string invert_word(const std::string& w) {
  std::string out(w.rbegin(), w.rend());
  for (char& c : out) c = inverse_letter(c);
  return out;
}

SpaceFamily make_rips(const RipsSample& spec, std::uint64_t seed) {
  if (spec.radius < 0 || spec.count == 0) throw Error(ErrorCode::invalid_input, "rips_sample needs radius >= 0, count >= 1");
  const GroupPreset group = preset(spec.group);
  Rng rng(derive_seed(seed, {0x72697073}));
  SpaceFamily family;
  family.kind = "rips_sample:" + spec.group;
  const int r = spec.radius;

  for (std::size_t b = 0; b < spec.count; ++b) {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> raw;
    if (group.abelian()) {
      std::vector<std::int64_t> centre(group.rank);
      for (auto& c : centre) c = rng.uniform_int(-100, 100);
      std::vector<std::vector<std::int64_t>> ball;
      std::vector<std::int64_t> v(group.rank, -r);
      while (true) {
        if (group.norm(v) <= r) ball.push_back(v);
        std::size_t axis = 0;
        while (axis < v.size() && v[axis] == r) v[axis++] = -r;
        if (axis == v.size()) break;
        ++v[axis];
      }
      raw.assign(ball.size(), std::vector<double>(ball.size()));
      for (std::size_t i = 0; i < ball.size(); ++i) {
        std::ostringstream label;
        label << "(";
        for (std::size_t a = 0; a < group.rank; ++a) label << (a ? "," : "") << centre[a] + ball[i][a];
        label << ")";
        labels.push_back(label.str());
        for (std::size_t j = 0; j < ball.size(); ++j) {
          std::vector<std::int64_t> diff(group.rank);
          for (std::size_t a = 0; a < group.rank; ++a) diff[a] = ball[i][a] - ball[j][a];
          raw[i][j] = group.norm(diff);
        }
      }
    } else {
      static constexpr std::array<char, 4> kLetters{'a', 'A', 'b', 'B'};
      std::string centre;
      const auto centre_len = rng.uniform_int(0, 6);
      while (static_cast<std::int64_t>(centre.size()) < centre_len) {
        const char c = kLetters[static_cast<std::size_t>(rng.uniform_int(0, 3))];
        centre = reduce_word(centre + c);
      }
      std::vector<std::string> ball{""};
      for (std::size_t i = 0; i < ball.size(); ++i) {
        if (static_cast<int>(ball[i].size()) == r) continue;
        for (char c : kLetters)
          if (ball[i].empty() || ball[i].back() != inverse_letter(c)) ball.push_back(ball[i] + c);
      }
      raw.assign(ball.size(), std::vector<double>(ball.size()));
      for (std::size_t i = 0; i < ball.size(); ++i) {
        const std::string element = reduce_word(centre + ball[i]);
        labels.push_back(element.empty() ? "e" : element);
        for (std::size_t j = 0; j < ball.size(); ++j)
          raw[i][j] = static_cast<double>(reduce_word(invert_word(ball[i]) + ball[j]).size());
      }
    }
    family.spaces.push_back(validate_metric(raw, std::move(labels)));
  }
  return family;
}

}  // namespace

FiniteMetricSpace metric_from_edges(std::vector<std::string> labels,
                                    const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
  const std::size_t n = labels.size();
  if (n == 0) throw Error(ErrorCode::invalid_input, "graph has no vertices");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& [a, b, w] : edges) {
    if (a >= n || b >= n) throw Error(ErrorCode::invalid_input, "edge endpoint out of range");
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::invalid_input, "edge weights must be positive");
    if (a == b) continue;
    d[a][b] = std::min(d[a][b], w);
    d[b][a] = std::min(d[b][a], w);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(d[i][j])) throw Error(ErrorCode::invalid_input, "graph is disconnected");
  return validate_metric(d, std::move(labels));
}

FiniteMetricSpace star_space(std::size_t arms, int subdivision) {
  if (subdivision < 1) throw Error(ErrorCode::invalid_input, "star subdivision must be >= 1");
  const auto s = static_cast<std::size_t>(subdivision);
  const std::size_t n = 1 + arms * s;
  std::vector<std::string> labels{"c"};
  // point (arm a, step t) sits at index 1 + a*s + (t-1), distance t/s from the centre
  auto arm_of = [s](std::size_t p) { return (p - 1) / s; };
  auto step_of = [s](std::size_t p) { return static_cast<double>((p - 1) % s + 1); };
  for (std::size_t a = 0; a < arms; ++a)
    for (std::size_t t = 1; t <= s; ++t) labels.push_back("a" + std::to_string(a) + "." + std::to_string(t));
  std::vector<std::vector<double>> raw(n, std::vector<double>(n, 0.0));
  const double len = static_cast<double>(s);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (i == 0 || j == 0) raw[i][j] = step_of(i == 0 ? j : i) / len;
      else if (arm_of(i) == arm_of(j)) raw[i][j] = std::abs(step_of(i) - step_of(j)) / len;
      else raw[i][j] = (step_of(i) + step_of(j)) / len;
    }
  }
  return validate_metric(raw, std::move(labels));
}

FiniteMetricSpace path_space(std::size_t length, double step) {
  if (length == 0 || !(step > 0.0)) throw Error(ErrorCode::invalid_input, "path needs length >= 1 and step > 0");
  std::vector<std::vector<double>> raw(length, std::vector<double>(length));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < length; ++i) {
    labels.push_back(std::to_string(i));
    for (std::size_t j = 0; j < length; ++j) raw[i][j] = step * static_cast<double>(i > j ? i - j : j - i);
  }
  return validate_metric(raw, std::move(labels));
}

FiniteMetricSpace grid_space(std::size_t width, std::size_t height, double spacing) {
  if (width == 0 || height == 0 || !(spacing > 0.0)) throw Error(ErrorCode::invalid_input, "grid needs positive size");
  const std::size_t n = width * height;
  std::vector<std::vector<double>> raw(n, std::vector<double>(n));
  std::vector<std::string> labels;
  for (std::size_t p = 0; p < n; ++p) {
    const auto px = static_cast<std::int64_t>(p % width), py = static_cast<std::int64_t>(p / width);
    labels.push_back(coord_label(px, py));
    for (std::size_t q = 0; q < n; ++q) {
      const auto qx = static_cast<std::int64_t>(q % width), qy = static_cast<std::int64_t>(q / width);
      raw[p][q] = spacing * static_cast<double>(std::llabs(px - qx) + std::llabs(py - qy));
    }
  }
  return validate_metric(raw, std::move(labels));
}

FamilySpec family_spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw Error(ErrorCode::invalid_input, "family spec must be an object with a 'kind'");
  const std::string kind = get_or<std::string>(j, "kind", "");
  if (kind == "grid_balls") {
    GridBalls s;
    s.radius = get_or(j, "radius", s.radius);
    s.min_radius = get_or(j, "min_radius", s.min_radius);
    s.count = get_or(j, "count", s.count);
    s.spacing = get_or(j, "spacing", s.spacing);
    return s;
  }
  if (kind == "bounded_degree_trees") {
    BoundedDegreeTrees s;
    s.degree = get_or(j, "degree", s.degree);
    s.depth = get_or(j, "depth", s.depth);
    s.count = get_or(j, "count", s.count);
    return s;
  }
  if (kind == "star_family") {
    StarFamily s;
    s.arms = get_or(j, "n_list", std::vector<std::size_t>{});
    s.subdivision = get_or(j, "subdivision", s.subdivision);
    if (s.arms.empty()) throw Error(ErrorCode::invalid_input, "star_family needs a non-empty n_list");
    return s;
  }
  if (kind == "rips_sample") {
    RipsSample s;
    s.group = get_or(j, "group", s.group);
    s.radius = get_or(j, "radius", s.radius);
    s.count = get_or(j, "count", s.count);
    preset(s.group);
    return s;
  }
  if (kind == "from_file") {
    FromFile s;
    s.path = get_or<std::string>(j, "path", "");
    if (s.path.empty()) throw Error(ErrorCode::invalid_input, "from_file needs a 'path'");
    return s;
  }
  if (kind == "path") {
    PathGraph s;
    s.length = get_or(j, "length", s.length);
    return s;
  }
  if (kind == "grid") {
    GridGraph s;
    s.width = get_or(j, "width", s.width);
    s.height = get_or(j, "height", s.height);
    s.spacing = get_or(j, "spacing", s.spacing);
    return s;
  }
  throw Error(ErrorCode::invalid_input, "unknown family kind '" + kind + "'");
}

Json to_json(const FamilySpec& spec) {
  struct Visitor {
    Json operator()(const GridBalls& s) const {
      return {{"kind", "grid_balls"}, {"radius", s.radius}, {"min_radius", s.min_radius < 0 ? s.radius : s.min_radius},
              {"count", s.count}, {"spacing", s.spacing}};
    }
    Json operator()(const BoundedDegreeTrees& s) const {
      return {{"kind", "bounded_degree_trees"}, {"degree", s.degree}, {"depth", s.depth}, {"count", s.count}};
    }
    Json operator()(const StarFamily& s) const {
      return {{"kind", "star_family"}, {"n_list", s.arms}, {"subdivision", s.subdivision}};
    }
    Json operator()(const RipsSample& s) const {
      return {{"kind", "rips_sample"}, {"group", s.group}, {"radius", s.radius}, {"count", s.count}};
    }
    Json operator()(const FromFile& s) const { return {{"kind", "from_file"}, {"path", s.path}}; }
    Json operator()(const PathGraph& s) const { return {{"kind", "path"}, {"length", s.length}}; }
    Json operator()(const GridGraph& s) const {
      return {{"kind", "grid"}, {"width", s.width}, {"height", s.height}, {"spacing", s.spacing}};
    }
  };
  return std::visit(Visitor{}, spec);
}

std::string family_kind(const FamilySpec& spec) { return to_json(spec).at("kind").get<std::string>(); }

SpaceFamily generate_family(const FamilySpec& spec, std::uint64_t seed) {
  struct Visitor {
    std::uint64_t seed;
    SpaceFamily operator()(const GridBalls& s) const { return make_grid_balls(s, seed); }
    SpaceFamily operator()(const BoundedDegreeTrees& s) const { return make_trees(s, seed); }
    SpaceFamily operator()(const StarFamily& s) const {
      SpaceFamily family;
      family.kind = "star_family";
      for (std::size_t n : s.arms) family.spaces.push_back(star_space(n, s.subdivision));
      return family;
    }
    SpaceFamily operator()(const RipsSample& s) const { return make_rips(s, seed); }
    SpaceFamily operator()(const FromFile& s) const { return read_family_file(s.path); }
    SpaceFamily operator()(const PathGraph& s) const { return {{path_space(s.length)}, "path"}; }
    SpaceFamily operator()(const GridGraph& s) const { return {{grid_space(s.width, s.height, s.spacing)}, "grid"}; }
  };
  return std::visit(Visitor{seed}, spec);
}

}  // namespace wvn
