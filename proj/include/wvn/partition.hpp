#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wvn/metric.hpp"

namespace wvn {

enum class ValueMode { real, complex };

const char* to_string(ValueMode mode) noexcept;
ValueMode value_mode_from_string(const std::string& name);

/// Worst-case grid rounding constant: 1 for real values, sqrt(2) for complex.
double quantization_constant(ValueMode mode) noexcept;

/// Disjoint cover of a space by non-empty cells, each with a centre.
struct Partition {
  std::vector<std::size_t> cell_of;  // point -> cell
  std::vector<std::size_t> centers;  // cell -> point
  double radius_bound = 0.0;

  std::size_t cell_count() const noexcept { return centers.size(); }
  std::vector<std::vector<std::size_t>> cells() const;
};

/// Nearest-member cells of a net; equidistant members go to the lower point index.
Partition voronoi_partition(const FiniteMetricSpace& space, const EpsNet& net);

/// Checks cover/disjointness/non-emptiness and d(p, centre) <= radius_bound.
bool verify_partition(const FiniteMetricSpace& space, const Partition& partition);

struct ScheduleLevel {
  double lipschitz = 0.0;  // L_k
  double eps = 0.0;        // eps_k
  double eps1 = 0.0;       // cell radius eps1_k
  std::uint64_t K = 1;     // grid resolution K_k
};

/// Level parameters (L_k, eps_k, eps1_k, K_k), k = 1..depth.
class Schedule {
 public:
  Schedule() = default;
  /// Throws unless L is strictly increasing, eps strictly decreasing and
  /// c/K + L*eps1 < eps at every level (c from the value mode).
  Schedule(std::vector<ScheduleLevel> levels, ValueMode mode = ValueMode::real);

  std::size_t depth() const noexcept { return levels_.size(); }
  /// 1-based, matching the level numbering used throughout.
  const ScheduleLevel& level(std::size_t k) const { return levels_.at(k - 1); }
  const std::vector<ScheduleLevel>& levels() const noexcept { return levels_; }
  ValueMode mode() const noexcept { return mode_; }

 private:
  std::vector<ScheduleLevel> levels_;
  ValueMode mode_ = ValueMode::real;
};

/// L_k = lipschitz_scale * k, eps_k = eps_scale * 2^-k,
/// eps1_k = eps_k / (2 max(L_k, 1)), K_k from the quantization rule.
Schedule make_schedule(std::size_t depth, double lipschitz_scale = 1.0, double eps_scale = 1.0,
                       ValueMode mode = ValueMode::real);

nlohmann::json to_json(const Schedule& schedule);

/// Nested partitions, one per schedule level, with the flat projection
/// numbering P_1, P_2, ...: positions I_{k-1}+1 .. I_k are the level-k cells.
struct PartitionHierarchy {
  std::vector<Partition> levels;
  std::vector<std::size_t> cut_points;  // I_0 = 0, I_1, ..., I_depth
  Schedule schedule;

  std::size_t depth() const noexcept { return levels.size(); }
  /// Level k (1-based) partition, i.e. the block R_k.
  const Partition& block(std::size_t k) const { return levels.at(k - 1); }
  std::size_t block_size(std::size_t k) const { return cut_points.at(k) - cut_points.at(k - 1); }
  /// Projection number j (1-based) -> (level, cell).
  std::pair<std::size_t, std::size_t> projection(std::size_t j) const;
  std::size_t projection_count() const noexcept { return cut_points.back(); }
  /// Cell of level k (1-based) that contains `cell` of level k+1.
  std::size_t parent(std::size_t k, std::size_t cell) const;
};

PartitionHierarchy build_hierarchy(const FiniteMetricSpace& space, const Schedule& schedule, NetMethod method);

/// All structural invariants: nesting, per-block completeness, radius, cut points.
bool verify_hierarchy(const FiniteMetricSpace& space, const PartitionHierarchy& hierarchy);

nlohmann::json to_json(const PartitionHierarchy& hierarchy);

/// S_k = max over the family of I_k.
std::vector<std::size_t> family_s_bounds(const std::vector<PartitionHierarchy>& hierarchies);
std::vector<std::size_t> family_s_bounds(const SpaceFamily& family, const Schedule& schedule, NetMethod method);

}  // namespace wvn
