#include "wvn/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wvn/function_net.hpp"

namespace wvn {

const char* to_string(ValueMode mode) noexcept { return mode == ValueMode::real ? "real" : "complex"; }

ValueMode value_mode_from_string(const std::string& name) {
  if (name == "real") return ValueMode::real;
  if (name == "complex") return ValueMode::complex;
  throw Error(ErrorCode::invalid_input, "unknown value mode '" + name + "' (expected real or complex)");
}

double quantization_constant(ValueMode mode) noexcept { return mode == ValueMode::real ? 1.0 : std::sqrt(2.0); }

std::vector<std::vector<std::size_t>> Partition::cells() const {
  std::vector<std::vector<std::size_t>> out(cell_count());
  for (std::size_t p = 0; p < cell_of.size(); ++p) out[cell_of[p]].push_back(p);
  return out;
}

Partition voronoi_partition(const FiniteMetricSpace& space, const EpsNet& net) {
  if (!verify_net(space, net)) throw Error(ErrorCode::precondition, "voronoi_partition: net is not valid for the space");
  Partition partition;
  partition.radius_bound = net.radius;
  partition.centers = net.members;
  partition.cell_of = assign_nearest(space, net.members);
  return partition;
}

bool verify_partition(const FiniteMetricSpace& space, const Partition& partition) {
  if (partition.cell_of.size() != space.size() || partition.centers.empty()) return false;
  std::vector<std::size_t> population(partition.cell_count(), 0);
  for (std::size_t p = 0; p < space.size(); ++p) {
    const std::size_t c = partition.cell_of[p];
    if (c >= partition.cell_count()) return false;
    ++population[c];
    if (space(p, partition.centers[c]) > partition.radius_bound) return false;
  }
  for (std::size_t c = 0; c < partition.cell_count(); ++c) {
    if (population[c] == 0) return false;
    if (partition.centers[c] >= space.size() || partition.cell_of[partition.centers[c]] != c) return false;
  }
  return true;
}

Schedule::Schedule(std::vector<ScheduleLevel> levels, ValueMode mode) : levels_(std::move(levels)), mode_(mode) {
  if (levels_.empty()) throw Error(ErrorCode::invalid_input, "schedule needs at least one level");
  const double c = quantization_constant(mode);
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& lv = levels_[i];
    if (!(lv.lipschitz >= 0.0) || !(lv.eps > 0.0) || !(lv.eps1 > 0.0) || lv.K == 0 || !std::isfinite(lv.eps1))
      throw Error(ErrorCode::invalid_input, "schedule level " + std::to_string(i + 1) + " has out-of-range values");
    if (!(c / static_cast<double>(lv.K) + lv.lipschitz * lv.eps1 < lv.eps))
      throw Error(ErrorCode::invalid_input, "schedule level " + std::to_string(i + 1) + " violates c/K + L*eps1 < eps");
    if (i > 0 && !(lv.lipschitz > levels_[i - 1].lipschitz))
      throw Error(ErrorCode::invalid_input, "schedule L_k must be strictly increasing");
    if (i > 0 && !(lv.eps < levels_[i - 1].eps))
      throw Error(ErrorCode::invalid_input, "schedule eps_k must be strictly decreasing");
  }
}

Schedule make_schedule(std::size_t depth, double lipschitz_scale, double eps_scale, ValueMode mode) {
  if (depth == 0) throw Error(ErrorCode::invalid_input, "schedule depth must be >= 1");
  if (!(lipschitz_scale > 0.0) || !(eps_scale > 0.0))
    throw Error(ErrorCode::invalid_input, "schedule scales must be positive");
  std::vector<ScheduleLevel> levels;
  for (std::size_t k = 1; k <= depth; ++k) {
    ScheduleLevel lv;
    lv.lipschitz = lipschitz_scale * static_cast<double>(k);
    lv.eps = eps_scale * std::ldexp(1.0, -static_cast<int>(k));
    lv.eps1 = lv.eps / (2.0 * std::max(lv.lipschitz, 1.0));
    lv.K = quantization_grid(lv.lipschitz, lv.eps, lv.eps1, mode);
    levels.push_back(lv);
  }
  return Schedule(std::move(levels), mode);
}

nlohmann::json to_json(const Schedule& schedule) {
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t k = 1; k <= schedule.depth(); ++k) {
    const auto& lv = schedule.level(k);
    levels.push_back({{"k", k}, {"L", lv.lipschitz}, {"eps", lv.eps}, {"eps1", lv.eps1}, {"K", lv.K}});
  }
  return {{"mode", to_string(schedule.mode())}, {"levels", levels}};
}

std::pair<std::size_t, std::size_t> PartitionHierarchy::projection(std::size_t j) const {
  if (j == 0 || j > projection_count()) throw Error(ErrorCode::invalid_input, "projection index out of range");
  for (std::size_t k = 1; k <= depth(); ++k)
    if (j <= cut_points[k]) return {k, j - cut_points[k - 1] - 1};
  throw Error(ErrorCode::internal, "projection index not located");
}

std::size_t PartitionHierarchy::parent(std::size_t k, std::size_t cell) const {
  const auto& child = block(k + 1);
  return block(k).cell_of.at(child.centers.at(cell));
}

PartitionHierarchy build_hierarchy(const FiniteMetricSpace& space, const Schedule& schedule, NetMethod method) {
  PartitionHierarchy h;
  h.schedule = schedule;
  h.cut_points.push_back(0);

  h.levels.push_back(voronoi_partition(space, compute_net(space, schedule.level(1).eps1, method)));
  for (std::size_t k = 2; k <= schedule.depth(); ++k) {
    const Partition& coarse = h.levels.back();
    const double radius = schedule.level(k).eps1;
    Partition fine;
    fine.radius_bound = radius;
    fine.cell_of.assign(space.size(), 0);
    for (const auto& members : coarse.cells()) {
      const FiniteMetricSpace cell_space = space.subspace(members);
      const EpsNet net = compute_net(cell_space, radius, method);
      const std::size_t offset = fine.centers.size();
      for (std::size_t m : net.members) fine.centers.push_back(members[m]);
      for (std::size_t local = 0; local < members.size(); ++local)
        fine.cell_of[members[local]] = offset + net.assignment[local];
    }
    h.levels.push_back(std::move(fine));
  }
  for (const auto& level : h.levels) h.cut_points.push_back(h.cut_points.back() + level.cell_count());
  return h;
}

bool verify_hierarchy(const FiniteMetricSpace& space, const PartitionHierarchy& h) {
  if (h.levels.size() != h.schedule.depth() || h.cut_points.size() != h.levels.size() + 1 || h.cut_points[0] != 0)
    return false;
  for (std::size_t k = 1; k <= h.depth(); ++k) {
    const Partition& level = h.block(k);
    if (!verify_partition(space, level)) return false;
    if (level.radius_bound > h.schedule.level(k).eps1) return false;
    if (h.block_size(k) != level.cell_count()) return false;
    if (k < h.depth()) {
      const Partition& fine = h.block(k + 1);
      // each fine cell sits inside one coarse cell
      std::vector<std::size_t> owner(fine.cell_count(), std::numeric_limits<std::size_t>::max());
      for (std::size_t p = 0; p < space.size(); ++p) {
        auto& o = owner[fine.cell_of[p]];
        if (o == std::numeric_limits<std::size_t>::max()) o = level.cell_of[p];
        else if (o != level.cell_of[p]) return false;
      }
    }
  }
  return true;
}

nlohmann::json to_json(const PartitionHierarchy& h) {
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t k = 1; k <= h.depth(); ++k) {
    const Partition& p = h.block(k);
    levels.push_back({{"k", k}, {"radius_bound", p.radius_bound}, {"centers", p.centers}, {"cell_of", p.cell_of},
                      {"cells", p.cells()}});
  }
  return {{"schedule", to_json(h.schedule)}, {"cut_points", h.cut_points}, {"levels", levels}};
}

std::vector<std::size_t> family_s_bounds(const std::vector<PartitionHierarchy>& hierarchies) {
  if (hierarchies.empty()) throw Error(ErrorCode::invalid_input, "family_s_bounds needs at least one hierarchy");
  const std::size_t depth = hierarchies.front().depth();
  std::vector<std::size_t> s(depth, 0);
  for (const auto& h : hierarchies) {
    if (h.depth() != depth) throw Error(ErrorCode::invalid_input, "hierarchies have different depths");
    for (std::size_t k = 1; k <= depth; ++k) s[k - 1] = std::max(s[k - 1], h.cut_points[k]);
  }
  return s;
}

std::vector<std::size_t> family_s_bounds(const SpaceFamily& family, const Schedule& schedule, NetMethod method) {
  std::vector<PartitionHierarchy> hierarchies;
  for (const auto& space : family.spaces) hierarchies.push_back(build_hierarchy(space, schedule, method));
  return family_s_bounds(hierarchies);
}

}  // namespace wvn
