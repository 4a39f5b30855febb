#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "wvn/certify.hpp"

namespace wvn {

/// A finite space cut into bounded-diameter cells, each kept as a subspace.
struct SpaceDecomposition {
  FiniteMetricSpace ambient;
  std::vector<std::size_t> cell_of;               // ambient point -> cell
  std::vector<std::vector<std::size_t>> cells;    // ascending ambient indices
  double R0 = 0.0;                                // max cell diameter
  SpaceFamily cell_family;                        // induced metrics, same order as `cells`
};

/// Greedy net at radius target_diam/2 plus nearest-member cells.
SpaceDecomposition decompose(const FiniteMetricSpace& ambient, double target_diam);

struct CoarseProfile {
  std::vector<std::size_t> net;
  double covering_radius = 0.0;
  std::vector<std::pair<double, std::size_t>> ball_counts;  // R -> max_y #(Y ∩ B(y, R))
};

CoarseProfile coarse_profile(const FiniteMetricSpace& ambient, double net_radius, std::span<const double> radii);

/// Per-cell isometries assembled into one block-diagonal V on the ambient
/// representations. Cells keep the ambient slots of their points.
struct BlockIsometry {
  std::vector<SpaceInstance> cells;
  RepresentationModel rho;
  RepresentationModel pi;
  Matrix V;
  RankSchedule ranks;  // S_k over the cell family
  double isometry_defect = 0.0;
};

BlockIsometry block_isometry(const SpaceDecomposition& decomp, const Schedule& schedule, NetMethod method,
                             const std::vector<std::size_t>& rho_multiplicity, std::size_t truncation);

/// Largest number of cells met by a closed R-ball around an ambient point.
std::size_t cells_met(const SpaceDecomposition& decomp, double R);

struct CoveringBound {
  std::size_t c_R = 0;
  RankLookup lookup;
  std::size_t M = 0;  // c(R) * 2 k S_k
};

CoveringBound covering_bound(const SpaceDecomposition& decomp, const RankSchedule& ranks, double eps, double R, double L);

struct UniformGridPoint {
  double eps = 0.0;
  double R = 0.0;
  double L = 0.0;
};

struct UniformRecord {
  std::size_t grid = 0;
  std::size_t sample = 0;
  std::size_t center = 0;          // bump centre
  double measured_lipschitz = 0.0;
  double support_diameter = 0.0;
  std::size_t k = 0;               // lookup at the measured constant
  double tolerance = 0.0;
  std::size_t cells_touched = 0;
  std::size_t rank = 0;
  std::size_t bound = 0;           // M of the grid point
  bool pass = true;
};

struct UniformGridResult {
  UniformGridPoint point;
  std::size_t c_R = 0;
  std::size_t M = 0;
  std::size_t samples = 0;
  std::size_t max_rank = 0;
  bool pass = true;
};

struct LocalityCheck {
  std::size_t checked = 0;
  double max_off_support = 0.0;  // largest defect entry outside the touched cells' slots
  std::size_t rank_mismatches = 0;  // full-matrix rank vs sum of cell ranks
  bool pass = true;
};

struct UniformCertificate {
  std::vector<UniformGridResult> grid;
  std::vector<UniformRecord> records;
  LocalityCheck locality;
  bool admissibility_ok = true;  // cell-family profile at eps1_k bounded by S_k
  double isometry_defect = 0.0;

  std::size_t violations() const;
  bool all_pass() const;
};

struct UniformOptions {
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  ValueMode mode = ValueMode::real;
  std::size_t locality_samples = 2;  // per grid point, checked on the full matrix
};

/// f = g * b with g sampled at Lipschitz L/2 and b a Lipschitz bump on a
/// random ball of radius R/2, so supp f has diameter <= R and Lip(f) <= L.
/// Ranks use the lookup at the measured constant and are compared with M.
UniformCertificate certify_uniform(const SpaceDecomposition& decomp, const BlockIsometry& iso,
                                   std::span<const UniformGridPoint> grid, const UniformOptions& options);

nlohmann::json to_json(const UniformCertificate& cert);

}  // namespace wvn
