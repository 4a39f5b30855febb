#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "wvn/operator.hpp"
#include "wvn/partition.hpp"
#include "wvn/rng.hpp"

namespace wvn {

/// Column-drop threshold for (re-)orthogonalization.
inline constexpr double kDependenceThreshold = 1e-10;

/// Identifies a block of a diagonalizing basis.
///
/// Stage 0 is E_1 split by the cells of R_1. Stage s (1 <= s < depth) is
/// E_{s+1} minus E_s split by the cells of R_s. Stage `depth` is the rest of
/// the space (H minus E_depth) split by R_depth. `cell` indexes the cells of
/// the partition level `partition_level()`.
struct BlockKey {
  std::size_t stage = 0;
  std::size_t cell = 0;

  std::size_t partition_level() const noexcept { return stage == 0 ? 1 : stage; }
  auto operator<=>(const BlockKey&) const = default;
};

struct BasisBlock {
  BlockKey key;
  std::size_t first = 0;  // first column
  std::size_t width = 0;
};

/// An orthonormal basis of H adapted to the chain E_1 ⊆ E_2 ⊆ ... and to the
/// partition cells, so that every T in A_k is diagonal on stages >= k.
struct DiagonalizingBasis {
  Matrix columns;                   // dim x dim, unitary
  std::vector<BasisBlock> blocks;   // in column order, every key present (possibly width 0)
  std::vector<std::size_t> e_dims;  // e_dims[k-1] = dim E_k, k = 1..depth
  std::size_t depth = 0;

  std::size_t dim_E(std::size_t k) const { return e_dims.at(k - 1); }
  const BasisBlock& block(BlockKey key) const;
  /// First column of stage s (0..depth); dim E_s for s >= 1.
  std::size_t stage_begin(std::size_t stage) const;
};

/// e_j = normalized sum over points of the j-th multiplicity slot (for j up
/// to the largest multiplicity), completed to an orthonormal basis.
Matrix spread_seed_basis(const RepresentationModel& rep);

/// Diagonalizing basis built from a seed orthonormal basis; only the first
/// `depth` seed vectors enter the E_k. Throws if the seed is not orthonormal.
DiagonalizingBasis rho_basis(const RepresentationModel& rep, const PartitionHierarchy& hierarchy, const Matrix& seed);

/// Basis for a uniform-multiplicity representation whose E_k has the largest
/// possible dimension k * |R_k|. Requires multiplicity >= depth.
DiagonalizingBasis pi_basis_maximal(const RepresentationModel& rep, const PartitionHierarchy& hierarchy);

struct BlockMapEntry {
  BlockKey key;
  std::size_t rho_first = 0;
  std::size_t pi_first = 0;
  std::size_t width = 0;  // rho block width
};

struct CoveringIsometry {
  Matrix V;  // dim H_pi x dim H_rho
  std::vector<BlockMapEntry> block_map;
  std::vector<std::size_t> rho_e_dims;  // dim E_k^rho, k = 1..depth
};

/// Sends the i-th column of each rho block to the i-th column of the
/// matching pi block. Throws (naming the block) when a pi block is narrower.
CoveringIsometry build_isometry(const DiagonalizingBasis& basis_rho, const DiagonalizingBasis& basis_pi);

struct RankLookup {
  std::size_t k = 0;
  std::size_t bound = 0;        // 2 k S_k
  std::size_t tight_bound = 0;  // k S_k
  double tolerance = 0.0;       // 2 eps_k
};

struct RankSchedule {
  Schedule schedule;
  std::vector<std::size_t> S;  // S[k-1] = S_k

  std::size_t s_bound(std::size_t k) const { return S.at(k - 1); }
};

/// Minimal k with L <= L_k and 2 eps_k <= eps. Throws when no level qualifies.
RankLookup m_lookup(const RankSchedule& ranks, double lipschitz, double eps);

/// Uniformly distributed on the closed unit disc.
Complex random_unit_disc(Rng& rng);

struct ExactDefectTrial {
  std::size_t rank = 0;
  double norm = 0.0;
  bool pass = true;
};

struct ExactDefectReport {
  std::size_t k = 0;
  std::size_t dim_E = 0;
  std::size_t bound = 0;  // k S_k
  std::vector<ExactDefectTrial> trials;
  std::size_t violations = 0;
};

/// V* T^pi V - T^rho for a T in A_k, as a dim H_rho square matrix.
Matrix algebra_defect(const CoveringIsometry& iso, const RepresentationModel& rep_pi, const RepresentationModel& rep_rho,
                      const PartitionHierarchy& hierarchy, std::size_t k, const std::vector<Complex>& coefficients);

/// Random T = sum c_P P over R_k with |c_P| <= 1; the defect rank (cutoff
/// 1e-8) must not exceed dim E_k^rho, which must not exceed k S_k.
ExactDefectReport exact_defect_check(const CoveringIsometry& iso, const RepresentationModel& rep_pi,
                                     const RepresentationModel& rep_rho, const PartitionHierarchy& hierarchy,
                                     std::size_t k, std::size_t trials, std::uint64_t seed, std::size_t s_bound);

}  // namespace wvn
