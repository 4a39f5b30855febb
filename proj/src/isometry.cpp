#include "wvn/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wvn {

namespace {

using Index = Eigen::Index;

/// Orthonormal columns accumulated block by block. Every block lives inside
/// the slots of one cell, and the span of the columns accepted before a block
/// is invariant under that cell's projection, so orthogonalization can run on
/// the cell's rows alone.
class BlockOrthonormalizer {
 public:
  explicit BlockOrthonormalizer(Index dim) : columns_(Matrix::Zero(dim, dim)) {}

  Index count() const noexcept { return count_; }

  void begin_block(std::vector<Index> rows) {
    rows_ = std::move(rows);
    prior_.resize(static_cast<Index>(rows_.size()), count_);
    for (Index r = 0; r < static_cast<Index>(rows_.size()); ++r) prior_.row(r) = columns_.row(rows_[r]).head(count_);
    block_.resize(static_cast<Index>(rows_.size()), 0);
  }

  /// Candidate given on the block's rows. Returns true if it was accepted.
  bool offer(Vector v) {
    if (count_ == columns_.cols()) return false;
    for (int pass = 0; pass < 2; ++pass) {
      if (prior_.cols() > 0) v -= prior_ * (prior_.adjoint() * v);
      if (block_.cols() > 0) v -= block_ * (block_.adjoint() * v);
    }
    const double norm = v.norm();
    if (!(norm > kDependenceThreshold)) return false;
    v /= norm;
    block_.conservativeResize(Eigen::NoChange, block_.cols() + 1);
    block_.col(block_.cols() - 1) = v;
    return true;
  }

  /// Writes the block's columns into the global matrix; returns its width.
  std::size_t end_block() {
    for (Index c = 0; c < block_.cols(); ++c) {
      for (Index r = 0; r < static_cast<Index>(rows_.size()); ++r) columns_(rows_[r], count_) = block_(r, c);
      ++count_;
    }
    return static_cast<std::size_t>(block_.cols());
  }

  Matrix take() && { return std::move(columns_); }

 private:
  Matrix columns_;
  Index count_ = 0;
  std::vector<Index> rows_;
  Matrix prior_;
  Matrix block_;
};

std::vector<Index> slot_rows(const RepresentationModel& rep, const std::vector<std::size_t>& points) {
  std::vector<Index> rows;
  for (std::size_t x : points)
    for (std::size_t j = 0; j < rep.multiplicity(x); ++j) rows.push_back(static_cast<Index>(rep.slot(x, j)));
  std::sort(rows.begin(), rows.end());
  return rows;
}

// Restriction of `v` to `rows`, zeroed outside the given points.
Vector restrict_to(const Vector& v, const std::vector<Index>& rows, const RepresentationModel& rep,
                   const std::vector<std::size_t>& cell_of, std::size_t cell) {
  Vector out(static_cast<Index>(rows.size()));
  for (Index r = 0; r < static_cast<Index>(rows.size()); ++r) {
    const std::size_t x = rep.point_of(static_cast<std::size_t>(rows[r]));
    out(r) = cell_of[x] == cell ? v(rows[r]) : Complex(0.0);
  }
  return out;
}

DiagonalizingBasis diagonalize(const RepresentationModel& rep, const PartitionHierarchy& h, const Matrix& seeds) {
  if (rep.points() != h.block(1).cell_of.size())
    throw Error(ErrorCode::invalid_input, "representation and hierarchy are on different spaces");
  const std::size_t depth = h.depth();
  const std::size_t usable = std::min<std::size_t>(depth, static_cast<std::size_t>(seeds.cols()));
  BlockOrthonormalizer ortho(static_cast<Index>(rep.dim()));
  DiagonalizingBasis basis;
  basis.depth = depth;

  auto run_block = [&](BlockKey key, const std::vector<std::size_t>& members, auto&& feed) {
    BasisBlock block{key, static_cast<std::size_t>(ortho.count()), 0};
    const auto rows = slot_rows(rep, members);
    ortho.begin_block(rows);
    feed(rows);
    block.width = ortho.end_block();
    basis.blocks.push_back(block);
  };

  // Stage 0: P e_1 for P in R_1.
  {
    const Partition& r1 = h.block(1);
    const auto cells = r1.cells();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      run_block({0, c}, cells[c], [&](const std::vector<Index>& rows) {
        if (usable >= 1) ortho.offer(restrict_to(seeds.col(0), rows, rep, r1.cell_of, c));
      });
    }
    basis.e_dims.push_back(static_cast<std::size_t>(ortho.count()));
  }

  // Stage s: generators Q e_j (Q in R_{s+1}, j <= s+1) grouped by the parent P in R_s.
  for (std::size_t s = 1; s < depth; ++s) {
    const Partition& coarse = h.block(s);
    const Partition& fine = h.block(s + 1);
    const auto cells = coarse.cells();
    std::vector<std::vector<std::size_t>> children(coarse.cell_count());
    for (std::size_t q = 0; q < fine.cell_count(); ++q) children[h.parent(s, q)].push_back(q);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      run_block({s, c}, cells[c], [&](const std::vector<Index>& rows) {
        for (std::size_t j = 0; j < std::min(s + 1, usable); ++j)
          for (std::size_t q : children[c]) ortho.offer(restrict_to(seeds.col(static_cast<Index>(j)), rows, rep, fine.cell_of, q));
      });
    }
    basis.e_dims.push_back(static_cast<std::size_t>(ortho.count()));
  }

  // Stage depth: remaining slot vectors of each deepest cell, ordered by
  // (copy index, point) so low copy indices are used first.
  {
    const Partition& deepest = h.block(depth);
    const auto cells = deepest.cells();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      run_block({depth, c}, cells[c], [&](const std::vector<Index>& rows) {
        std::size_t top = 0;
        for (std::size_t x : cells[c]) top = std::max(top, rep.multiplicity(x));
        for (std::size_t j = 0; j < top; ++j) {
          for (std::size_t x : cells[c]) {
            if (j >= rep.multiplicity(x)) continue;
            const auto target = static_cast<Index>(rep.slot(x, j));
            Vector v = Vector::Zero(static_cast<Index>(rows.size()));
            v(std::lower_bound(rows.begin(), rows.end(), target) - rows.begin()) = 1.0;
            ortho.offer(std::move(v));
          }
        }
      });
    }
  }

  if (static_cast<std::size_t>(ortho.count()) != rep.dim())
    throw Error(ErrorCode::internal, "diagonalizing basis does not span the whole space");
  basis.columns = std::move(ortho).take();
  return basis;
}

}  // namespace

const BasisBlock& DiagonalizingBasis::block(BlockKey key) const {
  auto it = std::lower_bound(blocks.begin(), blocks.end(), key,
                             [](const BasisBlock& b, const BlockKey& k) { return b.key < k; });
  if (it == blocks.end() || it->key != key) throw Error(ErrorCode::invalid_input, "no such basis block");
  return *it;
}

std::size_t DiagonalizingBasis::stage_begin(std::size_t stage) const {
  for (const auto& b : blocks)
    if (b.key.stage >= stage) return b.first;
  return static_cast<std::size_t>(columns.cols());
}

Matrix spread_seed_basis(const RepresentationModel& rep) {
  const auto dim = static_cast<Index>(rep.dim());
  Matrix out = Matrix::Zero(dim, dim);
  Index count = 0;
  const std::size_t top = rep.max_multiplicity();
  for (std::size_t j = 0; j < top; ++j) {
    std::size_t n = 0;
    for (std::size_t x = 0; x < rep.points(); ++x) n += rep.multiplicity(x) > j;
    const double w = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t x = 0; x < rep.points(); ++x)
      if (rep.multiplicity(x) > j) out(static_cast<Index>(rep.slot(x, j)), count) = w;
    ++count;
  }
  // Completion by the slot vectors, in (copy, point) order.
  for (std::size_t j = 0; j < top; ++j) {
    for (std::size_t x = 0; x < rep.points() && count < dim; ++x) {
      if (rep.multiplicity(x) <= j) continue;
      Vector v = Vector::Zero(dim);
      v(static_cast<Index>(rep.slot(x, j))) = 1.0;
      for (int pass = 0; pass < 2; ++pass) v -= out.leftCols(count) * (out.leftCols(count).adjoint() * v);
      const double norm = v.norm();
      if (norm > kDependenceThreshold) out.col(count++) = v / norm;
    }
  }
  if (count != dim) throw Error(ErrorCode::internal, "spread seed completion failed");
  return out;
}

DiagonalizingBasis rho_basis(const RepresentationModel& rep, const PartitionHierarchy& hierarchy, const Matrix& seed) {
  const auto dim = static_cast<Index>(rep.dim());
  if (seed.rows() != dim || seed.cols() != dim) throw Error(ErrorCode::invalid_input, "seed basis has the wrong shape");
  if ((seed.adjoint() * seed - Matrix::Identity(dim, dim)).norm() > kDependenceThreshold)
    throw Error(ErrorCode::invalid_input, "seed basis is not orthonormal");
  return diagonalize(rep, hierarchy, seed);
}

DiagonalizingBasis pi_basis_maximal(const RepresentationModel& rep, const PartitionHierarchy& hierarchy) {
  const std::size_t depth = hierarchy.depth();
  const std::size_t n = rep.multiplicity(0);
  for (std::size_t x = 0; x < rep.points(); ++x)
    if (rep.multiplicity(x) != n) throw Error(ErrorCode::precondition, "pi_basis_maximal needs uniform multiplicity");
  if (n < depth)
    throw Error(ErrorCode::precondition, "truncation multiplicity " + std::to_string(n) + " is below the hierarchy depth " +
                                             std::to_string(depth));
  const auto dim = static_cast<Index>(rep.dim());
  Matrix seeds = Matrix::Zero(dim, static_cast<Index>(depth));
  const double w = 1.0 / std::sqrt(static_cast<double>(rep.points()));
  for (std::size_t j = 0; j < depth; ++j)
    for (std::size_t x = 0; x < rep.points(); ++x) seeds(static_cast<Index>(rep.slot(x, j)), static_cast<Index>(j)) = w;

  DiagonalizingBasis basis = diagonalize(rep, hierarchy, seeds);
  for (std::size_t k = 1; k <= depth; ++k)
    if (basis.dim_E(k) != k * hierarchy.block_size(k))
      throw Error(ErrorCode::internal, "pi basis failed to reach maximal dimension at level " + std::to_string(k));
  return basis;
}

CoveringIsometry build_isometry(const DiagonalizingBasis& basis_rho, const DiagonalizingBasis& basis_pi) {
  if (basis_rho.depth != basis_pi.depth) throw Error(ErrorCode::invalid_input, "bases come from different hierarchies");
  CoveringIsometry iso;
  iso.rho_e_dims = basis_rho.e_dims;
  const Index dim_rho = basis_rho.columns.cols();
  Matrix image = Matrix::Zero(basis_pi.columns.rows(), dim_rho);
  for (const auto& rb : basis_rho.blocks) {
    const BasisBlock& pb = basis_pi.block(rb.key);
    if (pb.width < rb.width) {
      throw Error(ErrorCode::precondition, "block width deficit at stage " + std::to_string(rb.key.stage) + ", cell " +
                                               std::to_string(rb.key.cell) + ": rho needs " + std::to_string(rb.width) +
                                               ", pi has " + std::to_string(pb.width));
    }
    if (rb.width > 0) {
      image.middleCols(static_cast<Index>(rb.first), static_cast<Index>(rb.width)) =
          basis_pi.columns.middleCols(static_cast<Index>(pb.first), static_cast<Index>(rb.width));
    }
    iso.block_map.push_back({rb.key, rb.first, pb.first, rb.width});
  }
  iso.V = image * basis_rho.columns.adjoint();
  return iso;
}

RankLookup m_lookup(const RankSchedule& ranks, double lipschitz, double eps) {
  if (!(lipschitz >= 0.0) || !(eps > 0.0)) throw Error(ErrorCode::invalid_input, "m_lookup needs L >= 0 and eps > 0");
  if (ranks.S.size() != ranks.schedule.depth()) throw Error(ErrorCode::invalid_input, "S bounds do not match the schedule");
  for (std::size_t k = 1; k <= ranks.schedule.depth(); ++k) {
    const auto& lv = ranks.schedule.level(k);
    if (lipschitz <= lv.lipschitz && 2.0 * lv.eps <= eps) {
      return {k, 2 * k * ranks.s_bound(k), k * ranks.s_bound(k), 2.0 * lv.eps};
    }
  }
  throw Error(ErrorCode::budget_exceeded, "schedule exhausted: no level has L_k >= L and 2 eps_k <= eps");
}

Complex random_unit_disc(Rng& rng) {
  const double r = std::sqrt(rng.uniform());
  const double theta = 2.0 * std::numbers::pi * rng.uniform();
  return std::polar(r, theta);
}

Matrix algebra_defect(const CoveringIsometry& iso, const RepresentationModel& rep_pi, const RepresentationModel& rep_rho,
                      const PartitionHierarchy& hierarchy, std::size_t k, const std::vector<Complex>& coefficients) {
  const Partition& level = hierarchy.block(k);
  if (coefficients.size() != level.cell_count()) throw Error(ErrorCode::invalid_input, "one coefficient per cell of R_k");
  if (static_cast<std::size_t>(iso.V.rows()) != rep_pi.dim() || static_cast<std::size_t>(iso.V.cols()) != rep_rho.dim())
    throw Error(ErrorCode::invalid_input, "isometry and representations do not conform");
  auto diag = [&](const RepresentationModel& rep) {
    Vector d(static_cast<Eigen::Index>(rep.dim()));
    for (std::size_t c = 0; c < rep.dim(); ++c) d(static_cast<Eigen::Index>(c)) = coefficients[level.cell_of[rep.point_of(c)]];
    return d;
  };
  Matrix defect = iso.V.adjoint() * (diag(rep_pi).asDiagonal() * iso.V);
  defect -= Matrix(diag(rep_rho).asDiagonal());
  return defect;
}

ExactDefectReport exact_defect_check(const CoveringIsometry& iso, const RepresentationModel& rep_pi,
                                     const RepresentationModel& rep_rho, const PartitionHierarchy& hierarchy,
                                     std::size_t k, std::size_t trials, std::uint64_t seed, std::size_t s_bound) {
  if (k == 0 || k > hierarchy.depth()) throw Error(ErrorCode::invalid_input, "exact_defect_check: level out of range");
  ExactDefectReport report;
  report.k = k;
  report.dim_E = iso.rho_e_dims.at(k - 1);
  report.bound = k * s_bound;
  Rng rng(derive_seed(seed, {0x65786163, k}));
  const std::size_t cells = hierarchy.block(k).cell_count();
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<Complex> c(cells);
    for (auto& v : c) v = random_unit_disc(rng);
    const Matrix defect = algebra_defect(iso, rep_pi, rep_rho, hierarchy, k, c);
    const EpsRankResult r = eps_rank(defect, kExactRankCutoff);
    ExactDefectTrial trial;
    trial.rank = r.rank;
    trial.norm = r.singular_values.empty() ? 0.0 : r.singular_values.front();
    trial.pass = r.rank <= report.dim_E && report.dim_E <= report.bound;
    report.violations += !trial.pass;
    report.trials.push_back(trial);
  }
  return report;
}

}  // namespace wvn
