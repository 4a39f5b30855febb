#include "wvn/uniform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wvn {

SpaceDecomposition decompose(const FiniteMetricSpace& ambient, double target_diam) {
  if (!(target_diam > 0.0)) throw Error(ErrorCode::invalid_input, "decompose needs target_diam > 0");
  SpaceDecomposition d;
  d.ambient = ambient;
  const EpsNet net = greedy_net(ambient, target_diam / 2.0);
  d.cell_of = assign_nearest(ambient, net.members);
  d.cells.resize(net.size());
  for (std::size_t p = 0; p < ambient.size(); ++p) d.cells[d.cell_of[p]].push_back(p);
  d.cell_family.kind = "cells";
  for (const auto& cell : d.cells) {
    d.cell_family.spaces.push_back(ambient.subspace(cell));
    d.R0 = std::max(d.R0, d.cell_family.spaces.back().diameter());
  }
  return d;
}

CoarseProfile coarse_profile(const FiniteMetricSpace& ambient, double net_radius, std::span<const double> radii) {
  if (!(net_radius > 0.0)) throw Error(ErrorCode::invalid_input, "coarse_profile needs net_radius > 0");
  CoarseProfile prof;
  prof.net = greedy_net(ambient, net_radius).members;
  for (std::size_t p = 0; p < ambient.size(); ++p) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t y : prof.net) nearest = std::min(nearest, ambient(p, y));
    prof.covering_radius = std::max(prof.covering_radius, nearest);
  }
  for (double R : radii) {
    std::size_t best = 0;
    for (std::size_t y : prof.net) {
      const auto n = std::count_if(prof.net.begin(), prof.net.end(), [&](std::size_t z) { return ambient(y, z) <= R; });
      best = std::max(best, static_cast<std::size_t>(n));
    }
    prof.ball_counts.emplace_back(R, best);
  }
  return prof;
}

BlockIsometry block_isometry(const SpaceDecomposition& decomp, const Schedule& schedule, NetMethod method,
                             const std::vector<std::size_t>& rho_multiplicity, std::size_t truncation) {
  if (rho_multiplicity.size() != decomp.ambient.size())
    throw Error(ErrorCode::invalid_input, "one rho multiplicity per ambient point is required");
  BlockIsometry out;
  out.rho = RepresentationModel(rho_multiplicity);
  out.pi = RepresentationModel::uniform(decomp.ambient.size(), truncation);

  std::vector<PartitionHierarchy> hierarchies;
  for (const auto& space : decomp.cell_family.spaces) hierarchies.push_back(build_hierarchy(space, schedule, method));
  out.ranks = {schedule, family_s_bounds(hierarchies)};

  out.V = Matrix::Zero(static_cast<Eigen::Index>(out.pi.dim()), static_cast<Eigen::Index>(out.rho.dim()));
  for (std::size_t i = 0; i < decomp.cells.size(); ++i) {
    const auto& cell = decomp.cells[i];
    std::vector<std::size_t> local_m;
    for (std::size_t x : cell) local_m.push_back(rho_multiplicity[x]);
    SpaceInstance inst = build_instance(decomp.cell_family.spaces[i], std::move(hierarchies[i]), std::move(local_m), truncation);
    for (std::size_t lx = 0; lx < cell.size(); ++lx) {
      for (std::size_t ly = 0; ly < cell.size(); ++ly) {
        for (std::size_t a = 0; a < inst.pi.multiplicity(lx); ++a) {
          for (std::size_t b = 0; b < inst.rho.multiplicity(ly); ++b) {
            out.V(static_cast<Eigen::Index>(out.pi.slot(cell[lx], a)), static_cast<Eigen::Index>(out.rho.slot(cell[ly], b))) =
                inst.isometry.V(static_cast<Eigen::Index>(inst.pi.slot(lx, a)), static_cast<Eigen::Index>(inst.rho.slot(ly, b)));
          }
        }
      }
    }
    out.cells.push_back(std::move(inst));
  }
  out.isometry_defect = isometry_defect(out.V);
  return out;
}

std::size_t cells_met(const SpaceDecomposition& decomp, double R) {
  const auto& X = decomp.ambient;
  std::size_t best = 0;
  std::vector<char> seen(decomp.cells.size());
  for (std::size_t x = 0; x < X.size(); ++x) {
    std::fill(seen.begin(), seen.end(), 0);
    std::size_t n = 0;
    for (std::size_t y = 0; y < X.size(); ++y) {
      if (X(x, y) <= R && !seen[decomp.cell_of[y]]) {
        seen[decomp.cell_of[y]] = 1;
        ++n;
      }
    }
    best = std::max(best, n);
  }
  return best;
}

CoveringBound covering_bound(const SpaceDecomposition& decomp, const RankSchedule& ranks, double eps, double R, double L) {
  if (!(R >= 0.0)) throw Error(ErrorCode::invalid_input, "covering_bound needs R >= 0");
  CoveringBound b;
  b.lookup = m_lookup(ranks, L, eps);
  b.c_R = cells_met(decomp, R);
  b.M = b.c_R * b.lookup.bound;
  return b;
}

std::size_t UniformCertificate::violations() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.pass; }));
}

bool UniformCertificate::all_pass() const {
  return violations() == 0 && locality.pass && admissibility_ok && isometry_defect <= kIsometryTolerance;
}

namespace {

constexpr double kLocalityTolerance = 1e-10;

// Full ambient defect, compared against the per-cell computation.
void check_locality(const SpaceDecomposition& decomp, const BlockIsometry& iso, const std::vector<Complex>& f,
                    const std::vector<char>& touched, double tolerance, std::size_t cell_rank, LocalityCheck& out) {
  Vector pi_diag(static_cast<Eigen::Index>(iso.pi.dim()));
  for (std::size_t c = 0; c < iso.pi.dim(); ++c) pi_diag(static_cast<Eigen::Index>(c)) = f[iso.pi.point_of(c)];
  Matrix d = iso.V.adjoint() * (pi_diag.asDiagonal() * iso.V);
  for (std::size_t c = 0; c < iso.rho.dim(); ++c)
    d(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) -= f[iso.rho.point_of(c)];
  for (Eigen::Index r = 0; r < d.rows(); ++r) {
    const bool row_in = touched[decomp.cell_of[iso.rho.point_of(static_cast<std::size_t>(r))]];
    for (Eigen::Index c = 0; c < d.cols(); ++c) {
      const bool col_in = touched[decomp.cell_of[iso.rho.point_of(static_cast<std::size_t>(c))]];
      if (!(row_in && col_in)) out.max_off_support = std::max(out.max_off_support, std::abs(d(r, c)));
    }
  }
  out.rank_mismatches += eps_rank(d, tolerance).rank != cell_rank;
  ++out.checked;
}

}  // namespace

UniformCertificate certify_uniform(const SpaceDecomposition& decomp, const BlockIsometry& iso,
                                   std::span<const UniformGridPoint> grid, const UniformOptions& options) {
  const FiniteMetricSpace& X = decomp.ambient;
  const Schedule& schedule = iso.ranks.schedule;
  UniformCertificate cert;
  cert.isometry_defect = iso.isometry_defect;

  std::vector<double> eps1;
  for (const auto& lv : schedule.levels()) eps1.push_back(lv.eps1);
  const auto profile = admissibility_profile(decomp.cell_family, eps1, NetMethod::greedy);
  for (std::size_t k = 1; k <= schedule.depth(); ++k)
    cert.admissibility_ok = cert.admissibility_ok && profile.entries[k - 1].bound <= iso.ranks.s_bound(k);

  for (std::size_t g = 0; g < grid.size(); ++g) {
    const UniformGridPoint& gp = grid[g];
    if (!(gp.R >= 0.0) || !(gp.L > 0.0)) throw Error(ErrorCode::invalid_input, "uniform grid needs R >= 0 and L > 0");
    const CoveringBound cb = covering_bound(decomp, iso.ranks, gp.eps, gp.R, gp.L);
    UniformGridResult res{gp, cb.c_R, cb.M, 0, 0, true};

    Rng rng(derive_seed(options.seed, {0x756e6966, g}));
    const auto g_samples = sample_lipschitz(X, gp.L / 2.0, options.samples, derive_seed(options.seed, {0x756e6966, g, 1}),
                                            options.mode);
    for (std::size_t i = 0; i < g_samples.size(); ++i) {
      UniformRecord rec;
      rec.grid = g;
      rec.sample = i;
      rec.center = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(X.size()) - 1));
      std::vector<Complex> f(X.size());
      std::vector<std::size_t> support;
      for (std::size_t x = 0; x < X.size(); ++x) {
        const double bump = std::clamp(gp.L / 2.0 * (gp.R / 2.0 - X(x, rec.center)), 0.0, 1.0);
        f[x] = g_samples[i].values[x] * bump;
        if (f[x] != Complex(0.0)) support.push_back(x);
      }
      for (std::size_t a : support)
        for (std::size_t b : support) rec.support_diameter = std::max(rec.support_diameter, X(a, b));

      rec.measured_lipschitz = lipschitz_constant(f, X);
      // Rounding can push the measured constant a few ulps past L.
      double lookup_L = rec.measured_lipschitz;
      if (lookup_L > gp.L && lookup_L <= gp.L * (1.0 + kLipschitzSlack) + kLipschitzSlack) lookup_L = gp.L;
      const RankLookup lk = m_lookup(iso.ranks, lookup_L, gp.eps);
      rec.k = lk.k;
      rec.tolerance = lk.tolerance;
      rec.bound = res.M;

      std::vector<char> touched(decomp.cells.size(), 0);
      for (std::size_t x : support) touched[decomp.cell_of[x]] = 1;
      for (std::size_t c = 0; c < decomp.cells.size(); ++c) {
        if (!touched[c]) continue;
        ++rec.cells_touched;
        std::vector<Complex> local;
        for (std::size_t x : decomp.cells[c]) local.push_back(f[x]);
        rec.rank += eps_rank(function_defect(iso.cells[c], local), rec.tolerance).rank;
      }
      rec.pass = rec.rank <= rec.bound && rec.support_diameter <= gp.R;
      if (i < options.locality_samples) check_locality(decomp, iso, f, touched, rec.tolerance, rec.rank, cert.locality);

      ++res.samples;
      res.max_rank = std::max(res.max_rank, rec.rank);
      res.pass = res.pass && rec.pass;
      cert.records.push_back(rec);
    }
    cert.grid.push_back(res);
  }
  cert.locality.pass = cert.locality.max_off_support <= kLocalityTolerance && cert.locality.rank_mismatches == 0;
  return cert;
}

nlohmann::json to_json(const UniformCertificate& cert) {
  nlohmann::json j;
  j["summary"] = {{"records", cert.records.size()},
                  {"violations", cert.violations()},
                  {"isometry_defect", cert.isometry_defect},
                  {"admissibility_ok", cert.admissibility_ok},
                  {"locality",
                   {{"checked", cert.locality.checked},
                    {"max_off_support", cert.locality.max_off_support},
                    {"rank_mismatches", cert.locality.rank_mismatches},
                    {"pass", cert.locality.pass}}},
                  {"all_pass", cert.all_pass()}};
  auto& grid = j["grid"] = nlohmann::json::array();
  for (const auto& g : cert.grid) {
    grid.push_back({{"eps", g.point.eps},
                    {"R", g.point.R},
                    {"L", g.point.L},
                    {"c_R", g.c_R},
                    {"M", g.M},
                    {"samples", g.samples},
                    {"max_rank", g.max_rank},
                    {"pass", g.pass}});
  }
  return j;
}

}  // namespace wvn
