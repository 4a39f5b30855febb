#include <doctest.h>

#include <set>

#include "wvn/generators.hpp"
#include "wvn/uniform.hpp"

using namespace wvn;

namespace {

// Cells met by B(x, R), counted with a set per centre.
std::size_t cells_met_oracle(const SpaceDecomposition& d, double R) {
  std::size_t best = 0;
  for (std::size_t x = 0; x < d.ambient.size(); ++x) {
    std::set<std::size_t> met;
    for (std::size_t y = 0; y < d.ambient.size(); ++y)
      if (d.ambient(x, y) <= R) met.insert(d.cell_of[y]);
    best = std::max(best, met.size());
  }
  return best;
}

}  // namespace

TEST_CASE("decompose a path into bounded cells") {
  const auto X = path_space(20);
  const auto d = decompose(X, 3.0);
  CHECK(d.cells.size() >= 4);
  CHECK(d.cells.size() <= 10);
  CHECK(d.R0 <= 3.0);
  CHECK(d.cell_family.spaces.size() == d.cells.size());
  std::size_t total = 0;
  for (std::size_t c = 0; c < d.cells.size(); ++c) {
    total += d.cells[c].size();
    for (std::size_t p : d.cells[c]) CHECK(d.cell_of[p] == c);
    CHECK(d.cell_family.spaces[c].size() == d.cells[c].size());
  }
  CHECK(total == X.size());
  CHECK_THROWS_AS(decompose(X, 0.0), Error);
}

TEST_CASE("coarse profile of a path") {
  const auto X = path_space(20);
  const std::vector<double> radii{0.0, 3.0, 6.0};
  const auto prof = coarse_profile(X, 1.5, radii);
  CHECK(prof.covering_radius <= 1.5);
  REQUIRE(prof.ball_counts.size() == 3);
  CHECK(prof.ball_counts[0].second == 1);
  CHECK(prof.ball_counts[1].second <= 3);
  CHECK(prof.ball_counts[1].second <= prof.ball_counts[2].second);
}

TEST_CASE("cells met by balls") {
  const auto d = decompose(path_space(20), 3.0);
  CHECK(cells_met(d, 0.0) == 1);
  CHECK(cells_met(d, 3.0) <= 4);
  std::size_t prev = 0;
  for (double R : {0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 20.0}) {
    const auto c = cells_met(d, R);
    CHECK(c == cells_met_oracle(d, R));
    CHECK(c >= prev);
    prev = c;
  }
  CHECK(prev == d.cells.size());
}

TEST_CASE("covering bound is c(R) times the lookup bound") {
  const auto d = decompose(grid_space(8, 8, 0.25), 2.0);
  const auto iso = block_isometry(d, make_schedule(3), NetMethod::greedy, std::vector<std::size_t>(64, 2), 3);
  const auto b = covering_bound(d, iso.ranks, 0.5, 2.0, 1.0);
  CHECK(b.lookup.k == 2);
  CHECK(b.c_R == cells_met_oracle(d, 2.0));
  CHECK(b.M == b.c_R * 2 * 2 * iso.ranks.s_bound(2));
}

TEST_CASE("block isometry is an isometry with no cross-cell entries") {
  const auto d = decompose(grid_space(6, 6, 0.25), 1.0);
  std::vector<std::size_t> m;
  for (std::size_t i = 0; i < 36; ++i) m.push_back(1 + i % 3);
  const auto iso = block_isometry(d, make_schedule(3), NetMethod::greedy, m, 3);
  CHECK(iso.isometry_defect < kIsometryTolerance);
  CHECK(iso.cells.size() == d.cells.size());
  for (Eigen::Index r = 0; r < iso.V.rows(); ++r)
    for (Eigen::Index c = 0; c < iso.V.cols(); ++c)
      if (d.cell_of[iso.pi.point_of(static_cast<std::size_t>(r))] != d.cell_of[iso.rho.point_of(static_cast<std::size_t>(c))])
        CHECK(iso.V(r, c) == Complex(0.0));
}

TEST_CASE("uniform certificate with positive ranks") {
  const auto d = decompose(grid_space(8, 8, 0.25), 2.0);
  const auto iso = block_isometry(d, make_schedule(3), NetMethod::greedy, random_multiplicities(64, 3, 2), 3);
  const std::vector<UniformGridPoint> grid{{0.25, 2.0, 2.5}, {1.0, 4.0, 1.0}};
  UniformOptions opt;
  opt.samples = 10;
  opt.seed = 3;
  const auto cert = certify_uniform(d, iso, grid, opt);
  CHECK(cert.all_pass());
  CHECK(cert.records.size() == 20);
  CHECK(cert.locality.checked == 4);
  CHECK(cert.locality.max_off_support <= 1e-10);
  CHECK(cert.grid.front().max_rank > 0);
  for (const auto& r : cert.records) {
    CHECK(r.support_diameter <= grid[r.grid].R);
    CHECK(r.measured_lipschitz <= grid[r.grid].L * (1 + 1e-12));
    CHECK(r.rank <= r.bound);
    CHECK(r.cells_touched <= cert.grid[r.grid].c_R);
  }
  CHECK(to_json(certify_uniform(d, iso, grid, opt)) == to_json(cert));
}
