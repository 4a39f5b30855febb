#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "wvn/generators.hpp"
#include "wvn/partition.hpp"

using namespace wvn;

namespace {

// Smallest K >= ceil(2c/eps) with c/K + L*eps1 < eps, by plain counting.
std::uint64_t grid_oracle(double L, double eps, double eps1, double c) {
  auto K = static_cast<std::uint64_t>(std::ceil(2 * c / eps));
  while (!(c / static_cast<double>(K) + L * eps1 < eps)) ++K;
  return K;
}

}  // namespace

TEST_CASE("default schedule levels") {
  const auto s = make_schedule(3);
  REQUIRE(s.depth() == 3);
  const std::uint64_t expected_K[] = {5, 9, 17};
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto& lv = s.level(k);
    CHECK(lv.lipschitz == static_cast<double>(k));
    CHECK(lv.eps == std::ldexp(1.0, -static_cast<int>(k)));
    CHECK(lv.eps1 == lv.eps / (2 * static_cast<double>(k)));
    CHECK(lv.K == expected_K[k - 1]);
    CHECK(lv.K == grid_oracle(lv.lipschitz, lv.eps, lv.eps1, 1.0));
  }
}

TEST_CASE("complex schedule uses the sqrt 2 rounding constant") {
  const auto s = make_schedule(4, 1.0, 1.0, ValueMode::complex);
  for (const auto& lv : s.levels()) {
    CHECK(lv.K == grid_oracle(lv.lipschitz, lv.eps, lv.eps1, std::sqrt(2.0)));
    CHECK(std::sqrt(2.0) / static_cast<double>(lv.K) + lv.lipschitz * lv.eps1 < lv.eps);
  }
}

TEST_CASE("schedule rejects non-monotone levels") {
  std::vector<ScheduleLevel> bad{{1, 0.5, 0.125, 5}, {1, 0.25, 0.0625, 9}};
  CHECK_THROWS_AS(Schedule{bad}, Error);
  std::vector<ScheduleLevel> coarse{{1, 0.5, 0.125, 2}};
  CHECK_THROWS_AS(Schedule{coarse}, Error);
}

TEST_CASE("voronoi ties go to the lower point index") {
  const auto X = oracle::line({0, 1, 2});
  EpsNet net;
  net.radius = 1.0;
  net.members = {2, 0};
  net.assignment = assign_nearest(X, net.members);
  const auto P = voronoi_partition(X, net);
  CHECK(verify_partition(X, P));
  CHECK(P.cell_of[1] == P.cell_of[0]);
}

TEST_CASE("hierarchies are nested, complete and radius-bounded") {
  std::vector<FiniteMetricSpace> spaces;
  for (auto& s : generate_family(GridBalls{4, 2, 3, 0.0625}, 5).spaces) spaces.push_back(s);
  for (auto& s : generate_family(BoundedDegreeTrees{3, 3, 3}, 5).spaces) spaces.push_back(s);
  spaces.push_back(star_space(4, 3));
  const auto schedule = make_schedule(4);
  for (const auto& X : spaces) {
    for (auto method : {NetMethod::greedy, NetMethod::exact}) {
      if (method == NetMethod::exact && X.size() > kExactNetBudget) continue;
      const auto h = build_hierarchy(X, schedule, method);
      CHECK(verify_hierarchy(X, h));
      REQUIRE(h.depth() == 4);
      CHECK(h.cut_points.front() == 0);
      for (std::size_t k = 1; k <= 4; ++k) {
        const auto& P = h.block(k);
        CHECK(verify_partition(X, P));
        CHECK(P.radius_bound <= schedule.level(k).eps1);
        CHECK(h.block_size(k) == P.cell_count());
        for (std::size_t p = 0; p < X.size(); ++p)
          CHECK(X(p, P.centers[P.cell_of[p]]) <= schedule.level(k).eps1);
        if (k < 4) {
          const auto& Q = h.block(k + 1);
          for (std::size_t p = 0; p < X.size(); ++p) CHECK(h.parent(k, Q.cell_of[p]) == P.cell_of[p]);
        }
      }
      for (std::size_t j = 1; j <= h.projection_count(); ++j) {
        const auto [k, c] = h.projection(j);
        CHECK(j > h.cut_points[k - 1]);
        CHECK(j <= h.cut_points[k]);
        CHECK(c < h.block(k).cell_count());
      }
    }
  }
}

TEST_CASE("S bounds are the family maxima of the cut points") {
  const auto fam = generate_family(BoundedDegreeTrees{3, 3, 5}, 8);
  const auto schedule = make_schedule(3);
  std::vector<PartitionHierarchy> hs;
  for (const auto& X : fam.spaces) hs.push_back(build_hierarchy(X, schedule, NetMethod::greedy));
  const auto S = family_s_bounds(hs);
  REQUIRE(S.size() == 3);
  for (std::size_t k = 1; k <= 3; ++k) {
    std::size_t mx = 0;
    for (const auto& h : hs) mx = std::max(mx, h.cut_points[k]);
    CHECK(S[k - 1] == mx);
    if (k > 1) CHECK(S[k - 1] > S[k - 2]);
  }
  CHECK(family_s_bounds(fam, schedule, NetMethod::greedy) == S);
}

TEST_CASE("single point hierarchy") {
  const auto X = validate_metric({{0.0}});
  const auto h = build_hierarchy(X, make_schedule(3), NetMethod::exact);
  CHECK(h.cut_points == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("hierarchy JSON lists cut points") {
  const auto h = build_hierarchy(star_space(3), make_schedule(2), NetMethod::greedy);
  const auto j = to_json(h);
  CHECK(j.at("cut_points").get<std::vector<std::size_t>>() == h.cut_points);
}
