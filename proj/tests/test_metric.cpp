#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "wvn/generators.hpp"
#include "wvn/metric.hpp"
#include "wvn/rng.hpp"

using namespace wvn;

namespace {

bool has_violation(const std::vector<std::vector<double>>& raw, MetricViolation::Kind kind, std::size_t i, std::size_t j) {
  try {
    validate_metric(raw);
  } catch (const MetricError& e) {
    return std::any_of(e.violations().begin(), e.violations().end(),
                       [&](const MetricViolation& v) { return v.kind == kind && v.i == i && v.j == j; });
  }
  return false;
}

}  // namespace

TEST_CASE("validate_metric accepts small valid matrices") {
  const auto one = validate_metric({{0.0}});
  CHECK(one.size() == 1);
  CHECK(one.labels().front() == "0");
  const auto two = validate_metric({{0, 1}, {1, 0}});
  CHECK(two.size() == 2);
  CHECK(two(0, 1) == 1.0);
  CHECK(two.diameter() == 1.0);
}

TEST_CASE("validate_metric reports each axiom with witnesses") {
  using K = MetricViolation::Kind;
  CHECK(has_violation({{0, 1}, {2, 0}}, K::asymmetric, 0, 1));
  CHECK(has_violation({{0, -1}, {-1, 0}}, K::negative, 0, 1));
  CHECK(has_violation({{1, 1}, {1, 0}}, K::nonzero_diagonal, 0, 0));
  CHECK(has_violation({{0, 0}, {0, 0}}, K::coincident, 0, 1));
  CHECK(has_violation({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}, K::triangle, 0, 1));
  CHECK_THROWS_AS(validate_metric({{0, 1}, {1}}), MetricError);
}

TEST_CASE("triangle tolerance is 1e-12 absolute") {
  CHECK_NOTHROW(validate_metric({{0, 1, 2 + 5e-13}, {1, 0, 1}, {2 + 5e-13, 1, 0}}));
  CHECK_THROWS_AS(validate_metric({{0, 1, 2 + 1e-9}, {1, 0, 1}, {2 + 1e-9, 1, 0}}), MetricError);
}

TEST_CASE("min_net_exact on collinear points") {
  const auto X = oracle::line({0, 1, 2});
  CHECK(min_net_exact(X, 0.5).size() == 3);
  const auto net = min_net_exact(X, 1.0);
  CHECK(net.size() == 1);
  CHECK(net.members == std::vector<std::size_t>{1});
  CHECK(verify_net(X, net));
  CHECK(min_net_exact(X, X.diameter()).size() == 1);
}

TEST_CASE("min_net_exact refuses spaces beyond the budget") {
  const auto big = path_space(kExactNetBudget + 1);
  try {
    min_net_exact(big, 1.0);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::budget_exceeded);
  }
}

TEST_CASE("greedy_net examples") {
  const auto X = oracle::line({0, 1, 2});
  CHECK(greedy_net(X, 0.5).size() == 3);
  const auto whole = greedy_net(X, 2.0);
  CHECK(whole.size() == 1);
  CHECK(whole.members.front() == 0);
  for (std::size_t n : {2u, 3u, 5u}) {
    const auto S = oracle::star(n);
    CHECK(greedy_net(S, 0.9).size() == n + 1);
    CHECK(min_net_exact(S, 0.9).size() == n + 1);
  }
}

TEST_CASE("greedy members are pairwise farther than eps and ties go low") {
  const auto X = grid_space(4, 3);
  for (double eps : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    const auto net = greedy_net(X, eps);
    CHECK(verify_net(X, net));
    for (std::size_t a = 0; a < net.size(); ++a)
      for (std::size_t b = a + 1; b < net.size(); ++b) CHECK(X(net.members[a], net.members[b]) > eps);
  }
  // Points 1 and 2 are both at distance 1 from 0 on this triangle; 1 wins.
  const auto T = validate_metric({{0, 1, 1}, {1, 0, 0.5}, {1, 0.5, 0}});
  CHECK(greedy_net(T, 0.4).members == std::vector<std::size_t>{0, 1, 2});
  CHECK(greedy_net(T, 0.7).members == std::vector<std::size_t>{0, 1});
}

TEST_CASE("exact nets match a brute-force cover oracle and are lexicographically first") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> xs;
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 9));
    for (std::size_t i = 0; i < n; ++i) xs.push_back(static_cast<double>(rng.uniform_int(0, 40)) / 4.0 + 0.001 * static_cast<double>(i));
    const auto X = oracle::line(xs);
    for (double eps : {0.3, 1.0, 2.5}) {
      const auto net = min_net_exact(X, eps);
      CHECK(verify_net(X, net));
      CHECK(net.size() == oracle::min_cover_size(X, eps));
      CHECK(std::is_sorted(net.members.begin(), net.members.end()));
    }
  }
}

TEST_CASE("packing-covering sandwich on generated spaces") {
  std::vector<FiniteMetricSpace> spaces;
  for (auto& s : generate_family(GridBalls{1, 1, 3, 1.0}, 3).spaces) spaces.push_back(s);
  for (auto& s : generate_family(BoundedDegreeTrees{3, 2, 4}, 5).spaces) spaces.push_back(s);
  spaces.push_back(star_space(5));
  spaces.push_back(path_space(12));
  for (const auto& X : spaces) {
    if (X.size() > 12) continue;
    for (double eps : {0.5, 1.0, 2.0}) {
      const auto g = greedy_net(X, eps).size();
      CHECK(g >= min_net_exact(X, eps).size());
      CHECK(g <= min_net_exact(X, eps / 2).size());
    }
  }
}

TEST_CASE("assignment maps every point to a covering member") {
  const auto X = generate_family(GridBalls{3, 3, 1, 1.0}, 9).spaces.front();
  const auto net = greedy_net(X, 2.0);
  REQUIRE(net.assignment.size() == X.size());
  for (std::size_t p = 0; p < X.size(); ++p) CHECK(X(p, net.members[net.assignment[p]]) <= 2.0);
  std::set<std::size_t> distinct(net.members.begin(), net.members.end());
  CHECK(distinct.size() == net.size());
}

TEST_CASE("admissibility profiles") {
  SpaceFamily single{{validate_metric({{0.0}})}, "point"};
  const std::vector<double> eps{0.1, 1.0, 10.0};
  for (const auto& e : admissibility_profile(single, eps, NetMethod::exact).entries) CHECK(e.bound == 1);

  SpaceFamily stars{{oracle::star(2), oracle::star(4), oracle::star(8)}, "star"};
  const std::vector<double> e09{0.9};
  const auto exact = admissibility_profile(stars, e09, NetMethod::exact);
  std::vector<std::size_t> sizes;
  for (const auto& w : exact.entries.front().witnesses) sizes.push_back(w.size());
  CHECK(sizes == std::vector<std::size_t>{3, 5, 9});
  CHECK(exact.entries.front().bound == 9);

  const auto balls = generate_family(GridBalls{2, 2, 4, 1.0}, 7);
  const std::vector<double> e1{1.0};
  const auto prof = admissibility_profile(balls, e1, NetMethod::exact);
  for (const auto& w : prof.entries.front().witnesses) CHECK(w.size() == prof.entries.front().witnesses.front().size());
}

TEST_CASE("net method names round-trip") {
  CHECK(net_method_from_string(to_string(NetMethod::exact)) == NetMethod::exact);
  CHECK(net_method_from_string(to_string(NetMethod::greedy)) == NetMethod::greedy);
  CHECK_THROWS_AS(net_method_from_string("fast"), Error);
}
