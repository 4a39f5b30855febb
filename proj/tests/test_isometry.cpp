#include <doctest.h>

#include "wvn/certify.hpp"
#include "wvn/generators.hpp"
#include "wvn/isometry.hpp"

using namespace wvn;

namespace {

struct Setup {
  FiniteMetricSpace space;
  PartitionHierarchy h;
  RepresentationModel rho, pi;
  DiagonalizingBasis brho, bpi;
  CoveringIsometry iso;
};

Setup make_setup(const FiniteMetricSpace& X, std::size_t depth, std::vector<std::size_t> mult, std::size_t n) {
  Setup s{X, build_hierarchy(X, make_schedule(depth), NetMethod::greedy), RepresentationModel(std::move(mult)),
          RepresentationModel::uniform(X.size(), n), {}, {}, {}};
  s.brho = rho_basis(s.rho, s.h, spread_seed_basis(s.rho));
  s.bpi = pi_basis_maximal(s.pi, s.h);
  s.iso = build_isometry(s.brho, s.bpi);
  return s;
}

// Dense reference: V* pi(T) V - rho(T) with T constant on the cells of R_k.
Matrix dense_defect(const Setup& s, std::size_t k, const std::vector<Complex>& c) {
  std::vector<Complex> values(s.space.size());
  for (std::size_t x = 0; x < values.size(); ++x) values[x] = c[s.h.block(k).cell_of[x]];
  return s.iso.V.adjoint() * mult_operator(s.pi, values) * s.iso.V - mult_operator(s.rho, values);
}

}  // namespace

TEST_CASE("single point: V picks the first pi slot") {
  const auto X = validate_metric({{0.0}});
  const auto s = make_setup(X, 2, {1}, 2);
  REQUIRE(s.iso.V.rows() == 2);
  REQUIRE(s.iso.V.cols() == 1);
  CHECK(std::abs(s.iso.V(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(s.iso.V(1, 0)) < 1e-15);
}

TEST_CASE("spread seed basis is unitary and starts with spread vectors") {
  const RepresentationModel rep({1, 3, 2});
  const Matrix B = spread_seed_basis(rep);
  CHECK((B.adjoint() * B - Matrix::Identity(6, 6)).norm() < 1e-12);
  CHECK(std::abs(B(0, 0) - 1.0 / std::sqrt(3.0)) < 1e-15);
  CHECK(std::abs(B(static_cast<Eigen::Index>(rep.slot(1, 2)), 2) - 1.0) < 1e-15);
}

TEST_CASE("rho basis is unitary, blocked and rejects bad seeds") {
  const auto X = star_space(3, 2);
  const auto s = make_setup(X, 3, {1, 2, 3, 1, 2, 3, 1}, 3);
  const auto dim = static_cast<Eigen::Index>(s.rho.dim());
  CHECK((s.brho.columns.adjoint() * s.brho.columns - Matrix::Identity(dim, dim)).norm() < 1e-10);
  std::size_t total = 0;
  for (const auto& b : s.brho.blocks) {
    CHECK(b.first == total);
    total += b.width;
    // Each column is supported on the slots of its cell.
    const auto& P = s.h.block(b.key.partition_level());
    for (std::size_t c = b.first; c < b.first + b.width; ++c)
      for (std::size_t r = 0; r < s.rho.dim(); ++r)
        if (P.cell_of[s.rho.point_of(r)] != b.key.cell)
          CHECK(std::abs(s.brho.columns(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))) == 0.0);
  }
  CHECK(total == s.rho.dim());
  for (std::size_t k = 1; k <= 3; ++k) {
    CHECK(s.brho.dim_E(k) <= k * s.h.block_size(k));
    CHECK(s.brho.stage_begin(k) == s.brho.dim_E(k));
  }
  CHECK_THROWS_AS(rho_basis(s.rho, s.h, 2.0 * spread_seed_basis(s.rho)), Error);
}

TEST_CASE("pi basis reaches k |R_k| and needs multiplicity >= depth") {
  const auto X = star_space(4);
  const auto s = make_setup(X, 3, std::vector<std::size_t>(5, 1), 4);
  for (std::size_t k = 1; k <= 3; ++k) CHECK(s.bpi.dim_E(k) == k * s.h.block_size(k));
  try {
    pi_basis_maximal(RepresentationModel::uniform(5, 2), s.h);
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precondition);
  }
}

TEST_CASE("pi blocks are at least as wide as rho blocks") {
  const auto fam = generate_family(GridBalls{3, 2, 3, 0.0625}, 21);
  for (std::size_t i = 0; i < fam.spaces.size(); ++i) {
    const auto& X = fam.spaces[i];
    const auto s = make_setup(X, 3, random_multiplicities(X.size(), 3, i), 3);
    for (const auto& rb : s.brho.blocks) CHECK(s.bpi.block(rb.key).width >= rb.width);
    CHECK(isometry_defect(s.iso.V) < kIsometryTolerance);
  }
}

TEST_CASE("a wider rho than pi is reported as a block deficit") {
  const auto X = star_space(2);
  const auto h = build_hierarchy(X, make_schedule(2), NetMethod::greedy);
  const RepresentationModel rho({4, 4, 4}), pi = RepresentationModel::uniform(3, 2);
  const auto brho = rho_basis(rho, h, spread_seed_basis(rho));
  try {
    build_isometry(brho, pi_basis_maximal(pi, h));
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precondition);
    CHECK(std::string(e.what()).find("stage") != std::string::npos);
  }
}

TEST_CASE("algebra defects vanish off E_k and have rank at most dim E_k") {
  const auto fam = generate_family(BoundedDegreeTrees{3, 3, 3}, 4);
  Rng rng(99);
  for (std::size_t i = 0; i < fam.spaces.size(); ++i) {
    const auto& X = fam.spaces[i];
    const auto s = make_setup(X, 3, random_multiplicities(X.size(), 3, 40 + i), 5);
    for (std::size_t k = 1; k <= 3; ++k) {
      std::vector<Complex> c(s.h.block(k).cell_count());
      for (auto& v : c) v = random_unit_disc(rng);
      const Matrix dense = dense_defect(s, k, c);
      const Matrix fast = algebra_defect(s.iso, s.pi, s.rho, s.h, k, c);
      CHECK((dense - fast).norm() < 1e-12);
      const auto dimE = static_cast<Eigen::Index>(s.brho.dim_E(k));
      const Matrix Q = s.brho.columns.rightCols(s.brho.columns.cols() - dimE);
      CHECK((dense * Q).norm() < 1e-10);
      CHECK((Q.adjoint() * dense).norm() < 1e-10);
      CHECK(eps_rank(dense, kExactRankCutoff).rank <= s.brho.dim_E(k));
    }
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto rep = exact_defect_check(s.iso, s.pi, s.rho, s.h, k, 10, 7, s.h.cut_points[k]);
      CHECK(rep.violations == 0);
      CHECK(rep.trials.size() == 10);
    }
  }
}

TEST_CASE("m_lookup examples") {
  RankSchedule ranks{make_schedule(3), {4, 28, 69}};
  const auto a = m_lookup(ranks, 0.5, 1.0);
  CHECK(a.k == 1);
  CHECK(a.bound == 8);
  CHECK(a.tight_bound == 4);
  CHECK(a.tolerance == 1.0);
  const auto b = m_lookup(ranks, 1.5, 0.3);
  CHECK(b.k == 3);
  CHECK(b.bound == 6 * 69);
  CHECK(b.tight_bound == 3 * 69);
  CHECK(b.tolerance == 0.25);
  CHECK(m_lookup(ranks, 2.0, 0.5).k == 2);
  try {
    m_lookup(ranks, 10.0, 1.0);
    FAIL("expected exhaustion");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::budget_exceeded);
  }
  CHECK_THROWS_AS(m_lookup(ranks, 1.0, 0.1), Error);
}

TEST_CASE("random_unit_disc stays in the disc and is area-uniform") {
  Rng rng(1);
  double r2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Complex z = random_unit_disc(rng);
    CHECK(std::abs(z) <= 1.0);
    r2 += std::norm(z);
  }
  CHECK(r2 / n == doctest::Approx(0.5).epsilon(0.02));
}
