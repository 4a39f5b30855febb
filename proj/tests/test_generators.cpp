#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "wvn/generators.hpp"
#include "wvn/space_io.hpp"

using namespace wvn;

TEST_CASE("star family: centre plus leaves at leaf distance 2") {
  const auto fam = generate_family(StarFamily{{3}, 1}, 0);
  REQUIRE(fam.spaces.size() == 1);
  const auto& X = fam.spaces.front();
  CHECK(X.size() == 4);
  CHECK(X.labels().front() == "c");
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(X(0, i) == 1.0);
    for (std::size_t j = i + 1; j < 4; ++j) CHECK(X(i, j) == 2.0);
  }
  const auto sub = star_space(2, 2);
  CHECK(sub.size() == 5);
  CHECK(sub(1, 2) == 0.5);
  CHECK(sub(2, 4) == 2.0);
}

TEST_CASE("grid balls are isometric translates") {
  const auto fam = generate_family(GridBalls{2, -1, 3, 1.0}, 7);
  REQUIRE(fam.spaces.size() == 3);
  for (const auto& X : fam.spaces) {
    CHECK(X.size() == 13);
    CHECK(X.rows() == fam.spaces.front().rows());
  }
}

TEST_CASE("grid ball radii stay in range and spacing scales distances") {
  const auto fam = generate_family(GridBalls{4, 2, 6, 0.0625}, 1);
  for (const auto& X : fam.spaces) {
    const bool known = X.size() == 13 || X.size() == 25 || X.size() == 41;
    CHECK(known);
    CHECK(X.diameter() <= 8 * 0.0625);
  }
}

TEST_CASE("generation is deterministic per seed") {
  const FamilySpec spec = BoundedDegreeTrees{3, 3, 4};
  const auto a = generate_family(spec, 42);
  const auto b = generate_family(spec, 42);
  REQUIRE(a.spaces.size() == b.spaces.size());
  for (std::size_t i = 0; i < a.spaces.size(); ++i) CHECK(a.spaces[i] == b.spaces[i]);
}

TEST_CASE("trees respect the degree bound") {
  for (const auto& X : generate_family(BoundedDegreeTrees{3, 3, 6}, 2).spaces) {
    for (std::size_t v = 0; v < X.size(); ++v) {
      std::size_t neighbours = 0;
      for (std::size_t w = 0; w < X.size(); ++w) neighbours += X(v, w) == 1.0;
      CHECK(neighbours <= 3);
    }
    CHECK(X.diameter() <= 6.0);
  }
}

TEST_CASE("rips presets give word-metric balls of the expected size") {
  CHECK(generate_family(RipsSample{"z2", 2, 1}, 0).spaces.front().size() == 13);
  CHECK(generate_family(RipsSample{"z3", 1, 1}, 0).spaces.front().size() == 7);
  CHECK(generate_family(RipsSample{"hex", 1, 1}, 0).spaces.front().size() == 7);
  const auto free2 = generate_family(RipsSample{"free2", 2, 1}, 0).spaces.front();
  CHECK(free2.size() == 17);
  CHECK(free2.diameter() == 4.0);
  CHECK_THROWS_AS(generate_family(RipsSample{"sl3", 1, 1}, 0), Error);
}

TEST_CASE("edge lists become shortest-path metrics") {
  const auto X = metric_from_edges({"a", "b", "c"}, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 5.0}});
  CHECK(X(0, 2) == 3.0);
  CHECK_THROWS_AS(metric_from_edges({"a", "b"}, {}), Error);
}

TEST_CASE("family specs parse from JSON and round-trip") {
  const auto j = nlohmann::json::parse(R"({"kind": "star_family", "n_list": [2, 4], "subdivision": 1})");
  const FamilySpec spec = family_spec_from_json(j);
  CHECK(family_kind(spec) == "star_family");
  CHECK(to_json(family_spec_from_json(to_json(spec))) == to_json(spec));
  const auto fam = generate_family(spec, 0);
  CHECK(fam.spaces.size() == 2);
  CHECK(fam.spaces[1].size() == 5);
  CHECK_THROWS_AS(family_spec_from_json(nlohmann::json::parse(R"({"kind": "torus"})")), Error);
}

TEST_CASE("space files round-trip bit-exactly") {
  const auto dir = std::filesystem::temp_directory_path() / "wvn_io_test";
  std::filesystem::create_directories(dir);
  const std::vector<std::vector<double>> raw{{0, 0.1, 0.30000000000000004}, {0.1, 0, 0.2}, {0.30000000000000004, 0.2, 0}};
  SpaceFamily fam{{validate_metric(raw, {"x", "y", "z"}), star_space(3)}, "mixed"};
  std::ostringstream text;
  write_family(text, fam);
  const auto path = (dir / "family.json").string();
  write_text_file(path, text.str());
  const auto back = read_family_file(path);
  REQUIRE(back.spaces.size() == 2);
  CHECK(back.spaces[0] == fam.spaces[0]);
  CHECK(back.spaces[1] == fam.spaces[1]);
  const auto via_spec = generate_family(FromFile{path}, 0);
  CHECK(via_spec.spaces[0] == fam.spaces[0]);
  std::filesystem::remove_all(dir);
}

TEST_CASE("space JSON accepts edges and rejects malformed input") {
  const auto X = space_from_json(nlohmann::json::parse(R"({"points": ["p", "q", "r"], "edges": [[0, 1, 1], [1, 2, 1]]})"));
  CHECK(X(0, 2) == 2.0);
  CHECK_THROWS_AS(space_from_json(nlohmann::json::parse(R"({"points": ["p"]})")), Error);
  try {
    read_family_file("/nonexistent/family.json");
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
}

TEST_CASE("format_double keeps 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
}
