#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wvn/wvn.h"

namespace {

struct ConfigHandle {
  wvn_config* p = nullptr;
  ConfigHandle() { REQUIRE(wvn_config_new(&p) == WVN_OK); }
  ~ConfigHandle() { wvn_config_free(p); }
};

nlohmann::json take_json(char* s) {
  auto j = nlohmann::json::parse(s);
  wvn_string_free(s);
  return j;
}

}  // namespace

TEST_CASE("config handles") {
  ConfigHandle cfg;
  CHECK(wvn_config_set_seed(cfg.p, 9) == WVN_OK);
  CHECK(wvn_config_set_depth(cfg.p, 4) == WVN_OK);
  const size_t levels[] = {4, 8};
  CHECK(wvn_config_set_truncation(cfg.p, levels, 2) == WVN_OK);
  CHECK(wvn_config_set_mode(cfg.p, "complex") == WVN_OK);
  char* text = nullptr;
  REQUIRE(wvn_config_to_json(cfg.p, &text) == WVN_OK);
  const auto j = take_json(text);
  CHECK(j.at("seed") == 9);
  CHECK(j.at("schedule").at("depth") == 4);
  CHECK(j.at("truncation") == nlohmann::json({4, 8}));
  CHECK(j.at("mode") == "complex");

  CHECK(wvn_config_set_mode(cfg.p, "octonion") == WVN_INVALID_INPUT);
  CHECK(std::string(wvn_last_error()).find("octonion") != std::string::npos);
  CHECK(wvn_config_merge_json(cfg.p, "{\"bogus\": 1}") == WVN_INVALID_INPUT);
  CHECK(wvn_config_merge_json(cfg.p, "{not json") == WVN_INVALID_INPUT);
  CHECK(wvn_config_load_file(cfg.p, "/nonexistent/config.json") == WVN_IO_ERROR);
  CHECK(wvn_config_new(nullptr) == WVN_INVALID_INPUT);
  CHECK(std::string(wvn_status_name(WVN_BUDGET_EXCEEDED)) == "budget_exceeded");
}

TEST_CASE("run through the C API") {
  const auto dir = std::filesystem::temp_directory_path() / "wvn_capi_run";
  std::filesystem::remove_all(dir);
  ConfigHandle cfg;
  REQUIRE(wvn_config_merge_json(cfg.p, R"({"family": {"kind": "grid_balls", "radius": 2, "count": 2, "spacing": 0.0625},
                                          "samples": 3, "exact_trials": 2})") == WVN_OK);
  REQUIRE(wvn_config_set_out(cfg.p, dir.c_str()) == WVN_OK);
  char* summary = nullptr;
  REQUIRE(wvn_run(cfg.p, "certify", &summary) == WVN_OK);
  const auto j = take_json(summary);
  CHECK(j.at("violation") == false);
  CHECK(j.at("files").size() == 2);

  wvn_config_set_inject_defect(cfg.p, 1);
  CHECK(wvn_run(cfg.p, "certify", nullptr) == WVN_VIOLATION);
  CHECK(wvn_run(cfg.p, "bogus", nullptr) == WVN_INVALID_INPUT);
  std::filesystem::remove_all(dir);
}

TEST_CASE("space handles") {
  const double d[] = {0, 1, 2, 1, 0, 1, 2, 1, 0};
  wvn_space* s = nullptr;
  REQUIRE(wvn_space_from_matrix(d, 3, &s) == WVN_OK);
  CHECK(wvn_space_size(s) == 3);
  double x = 0;
  CHECK(wvn_space_distance(s, 0, 2, &x) == WVN_OK);
  CHECK(x == 2.0);
  CHECK(wvn_space_distance(s, 0, 3, &x) == WVN_INVALID_INPUT);
  size_t members[3] = {};
  size_t count = 0;
  CHECK(wvn_space_net(s, 1.0, "exact", members, 3, &count) == WVN_OK);
  CHECK(count == 1);
  CHECK(members[0] == 1);
  CHECK(wvn_space_net(s, 0.5, "greedy", nullptr, 0, &count) == WVN_OK);
  CHECK(count == 3);
  CHECK(wvn_space_net(s, 1.0, "fastest", members, 3, &count) == WVN_INVALID_INPUT);
  wvn_space_free(s);

  const double bad[] = {0, 1, 5, 1, 0, 1, 5, 1, 0};
  wvn_space* t = nullptr;
  CHECK(wvn_space_from_matrix(bad, 3, &t) == WVN_INVALID_INPUT);
  CHECK(t == nullptr);
  CHECK(std::string(wvn_last_error()).find("triangle") != std::string::npos);
  CHECK(wvn_space_load("/nonexistent.json", 0, &t) == WVN_IO_ERROR);
}

TEST_CASE("eps rank through the C API") {
  const double re[] = {3, 0, 0, 0, 1, 0, 0, 0, 0.5};
  const double im[] = {0, 0, 0, 0, 0, 0, 0, 0, 0.5};
  size_t rank = 0;
  CHECK(wvn_eps_rank(re, nullptr, 3, 3, 0.75, &rank) == WVN_OK);
  CHECK(rank == 2);
  CHECK(wvn_eps_rank(re, im, 3, 3, 0.6, &rank) == WVN_OK);
  CHECK(rank == 3);
  CHECK(wvn_eps_rank(re, nullptr, 3, 3, 0.0, &rank) == WVN_INVALID_INPUT);
}
