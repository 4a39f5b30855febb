#include "wvn/wvn.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "wvn/operator.hpp"
#include "wvn/pipeline.hpp"
#include "wvn/space_io.hpp"

struct wvn_config {
  wvn::RunConfig config;
};

struct wvn_space {
  wvn::FiniteMetricSpace space;
};

namespace {

thread_local std::string last_error;

wvn_status status_of(wvn::ErrorCode code) {
  switch (code) {
    case wvn::ErrorCode::invalid_input: return WVN_INVALID_INPUT;
    case wvn::ErrorCode::io: return WVN_IO_ERROR;
    case wvn::ErrorCode::budget_exceeded: return WVN_BUDGET_EXCEEDED;
    case wvn::ErrorCode::precondition: return WVN_PRECONDITION;
    case wvn::ErrorCode::internal: return WVN_INTERNAL;
  }
  return WVN_INTERNAL;
}

template <class F>
wvn_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const wvn::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return WVN_INVALID_INPUT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return WVN_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return WVN_INTERNAL;
  }
}

wvn_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return WVN_INVALID_INPUT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* wvn_last_error(void) { return last_error.c_str(); }

const char* wvn_status_name(wvn_status status) {
  switch (status) {
    case WVN_OK: return "ok";
    case WVN_VIOLATION: return "violation";
    case WVN_INVALID_INPUT: return "invalid_input";
    case WVN_IO_ERROR: return "io";
    case WVN_BUDGET_EXCEEDED: return "budget_exceeded";
    case WVN_PRECONDITION: return "precondition";
    case WVN_INTERNAL: return "internal";
  }
  return "unknown";
}

void wvn_string_free(char* s) { std::free(s); }

wvn_status wvn_config_new(wvn_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new wvn_config{};
    return WVN_OK;
  });
}

void wvn_config_free(wvn_config* config) { delete config; }

wvn_status wvn_config_load_file(wvn_config* config, const char* path) {
  if (!config || !path) return null_argument("config/path");
  return guarded([&] {
    config->config = wvn::load_config_file(path, config->config);
    return WVN_OK;
  });
}

wvn_status wvn_config_merge_json(wvn_config* config, const char* json_text) {
  if (!config || !json_text) return null_argument("config/json_text");
  return guarded([&] {
    const auto j = nlohmann::json::parse(json_text);
    config->config = wvn::merge_config(config->config, j);
    return WVN_OK;
  });
}

wvn_status wvn_config_set_seed(wvn_config* config, uint64_t seed) {
  if (!config) return null_argument("config");
  config->config.seed = seed;
  return WVN_OK;
}

wvn_status wvn_config_set_out(wvn_config* config, const char* dir) {
  if (!config || !dir) return null_argument("config/dir");
  return guarded([&] {
    config->config.out = dir;
    return WVN_OK;
  });
}

wvn_status wvn_config_set_depth(wvn_config* config, size_t depth) {
  if (!config) return null_argument("config");
  config->config.depth = depth;
  return WVN_OK;
}

wvn_status wvn_config_set_truncation(wvn_config* config, const size_t* levels, size_t count) {
  if (!config || (!levels && count > 0)) return null_argument("config/levels");
  return guarded([&] {
    config->config.truncation.assign(levels, levels + count);
    return WVN_OK;
  });
}

wvn_status wvn_config_set_mode(wvn_config* config, const char* mode) {
  if (!config || !mode) return null_argument("config/mode");
  return guarded([&] {
    config->config.mode = wvn::value_mode_from_string(mode);
    return WVN_OK;
  });
}

wvn_status wvn_config_set_inject_defect(wvn_config* config, int enabled) {
  if (!config) return null_argument("config");
  config->config.inject_defect = enabled != 0;
  return WVN_OK;
}

wvn_status wvn_config_to_json(const wvn_config* config, char** json_out) {
  if (!config || !json_out) return null_argument("config/json_out");
  return guarded([&] {
    *json_out = copy_string(wvn::to_json(config->config).dump(2));
    return WVN_OK;
  });
}

wvn_status wvn_run(const wvn_config* config, const char* command, char** summary_out) {
  if (!config || !command) return null_argument("config/command");
  return guarded([&] {
    const wvn::RunResult r = wvn::run(config->config, wvn::command_from_string(command));
    if (summary_out) {
      nlohmann::json j{{"command", command}, {"violation", r.violation}, {"files", r.files}, {"summary", r.summary}};
      *summary_out = copy_string(j.dump(2));
    }
    if (r.violation) last_error = std::string(command) + ": certified violation found";
    return r.violation ? WVN_VIOLATION : WVN_OK;
  });
}

wvn_status wvn_space_from_matrix(const double* dist, size_t n, wvn_space** out) {
  if (!dist || !out) return null_argument("dist/out");
  return guarded([&] {
    std::vector<std::vector<double>> raw(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) raw[i][j] = dist[i * n + j];
    *out = new wvn_space{wvn::validate_metric(raw)};
    return WVN_OK;
  });
}

wvn_status wvn_space_load(const char* path, size_t index, wvn_space** out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] {
    wvn::SpaceFamily family = wvn::read_family_file(path);
    if (index >= family.spaces.size())
      throw wvn::Error(wvn::ErrorCode::invalid_input, "space index " + std::to_string(index) + " out of range");
    *out = new wvn_space{std::move(family.spaces[index])};
    return WVN_OK;
  });
}

void wvn_space_free(wvn_space* space) { delete space; }

size_t wvn_space_size(const wvn_space* space) { return space ? space->space.size() : 0; }

wvn_status wvn_space_distance(const wvn_space* space, size_t i, size_t j, double* out) {
  if (!space || !out) return null_argument("space/out");
  if (i >= space->space.size() || j >= space->space.size()) {
    last_error = "point index out of range";
    return WVN_INVALID_INPUT;
  }
  *out = space->space(i, j);
  return WVN_OK;
}

wvn_status wvn_space_net(const wvn_space* space, double eps, const char* method, size_t* members, size_t capacity,
                         size_t* count) {
  if (!space || !method || !count || (!members && capacity > 0)) return null_argument("space/method/members/count");
  return guarded([&] {
    const wvn::EpsNet net = wvn::compute_net(space->space, eps, wvn::net_method_from_string(method));
    *count = net.size();
    for (size_t i = 0; i < net.size() && i < capacity; ++i) members[i] = net.members[i];
    return WVN_OK;
  });
}

wvn_status wvn_eps_rank(const double* re, const double* im, size_t rows, size_t cols, double eps, size_t* rank) {
  if ((!re && rows * cols > 0) || !rank) return null_argument("re/rank");
  return guarded([&] {
    wvn::Matrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j)
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            wvn::Complex(re[i * cols + j], im ? im[i * cols + j] : 0.0);
    *rank = wvn::eps_rank(a, eps).rank;
    return WVN_OK;
  });
}

}  // extern "C"
