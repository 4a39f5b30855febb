#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wvn/wvn.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInputError = 2;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> depth;
  std::vector<std::size_t> truncation;
  std::optional<std::string> mode;
  bool inject_defect = false;
};

int fail(const char* what) {
  std::cerr << "wvn: " << what << ": " << wvn_last_error() << "\n";
  return kExitInputError;
}

int run(const std::string& command, const Flags& flags) {
  wvn_config* raw = nullptr;
  if (wvn_config_new(&raw) != WVN_OK) return fail("config");
  std::unique_ptr<wvn_config, decltype(&wvn_config_free)> cfg(raw, wvn_config_free);

  if (!flags.config.empty() && wvn_config_load_file(cfg.get(), flags.config.c_str()) != WVN_OK) return fail("config");
  if (const char* env = std::getenv("WVN_OUT_DIR"); env && *env && wvn_config_set_out(cfg.get(), env) != WVN_OK)
    return fail("WVN_OUT_DIR");
  if (flags.seed) wvn_config_set_seed(cfg.get(), *flags.seed);
  if (flags.out && wvn_config_set_out(cfg.get(), flags.out->c_str()) != WVN_OK) return fail("--out");
  if (flags.depth) wvn_config_set_depth(cfg.get(), *flags.depth);
  if (!flags.truncation.empty() &&
      wvn_config_set_truncation(cfg.get(), flags.truncation.data(), flags.truncation.size()) != WVN_OK)
    return fail("--truncation");
  if (flags.mode && wvn_config_set_mode(cfg.get(), flags.mode->c_str()) != WVN_OK) return fail("--mode");
  if (flags.inject_defect) wvn_config_set_inject_defect(cfg.get(), 1);

  char* summary = nullptr;
  const wvn_status status = wvn_run(cfg.get(), command.c_str(), &summary);
  if (summary) {
    std::cout << summary << "\n";
    wvn_string_free(summary);
  }
  switch (status) {
    case WVN_OK: return kExitOk;
    case WVN_VIOLATION:
      std::cerr << "wvn: " << command << ": violation found (see violation_rows and the table)\n";
      return kExitViolation;
    default: return fail(command.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weyl-von Neumann rank certificates on finite metric spaces"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--config", flags.config, "JSON run config");
  app.add_option("--seed", flags.seed, "base seed");
  app.add_option("--out", flags.out, "output directory (overrides WVN_OUT_DIR)");
  app.add_option("--depth", flags.depth, "schedule depth");
  app.add_option("--truncation", flags.truncation, "pi multiplicities, e.g. 3,7,19")->delimiter(',');
  app.add_option("--mode", flags.mode, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  app.add_flag("--inject-defect", flags.inject_defect, "add a rank-(bound+5) perturbation before certifying (testing)");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"gen", "generate the space family"},
      {"nets", "eps-net sizes across the family"},
      {"hierarchy", "nested partitions and cut points"},
      {"certify", "rank certificates for the covering isometries"},
      {"uniform", "uniform covering certificate on a decomposed ambient space"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }
  return run(app.get_subcommands().front()->get_name(), flags);
}
