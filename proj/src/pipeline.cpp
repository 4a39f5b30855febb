#include "wvn/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wvn/certify.hpp"
#include "wvn/space_io.hpp"
#include "wvn/uniform.hpp"

namespace wvn {

using Json = nlohmann::json;

namespace {

std::size_t get_count(const Json& v, const std::string& key) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw Error(ErrorCode::invalid_input, "'" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

double get_real(const Json& v, const std::string& key) {
  if (!v.is_number()) throw Error(ErrorCode::invalid_input, "'" + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> get_reals(const Json& v, const std::string& key) {
  if (!v.is_array()) return {get_real(v, key)};
  std::vector<double> out;
  for (const auto& x : v) out.push_back(get_real(x, key));
  return out;
}

std::string get_string(const Json& v, const std::string& key) {
  if (!v.is_string()) throw Error(ErrorCode::invalid_input, "'" + key + "' must be a string");
  return v.get<std::string>();
}

bool get_bool(const Json& v, const std::string& key) {
  if (!v.is_boolean()) throw Error(ErrorCode::invalid_input, "'" + key + "' must be true or false");
  return v.get<bool>();
}

[[noreturn]] void unknown_key(const std::string& where, const std::string& key) {
  throw Error(ErrorCode::invalid_input, "unknown config key '" + where + key + "'");
}

void require_object(const Json& j, const std::string& what) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_input, what + " must be an object");
}

}  // namespace

RunConfig merge_config(RunConfig c, const Json& j) {
  require_object(j, "config");
  for (const auto& [key, v] : j.items()) {
    if (key == "family") {
      c.family = family_spec_from_json(v);
    } else if (key == "schedule") {
      require_object(v, "schedule");
      for (const auto& [sk, sv] : v.items()) {
        if (sk == "depth") c.depth = get_count(sv, sk);
        else if (sk == "lipschitz_scale") c.lipschitz_scale = get_real(sv, sk);
        else if (sk == "eps_scale") c.eps_scale = get_real(sv, sk);
        else unknown_key("schedule.", sk);
      }
    } else if (key == "truncation") {
      c.truncation.clear();
      if (v.is_array()) {
        for (const auto& t : v) c.truncation.push_back(get_count(t, key));
      } else {
        c.truncation.push_back(get_count(v, key));
      }
    } else if (key == "samples") {
      c.samples = get_count(v, key);
    } else if (key == "exact_trials") {
      c.exact_trials = get_count(v, key);
    } else if (key == "seed") {
      c.seed = get_count(v, key);
    } else if (key == "out") {
      c.out = get_string(v, key);
    } else if (key == "mode") {
      c.mode = value_mode_from_string(get_string(v, key));
    } else if (key == "net_method") {
      c.net_method = net_method_from_string(get_string(v, key));
    } else if (key == "rho_max_multiplicity") {
      if (v.is_null()) c.rho_max_multiplicity.reset();
      else c.rho_max_multiplicity = get_count(v, key);
    } else if (key == "nets") {
      require_object(v, "nets");
      for (const auto& [nk, nv] : v.items()) {
        if (nk == "eps") c.nets_eps = get_reals(nv, nk);
        else if (nk == "method") c.nets_method = net_method_from_string(get_string(nv, nk));
        else unknown_key("nets.", nk);
      }
    } else if (key == "uniform") {
      require_object(v, "uniform");
      auto& u = c.uniform;
      for (const auto& [uk, uv] : v.items()) {
        if (uk == "ambient") u.ambient = family_spec_from_json(uv);
        else if (uk == "target_diam") u.target_diam = get_real(uv, uk);
        else if (uk == "eps") u.eps = get_reals(uv, uk);
        else if (uk == "R") u.R = get_reals(uv, uk);
        else if (uk == "L") u.L = get_reals(uv, uk);
        else if (uk == "samples") u.samples = get_count(uv, uk);
        else if (uk == "locality_samples") u.locality_samples = get_count(uv, uk);
        else unknown_key("uniform.", uk);
      }
    } else if (key == "inject_defect") {
      c.inject_defect = get_bool(v, key);
    } else {
      unknown_key("", key);
    }
  }
  return c;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_input, "malformed config file '" + path + "': " + e.what());
  }
  return merge_config(std::move(base), j);
}

Json to_json(const RunConfig& c) {
  return {{"family", to_json(c.family)},
          {"schedule", {{"depth", c.depth}, {"lipschitz_scale", c.lipschitz_scale}, {"eps_scale", c.eps_scale}}},
          {"truncation", c.truncation_levels()},
          {"samples", c.samples},
          {"exact_trials", c.exact_trials},
          {"seed", c.seed},
          {"out", c.out},
          {"mode", to_string(c.mode)},
          {"net_method", to_string(c.net_method)},
          {"rho_max_multiplicity", c.rho_multiplicity_bound()},
          {"nets", {{"eps", c.nets_eps}, {"method", to_string(c.nets_method)}}},
          {"uniform",
           {{"ambient", to_json(c.uniform.ambient)},
            {"target_diam", c.uniform.target_diam},
            {"eps", c.uniform.eps},
            {"R", c.uniform.R},
            {"L", c.uniform.L},
            {"samples", c.uniform.samples},
            {"locality_samples", c.uniform.locality_samples}}},
          {"inject_defect", c.inject_defect}};
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_input, msg); };
  if (c.depth == 0) fail("schedule.depth must be >= 1");
  if (!(c.lipschitz_scale > 0.0) || !(c.eps_scale > 0.0)) fail("schedule scales must be positive");
  for (std::size_t n : c.truncation_levels())
    if (n < c.depth) fail("truncation " + std::to_string(n) + " is below the schedule depth " + std::to_string(c.depth));
  if (c.rho_multiplicity_bound() == 0 || c.rho_multiplicity_bound() > c.depth)
    fail("rho_max_multiplicity must lie in 1..depth");
  if (c.out.empty()) fail("output directory is empty");
  if (c.nets_eps.empty()) fail("nets.eps is empty");
  for (double e : c.nets_eps)
    if (!(e > 0.0)) fail("nets.eps values must be positive");
  const auto& u = c.uniform;
  if (!(u.target_diam > 0.0)) fail("uniform.target_diam must be positive");
  if (u.eps.empty() || u.R.empty() || u.L.empty()) fail("uniform grid lists must be non-empty");
  for (double e : u.eps)
    if (!(e > 0.0)) fail("uniform.eps values must be positive");
  for (double r : u.R)
    if (!(r >= 0.0)) fail("uniform.R values must be non-negative");
  for (double l : u.L)
    if (!(l > 0.0)) fail("uniform.L values must be positive");
  make_schedule(c.depth, c.lipschitz_scale, c.eps_scale, c.mode);
}

const char* to_string(Command command) noexcept {
  switch (command) {
    case Command::gen: return "gen";
    case Command::nets: return "nets";
    case Command::hierarchy: return "hierarchy";
    case Command::certify: return "certify";
    case Command::uniform: return "uniform";
  }
  return "?";
}

Command command_from_string(const std::string& name) {
  for (Command c : {Command::gen, Command::nets, Command::hierarchy, Command::certify, Command::uniform})
    if (name == to_string(c)) return c;
  throw Error(ErrorCode::invalid_input, "unknown command '" + name + "'");
}

namespace {

std::string num(double x) { return Json(x).dump(); }

std::string csv_header(const RunConfig& c) { return "# config: " + to_json(c).dump() + "\n"; }

class Outputs {
 public:
  explicit Outputs(const RunConfig& c) : dir_(c.out) {}

  void write(const std::string& name, const std::string& contents) {
    const auto path = (dir_ / name).string();
    write_text_file(path, contents);
    files_.push_back(path);
  }

  // The config goes first so every file opens with it.
  void write_json(const std::string& name, const RunConfig& c, const Json& body) {
    const std::string rest = body.dump(2);
    write(name, "{\n  \"config\": " + to_json(c).dump() + ",\n" + rest.substr(2) + "\n");
  }

  std::vector<std::string> files() && { return std::move(files_); }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

Schedule config_schedule(const RunConfig& c) { return make_schedule(c.depth, c.lipschitz_scale, c.eps_scale, c.mode); }

std::vector<PartitionHierarchy> hierarchies_for(const SpaceFamily& family, const Schedule& schedule, NetMethod method) {
  std::vector<PartitionHierarchy> out;
  for (const auto& space : family.spaces) out.push_back(build_hierarchy(space, schedule, method));
  return out;
}

RunResult run_gen(const RunConfig& c) {
  const SpaceFamily family = generate_family(c.family, c.seed);
  std::ostringstream body;
  write_family(body, family);
  const std::string text = body.str();
  Outputs out(c);
  out.write("family.json", "{\n  \"config\": " + to_json(c).dump() + ",\n" + text.substr(2));
  std::vector<std::size_t> sizes;
  for (const auto& s : family.spaces) sizes.push_back(s.size());
  return {false, std::move(out).files(), {{"kind", family.kind}, {"spaces", family.spaces.size()}, {"sizes", sizes}}};
}

RunResult run_nets(const RunConfig& c) {
  const SpaceFamily family = generate_family(c.family, c.seed);
  const AdmissibilityProfile profile = admissibility_profile(family, c.nets_eps, c.nets_method);
  std::string table = csv_header(c) + "eps,method,N\n";
  std::string per_space = csv_header(c) + "space_id,eps,method,size\n";
  bool violation = false;
  Json rows = Json::array();
  for (const auto& e : profile.entries) {
    table += num(e.eps) + "," + to_string(e.method) + "," + std::to_string(e.bound) + "\n";
    rows.push_back({{"eps", e.eps}, {"N", e.bound}});
    for (std::size_t s = 0; s < e.witnesses.size(); ++s) {
      per_space += std::to_string(s) + "," + num(e.eps) + "," + to_string(e.method) + "," +
                   std::to_string(e.witnesses[s].size()) + "\n";
      violation = violation || !verify_net(family.spaces[s], e.witnesses[s]);
    }
  }
  Outputs out(c);
  out.write("nets.csv", table);
  out.write("nets_spaces.csv", per_space);
  return {violation, std::move(out).files(), {{"kind", family.kind}, {"profile", rows}}};
}

RunResult run_hierarchy(const RunConfig& c) {
  const SpaceFamily family = generate_family(c.family, c.seed);
  const Schedule schedule = config_schedule(c);
  const auto hierarchies = hierarchies_for(family, schedule, c.net_method);
  const auto S = family_s_bounds(hierarchies);
  bool violation = false;
  Json spaces = Json::array();
  std::string table = csv_header(c) + "space_id,k,cells,I_k\n";
  for (std::size_t s = 0; s < hierarchies.size(); ++s) {
    const bool ok = verify_hierarchy(family.spaces[s], hierarchies[s]);
    violation = violation || !ok;
    spaces.push_back({{"space_id", s}, {"size", family.spaces[s].size()}, {"valid", ok}, {"hierarchy", to_json(hierarchies[s])}});
    for (std::size_t k = 1; k <= hierarchies[s].depth(); ++k)
      table += std::to_string(s) + "," + std::to_string(k) + "," + std::to_string(hierarchies[s].block_size(k)) + "," +
               std::to_string(hierarchies[s].cut_points[k]) + "\n";
  }
  Outputs out(c);
  out.write_json("hierarchy.json", c, {{"schedule", to_json(schedule)}, {"S", S}, {"spaces", spaces}});
  out.write("hierarchy.csv", table);
  return {violation, std::move(out).files(), {{"S", S}, {"valid", !violation}}};
}

std::size_t truncation_mismatches(const CertificationReport& a, const CertificationReport& b) {
  std::size_t n = 0;
  if (a.records.size() != b.records.size() || a.exact.size() != b.exact.size()) return 1;
  for (std::size_t i = 0; i < a.records.size(); ++i)
    n += a.records[i].rank != b.records[i].rank || a.records[i].pass != b.records[i].pass;
  for (std::size_t s = 0; s < a.exact.size(); ++s)
    for (std::size_t k = 0; k < a.exact[s].size(); ++k)
      for (std::size_t t = 0; t < a.exact[s][k].trials.size(); ++t)
        n += a.exact[s][k].trials[t].rank != b.exact[s][k].trials.at(t).rank ||
             a.exact[s][k].trials[t].pass != b.exact[s][k].trials.at(t).pass;
  return n;
}

RunResult run_certify(const RunConfig& c) {
  const SpaceFamily family = generate_family(c.family, c.seed);
  const Schedule schedule = config_schedule(c);
  const auto hierarchies = hierarchies_for(family, schedule, c.net_method);
  const RankSchedule ranks{schedule, family_s_bounds(hierarchies)};

  std::vector<std::vector<std::size_t>> rho_mult;
  for (std::size_t s = 0; s < family.spaces.size(); ++s)
    rho_mult.push_back(random_multiplicities(family.spaces[s].size(), c.rho_multiplicity_bound(), derive_seed(c.seed, {0x72686f, s})));

  CertifyOptions opts;
  opts.samples = c.samples;
  opts.exact_trials = c.exact_trials;
  opts.seed = c.seed;
  opts.inject_defect = c.inject_defect;

  std::vector<CertificationReport> reports;
  for (std::size_t n : c.truncation_levels()) {
    std::vector<SpaceInstance> instances;
    for (std::size_t s = 0; s < family.spaces.size(); ++s)
      instances.push_back(build_instance(family.spaces[s], hierarchies[s], rho_mult[s], n));
    reports.push_back(certify_theorem(instances, ranks, opts));
  }

  std::size_t mismatches = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) mismatches += truncation_mismatches(reports.front(), reports[i]);

  bool violation = mismatches > 0;
  std::string table = csv_header(c) + "space_id,truncation,k,sample,L,eps,empirical_rank,bound,tight_bound,pass\n";
  Json runs = Json::array();
  Json summaries = Json::array();
  Json violation_rows = Json::array();
  for (const auto& rep : reports) {
    violation = violation || !rep.all_pass();
    Json r = to_json(rep);
    r["truncation"] = rep.truncation;
    runs.push_back(std::move(r));
    summaries.push_back(summary_json(rep));
    for (const auto& rec : rep.records) {
      table += std::to_string(rec.space) + "," + std::to_string(rep.truncation) + "," + std::to_string(rec.k) + "," +
               std::to_string(rec.sample) + "," + num(rec.lipschitz) + "," + num(rec.tolerance) + "," +
               std::to_string(rec.rank) + "," + std::to_string(rec.bound) + "," + std::to_string(rec.tight_bound) + "," +
               (rec.pass ? "1" : "0") + "\n";
      if (!rec.pass && violation_rows.size() < 10)
        violation_rows.push_back({{"space_id", rec.space}, {"truncation", rep.truncation}, {"k", rec.k}, {"sample", rec.sample},
                                  {"empirical_rank", rec.rank}, {"bound", rec.bound}});
    }
  }
  Outputs out(c);
  out.write_json("certify_report.json", c,
                 {{"schedule", to_json(schedule)},
                  {"S", ranks.S},
                  {"truncation_mismatches", mismatches},
                  {"runs", runs}});
  out.write("certify_table.csv", table);
  return {violation,
          std::move(out).files(),
          {{"S", ranks.S}, {"runs", summaries}, {"truncation_mismatches", mismatches}, {"violation_rows", violation_rows}}};
}

RunResult run_uniform(const RunConfig& c) {
  const SpaceFamily ambient_family = generate_family(c.uniform.ambient, c.seed);
  if (ambient_family.spaces.size() != 1) throw Error(ErrorCode::invalid_input, "uniform.ambient must describe a single space");
  const FiniteMetricSpace& ambient = ambient_family.spaces.front();
  const Schedule schedule = config_schedule(c);
  const SpaceDecomposition decomp = decompose(ambient, c.uniform.target_diam);
  const auto mult = random_multiplicities(ambient.size(), c.rho_multiplicity_bound(), derive_seed(c.seed, {0x616d62}));
  const BlockIsometry iso = block_isometry(decomp, schedule, c.net_method, mult, c.truncation_levels().front());

  std::vector<UniformGridPoint> grid;
  for (double e : c.uniform.eps)
    for (double r : c.uniform.R)
      for (double l : c.uniform.L) grid.push_back({e, r, l});
  UniformOptions opts;
  opts.samples = c.uniform.samples;
  opts.seed = c.seed;
  opts.mode = c.mode;
  opts.locality_samples = c.uniform.locality_samples;
  const UniformCertificate cert = certify_uniform(decomp, iso, grid, opts);
  const CoarseProfile profile = coarse_profile(ambient, c.uniform.target_diam / 2.0, c.uniform.R);

  std::string table = csv_header(c) + "grid_id,sample,k,L,L_measured,eps,R,c_R,tolerance,empirical_rank,bound,pass\n";
  Json violation_rows = Json::array();
  for (const auto& rec : cert.records) {
    const auto& g = cert.grid[rec.grid];
    table += std::to_string(rec.grid) + "," + std::to_string(rec.sample) + "," + std::to_string(rec.k) + "," + num(g.point.L) +
             "," + num(rec.measured_lipschitz) + "," + num(g.point.eps) + "," + num(g.point.R) + "," + std::to_string(g.c_R) +
             "," + num(rec.tolerance) + "," + std::to_string(rec.rank) + "," + std::to_string(rec.bound) + "," +
             (rec.pass ? "1" : "0") + "\n";
    if (!rec.pass && violation_rows.size() < 10)
      violation_rows.push_back({{"grid_id", rec.grid}, {"sample", rec.sample}, {"empirical_rank", rec.rank}, {"bound", rec.bound}});
  }
  std::vector<std::size_t> cell_sizes;
  for (const auto& cell : decomp.cells) cell_sizes.push_back(cell.size());
  Json ball_counts = Json::array();
  for (const auto& [R, n] : profile.ball_counts) ball_counts.push_back({{"R", R}, {"count", n}});

  Json body = to_json(cert);
  body["schedule"] = to_json(schedule);
  body["S"] = iso.ranks.S;
  body["truncation"] = c.truncation_levels().front();
  body["decomposition"] = {{"cells", decomp.cells.size()}, {"R0", decomp.R0}, {"cell_sizes", cell_sizes}};
  body["coarse_profile"] = {{"net_size", profile.net.size()}, {"covering_radius", profile.covering_radius}, {"ball_counts", ball_counts}};
  Outputs out(c);
  out.write_json("uniform_report.json", c, body);
  out.write("uniform_table.csv", table);
  Json summary = body["summary"];
  summary["violation_rows"] = violation_rows;
  return {!cert.all_pass(), std::move(out).files(), summary};
}

}  // namespace

RunResult run(const RunConfig& config, Command command) {
  validate(config);
  switch (command) {
    case Command::gen: return run_gen(config);
    case Command::nets: return run_nets(config);
    case Command::hierarchy: return run_hierarchy(config);
    case Command::certify: return run_certify(config);
    case Command::uniform: return run_uniform(config);
  }
  throw Error(ErrorCode::internal, "unhandled command");
}

}  // namespace wvn
