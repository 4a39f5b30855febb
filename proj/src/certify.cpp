#include "wvn/certify.hpp"

#include <algorithm>

namespace wvn {

std::vector<std::size_t> random_multiplicities(std::size_t points, std::size_t max_multiplicity, std::uint64_t seed) {
  if (max_multiplicity == 0) throw Error(ErrorCode::invalid_input, "multiplicity bound must be >= 1");
  Rng rng(derive_seed(seed, {0x6d756c74}));
  std::vector<std::size_t> m(points);
  for (auto& v : m) v = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_multiplicity)));
  return m;
}

SpaceInstance build_instance(const FiniteMetricSpace& space, PartitionHierarchy hierarchy,
                             std::vector<std::size_t> rho_multiplicity, std::size_t truncation) {
  if (rho_multiplicity.size() != space.size())
    throw Error(ErrorCode::invalid_input, "one rho multiplicity per point is required");
  SpaceInstance inst;
  inst.space = space;
  inst.hierarchy = std::move(hierarchy);
  inst.rho = RepresentationModel(std::move(rho_multiplicity));
  inst.pi = RepresentationModel::uniform(space.size(), truncation);
  inst.rho_basis = rho_basis(inst.rho, inst.hierarchy, spread_seed_basis(inst.rho));
  inst.pi_basis = pi_basis_maximal(inst.pi, inst.hierarchy);
  inst.isometry = build_isometry(inst.rho_basis, inst.pi_basis);
  inst.isometry_defect = isometry_defect(inst.isometry.V);

  const Matrix& v = inst.isometry.V;
  for (Eigen::Index r = 0; r < v.rows(); ++r)
    if (v.row(r).cwiseAbs().maxCoeff() > 0.0) inst.active_rows.push_back(r);
  inst.active_V.resize(static_cast<Eigen::Index>(inst.active_rows.size()), v.cols());
  for (std::size_t i = 0; i < inst.active_rows.size(); ++i)
    inst.active_V.row(static_cast<Eigen::Index>(i)) = v.row(inst.active_rows[i]);
  return inst;
}

Matrix function_defect(const SpaceInstance& inst, std::span<const Complex> values) {
  if (values.size() != inst.space.size()) throw Error(ErrorCode::invalid_input, "function size does not match space");
  Vector pi_diag(static_cast<Eigen::Index>(inst.active_rows.size()));
  for (std::size_t i = 0; i < inst.active_rows.size(); ++i)
    pi_diag(static_cast<Eigen::Index>(i)) = values[inst.pi.point_of(static_cast<std::size_t>(inst.active_rows[i]))];
  Matrix d = inst.active_V.adjoint() * (pi_diag.asDiagonal() * inst.active_V);
  for (std::size_t c = 0; c < inst.rho.dim(); ++c)
    d(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) -= values[inst.rho.point_of(c)];
  return d;
}

namespace {

Matrix random_orthonormal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

// Rank-r perturbation whose singular values all equal `level`.
Matrix injected_defect(Eigen::Index dim, Eigen::Index rank, double level, Rng& rng) {
  const Matrix u = random_orthonormal(dim, rank, rng);
  const Matrix w = random_orthonormal(dim, rank, rng);
  return level * u * w.adjoint();
}

constexpr double kQuantizationSlack = 1e-12;

}  // namespace

std::size_t CertificationReport::violations() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.pass; }));
}

std::size_t CertificationReport::exact_violations() const {
  std::size_t n = 0;
  for (const auto& per_space : exact)
    for (const auto& r : per_space) n += r.violations;
  return n;
}

std::size_t CertificationReport::quantization_violations() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.quant_ok; }));
}

std::size_t CertificationReport::isometry_violations() const {
  return static_cast<std::size_t>(
      std::count_if(isometry_defects.begin(), isometry_defects.end(), [](double d) { return !(d <= kIsometryTolerance); }));
}

std::size_t CertificationReport::max_rank() const {
  std::size_t m = 0;
  for (const auto& r : records) m = std::max(m, r.rank);
  return m;
}

bool CertificationReport::within_tight_bound() const {
  return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.rank <= r.tight_bound; });
}

double CertificationReport::pass_rate() const {
  if (records.empty()) return 1.0;
  return static_cast<double>(records.size() - violations()) / static_cast<double>(records.size());
}

bool CertificationReport::all_pass() const {
  return violations() == 0 && exact_violations() == 0 && quantization_violations() == 0 && isometry_violations() == 0;
}

CertificationReport certify_theorem(const std::vector<SpaceInstance>& instances, const RankSchedule& ranks,
                                    const CertifyOptions& options) {
  const Schedule& schedule = ranks.schedule;
  const ValueMode mode = schedule.mode();
  CertificationReport report;
  report.truncation = instances.empty() ? 0 : instances.front().pi.max_multiplicity();
  report.S = ranks.S;

  for (std::size_t s = 0; s < instances.size(); ++s) {
    const SpaceInstance& inst = instances[s];
    if (inst.hierarchy.depth() != schedule.depth()) throw Error(ErrorCode::invalid_input, "hierarchy depth does not match schedule");
    report.isometry_defects.push_back(inst.isometry_defect);
    std::vector<ExactDefectReport> exact;

    for (std::size_t k = 1; k <= schedule.depth(); ++k) {
      const ScheduleLevel& lv = schedule.level(k);
      exact.push_back(exact_defect_check(inst.isometry, inst.pi, inst.rho, inst.hierarchy, k, options.exact_trials,
                                         derive_seed(options.seed, {s}), ranks.s_bound(k)));

      const auto samples = sample_lipschitz(inst.space, lv.lipschitz, options.samples, derive_seed(options.seed, {s, k}), mode);
      Rng inject_rng(derive_seed(options.seed, {s, k, 0x696e6a}));
      const Partition& cells = inst.hierarchy.block(k);

      for (std::size_t i = 0; i < samples.size(); ++i) {
        const ScalarFunction& f = samples[i];
        CertificationRecord rec;
        rec.space = s;
        rec.k = k;
        rec.sample = i;
        rec.lipschitz = lv.lipschitz;
        rec.measured_lipschitz = lipschitz_constant(f.values, inst.space);
        rec.tolerance = 2.0 * lv.eps;
        rec.bound = 2 * k * ranks.s_bound(k);
        rec.tight_bound = k * ranks.s_bound(k);
        rec.dim_E = inst.isometry.rho_e_dims.at(k - 1);

        Matrix d = function_defect(inst, f.values);
        if (options.inject_defect) {
          const auto dim = d.rows();
          const auto r = std::min<Eigen::Index>(static_cast<Eigen::Index>(rec.bound + 5), dim);
          const double level = rec.tolerance + operator_norm(d) + 1.0;
          d += injected_defect(dim, r, level, inject_rng);
        }
        const EpsRankResult er = eps_rank(d, rec.tolerance);
        rec.rank = er.rank;
        rec.pass = rec.rank <= rec.bound;
        rec.sv_head.assign(er.singular_values.begin(),
                           er.singular_values.begin() + static_cast<std::ptrdiff_t>(std::min(options.sv_head, er.singular_values.size())));

        const Quantization q = quantize(f, cells, lv.K, mode);
        rec.quant_error = q.sup_error;
        rec.quant_bound = q.guaranteed_bound;
        rec.quant_ok = q.simple.cell_of == cells.cell_of && q.guaranteed_bound < lv.eps &&
                       q.sup_error <= q.guaranteed_bound + kQuantizationSlack;
        report.records.push_back(std::move(rec));
      }
    }
    report.exact.push_back(std::move(exact));
  }
  return report;
}

nlohmann::json summary_json(const CertificationReport& report) {
  std::size_t trials = 0;
  for (const auto& per_space : report.exact)
    for (const auto& r : per_space) trials += r.trials.size();
  double max_defect = 0.0;
  for (double d : report.isometry_defects) max_defect = std::max(max_defect, d);
  return {{"truncation", report.truncation},
          {"records", report.records.size()},
          {"violations", report.violations()},
          {"pass_rate", report.pass_rate()},
          {"max_rank", report.max_rank()},
          {"within_tight_bound", report.within_tight_bound()},
          {"quantization_violations", report.quantization_violations()},
          {"exact_trials", trials},
          {"exact_violations", report.exact_violations()},
          {"max_isometry_defect", max_defect},
          {"isometry_violations", report.isometry_violations()},
          {"all_pass", report.all_pass()}};
}

nlohmann::json to_json(const CertificationReport& report) {
  nlohmann::json j;
  j["summary"] = summary_json(report);
  j["S"] = report.S;
  j["isometry_defects"] = report.isometry_defects;
  auto& exact = j["exact_defect"] = nlohmann::json::array();
  for (std::size_t s = 0; s < report.exact.size(); ++s) {
    for (const auto& r : report.exact[s]) {
      std::vector<std::size_t> rank_list;
      for (const auto& t : r.trials) rank_list.push_back(t.rank);
      exact.push_back({{"space", s},
                       {"k", r.k},
                       {"dim_E", r.dim_E},
                       {"bound", r.bound},
                       {"max_rank", rank_list.empty() ? 0 : *std::max_element(rank_list.begin(), rank_list.end())},
                       {"violations", r.violations},
                       {"ranks", rank_list}});
    }
  }
  auto& recs = j["records"] = nlohmann::json::array();
  for (const auto& r : report.records) {
    recs.push_back({{"space", r.space},
                    {"k", r.k},
                    {"sample", r.sample},
                    {"L", r.lipschitz},
                    {"L_measured", r.measured_lipschitz},
                    {"tolerance", r.tolerance},
                    {"rank", r.rank},
                    {"bound", r.bound},
                    {"tight_bound", r.tight_bound},
                    {"dim_E", r.dim_E},
                    {"pass", r.pass},
                    {"sv_head", r.sv_head},
                    {"quant_error", r.quant_error},
                    {"quant_bound", r.quant_bound},
                    {"quant_ok", r.quant_ok}});
  }
  return j;
}

}  // namespace wvn
