#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "wvn/function_net.hpp"
#include "wvn/isometry.hpp"

namespace wvn {

/// Everything built for one space: hierarchy, both representations, their
/// diagonalizing bases and the covering isometry.
struct SpaceInstance {
  FiniteMetricSpace space;
  PartitionHierarchy hierarchy;
  RepresentationModel rho;
  RepresentationModel pi;
  DiagonalizingBasis rho_basis;
  DiagonalizingBasis pi_basis;
  CoveringIsometry isometry;
  double isometry_defect = 0.0;
  // Rows of V that are not identically zero, and V restricted to them.
  std::vector<Eigen::Index> active_rows;
  Matrix active_V;
};

/// m(x) uniform in {1..max_multiplicity}.
std::vector<std::size_t> random_multiplicities(std::size_t points, std::size_t max_multiplicity, std::uint64_t seed);

/// rho uses the given multiplicities and the spread seed; pi has uniform
/// multiplicity `truncation`.
SpaceInstance build_instance(const FiniteMetricSpace& space, PartitionHierarchy hierarchy,
                             std::vector<std::size_t> rho_multiplicity, std::size_t truncation);

/// V* pi(f) V - rho(f).
Matrix function_defect(const SpaceInstance& instance, std::span<const Complex> values);

struct CertifyOptions {
  std::size_t samples = 200;
  std::size_t exact_trials = 50;
  std::uint64_t seed = 0;
  bool inject_defect = false;
  std::size_t sv_head = 5;
};

struct CertificationRecord {
  std::size_t space = 0;
  std::size_t k = 0;
  std::size_t sample = 0;
  double lipschitz = 0.0;           // L_k, the class sampled from
  double measured_lipschitz = 0.0;
  double tolerance = 0.0;           // 2 eps_k
  std::size_t rank = 0;
  std::size_t bound = 0;            // 2 k S_k
  std::size_t tight_bound = 0;      // k S_k
  std::size_t dim_E = 0;
  bool pass = true;                 // rank <= bound
  std::vector<double> sv_head;
  double quant_error = 0.0;
  double quant_bound = 0.0;
  bool quant_ok = true;
};

struct CertificationReport {
  std::size_t truncation = 0;
  std::vector<std::size_t> S;
  std::vector<CertificationRecord> records;
  std::vector<std::vector<ExactDefectReport>> exact;  // [space][k - 1]
  std::vector<double> isometry_defects;

  std::size_t violations() const;
  std::size_t exact_violations() const;
  std::size_t quantization_violations() const;
  std::size_t isometry_violations() const;
  std::size_t max_rank() const;
  bool within_tight_bound() const;
  double pass_rate() const;
  bool all_pass() const;
};

/// For every space and level k: samples f in C_{L_k}(X), certifies
/// eps_rank(V* pi(f) V - rho(f), 2 eps_k) <= 2 k S_k, re-checks the
/// quantization path, and runs the exact-defect check on A_k.
/// With `inject_defect` a rank-(bound + 5) perturbation is added to each
/// defect before its rank is taken.
CertificationReport certify_theorem(const std::vector<SpaceInstance>& instances, const RankSchedule& ranks,
                                    const CertifyOptions& options);

nlohmann::json summary_json(const CertificationReport& report);
nlohmann::json to_json(const CertificationReport& report);

}  // namespace wvn
