#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wvn/error.hpp"

namespace wvn {

/// Absolute slack allowed in the triangle inequality check.
inline constexpr double kTriangleTolerance = 1e-12;

/// Largest space `min_net_exact` will search exhaustively.
inline constexpr std::size_t kExactNetBudget = 20;

struct MetricViolation {
  enum class Kind { not_square, non_finite, negative, nonzero_diagonal, coincident, asymmetric, triangle };

  Kind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;  // only meaningful for triangle violations

  std::string describe() const;
};

class MetricError : public Error {
 public:
  explicit MetricError(std::vector<MetricViolation> violations);

  const std::vector<MetricViolation>& violations() const noexcept { return violations_; }

 private:
  std::vector<MetricViolation> violations_;
};

/// A finite set of labelled points with a validated distance matrix.
///
/// Instances are only produced through `validate_metric` (or derived from a
/// validated space), so the metric axioms hold for every live object.
class FiniteMetricSpace {
 public:
  std::size_t size() const noexcept { return labels_.size(); }
  double distance(std::size_t i, std::size_t j) const noexcept { return dist_[i * size() + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return distance(i, j); }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::vector<std::vector<double>> rows() const;

  double diameter() const;

  /// Induced metric on the given points, in the given order.
  FiniteMetricSpace subspace(std::span<const std::size_t> points) const;

  friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

 private:
  friend FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>&, std::vector<std::string>);

  std::vector<std::string> labels_;
  std::vector<double> dist_;
};

/// Lists every violated axiom. Empty result means the matrix is a metric.
std::vector<MetricViolation> check_metric(const std::vector<std::vector<double>>& raw);

/// Throws MetricError listing all violations. Labels default to "0", "1", ...
FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& raw, std::vector<std::string> labels = {});

enum class NetMethod { exact, greedy };

const char* to_string(NetMethod method) noexcept;
NetMethod net_method_from_string(const std::string& name);

struct EpsNet {
  double radius = 0.0;
  std::vector<std::size_t> members;
  /// point index -> position in `members`
  std::vector<std::size_t> assignment;

  std::size_t size() const noexcept { return members.size(); }
};

/// Nearest member (as a position in `members`) for every point; equidistant
/// members resolve to the lowest point index.
std::vector<std::size_t> assign_nearest(const FiniteMetricSpace& space, std::span<const std::size_t> members);

/// Checks the net invariants exactly against the space's distances.
bool verify_net(const FiniteMetricSpace& space, const EpsNet& net);

/// Minimum-cardinality closed-ball eps-net by exhaustive search. Among the
/// minimum nets the lexicographically smallest member set is returned.
EpsNet min_net_exact(const FiniteMetricSpace& space, double eps);

/// Farthest-point greedy net seeded at point 0; ties go to the lowest index.
EpsNet greedy_net(const FiniteMetricSpace& space, double eps);

EpsNet compute_net(const FiniteMetricSpace& space, double eps, NetMethod method);

struct SpaceFamily {
  std::vector<FiniteMetricSpace> spaces;
  std::string kind;
};

struct AdmissibilityEntry {
  double eps = 0.0;
  std::size_t bound = 0;
  NetMethod method = NetMethod::greedy;
  std::vector<EpsNet> witnesses;  // one per space
};

struct AdmissibilityProfile {
  std::vector<AdmissibilityEntry> entries;
};

AdmissibilityProfile admissibility_profile(const SpaceFamily& family, std::span<const double> eps_list,
                                           NetMethod method);

}  // namespace wvn
