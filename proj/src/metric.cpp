#include "wvn/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

namespace wvn {

namespace {

constexpr std::size_t kMaxTriangleWitnesses = 64;

std::string join_violations(const std::vector<MetricViolation>& violations) {
  std::ostringstream out;
  out << "invalid metric:";
  const std::size_t shown = std::min<std::size_t>(violations.size(), 8);
  for (std::size_t v = 0; v < shown; ++v) out << (v ? "; " : " ") << violations[v].describe();
  if (violations.size() > shown) out << "; ... (" << violations.size() << " total)";
  return out.str();
}

void require_positive_radius(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::invalid_input, "net radius must be positive and finite");
}

}  // namespace

std::vector<std::size_t> assign_nearest(const FiniteMetricSpace& space, std::span<const std::size_t> members) {
  std::vector<std::size_t> assignment(space.size(), 0);
  for (std::size_t p = 0; p < space.size(); ++p) {
    double best = space(p, members[0]);
    for (std::size_t m = 1; m < members.size(); ++m) {
      const double d = space(p, members[m]);
      if (d < best || (d == best && members[m] < members[assignment[p]])) {
        best = d;
        assignment[p] = m;
      }
    }
  }
  return assignment;
}

std::string MetricViolation::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::not_square: out << "matrix is not square (row " << i << ")"; break;
    case Kind::non_finite: out << "non-finite entry at (" << i << "," << j << ")"; break;
    case Kind::negative: out << "negative entry at (" << i << "," << j << ")"; break;
    case Kind::nonzero_diagonal: out << "nonzero diagonal at (" << i << "," << i << ")"; break;
    case Kind::coincident: out << "zero distance between distinct points (" << i << "," << j << ")"; break;
    case Kind::asymmetric: out << "asymmetry at (" << i << "," << j << ")"; break;
    case Kind::triangle: out << "triangle violation d(" << i << "," << k << ") > d(" << i << "," << j << ") + d(" << j << "," << k << ")"; break;
  }
  return out.str();
}

MetricError::MetricError(std::vector<MetricViolation> violations)
    : Error(ErrorCode::invalid_input, join_violations(violations)), violations_(std::move(violations)) {}

std::vector<MetricViolation> check_metric(const std::vector<std::vector<double>>& raw) {
  using Kind = MetricViolation::Kind;
  std::vector<MetricViolation> out;
  const std::size_t n = raw.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i].size() != n) out.push_back({Kind::not_square, i});
  }
  if (!out.empty()) return out;

  bool entries_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = raw[i][j];
      if (!std::isfinite(d)) {
        out.push_back({Kind::non_finite, i, j});
        entries_ok = false;
      } else if (d < 0.0) {
        out.push_back({Kind::negative, i, j});
        entries_ok = false;
      } else if (i == j && d != 0.0) {
        out.push_back({Kind::nonzero_diagonal, i, i});
      } else if (i < j && d == 0.0) {
        out.push_back({Kind::coincident, i, j});
      }
      if (i < j && std::isfinite(d) && std::isfinite(raw[j][i]) && d != raw[j][i]) {
        out.push_back({Kind::asymmetric, i, j});
      }
    }
  }
  if (!entries_ok) return out;

  std::size_t witnesses = 0;
  for (std::size_t i = 0; i < n && witnesses < kMaxTriangleWitnesses; ++i) {
    for (std::size_t j = 0; j < n && witnesses < kMaxTriangleWitnesses; ++j) {
      for (std::size_t k = 0; k < n && witnesses < kMaxTriangleWitnesses; ++k) {
        if (raw[i][k] > raw[i][j] + raw[j][k] + kTriangleTolerance) {
          out.push_back({Kind::triangle, i, j, k});
          ++witnesses;
        }
      }
    }
  }
  return out;
}

FiniteMetricSpace validate_metric(const std::vector<std::vector<double>>& raw, std::vector<std::string> labels) {
  if (raw.empty()) throw Error(ErrorCode::invalid_input, "metric space must contain at least one point");
  auto violations = check_metric(raw);
  if (!violations.empty()) throw MetricError(std::move(violations));

  const std::size_t n = raw.size();
  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw Error(ErrorCode::invalid_input, "label count does not match matrix size");

  FiniteMetricSpace space;
  space.labels_ = std::move(labels);
  space.dist_.reserve(n * n);
  for (const auto& row : raw) space.dist_.insert(space.dist_.end(), row.begin(), row.end());
  return space;
}

std::vector<std::vector<double>> FiniteMetricSpace::rows() const {
  std::vector<std::vector<double>> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i].assign(dist_.begin() + i * size(), dist_.begin() + (i + 1) * size());
  return out;
}

double FiniteMetricSpace::diameter() const {
  return dist_.empty() ? 0.0 : *std::max_element(dist_.begin(), dist_.end());
}

FiniteMetricSpace FiniteMetricSpace::subspace(std::span<const std::size_t> points) const {
  if (points.empty()) throw Error(ErrorCode::invalid_input, "subspace must be non-empty");
  std::vector<std::vector<double>> raw(points.size(), std::vector<double>(points.size()));
  std::vector<std::string> sub_labels;
  sub_labels.reserve(points.size());
  for (std::size_t a = 0; a < points.size(); ++a) {
    if (points[a] >= size()) throw Error(ErrorCode::invalid_input, "subspace point index out of range");
    sub_labels.push_back(labels_[points[a]]);
    for (std::size_t b = 0; b < points.size(); ++b) raw[a][b] = distance(points[a], points[b]);
  }
  return validate_metric(raw, std::move(sub_labels));
}

const char* to_string(NetMethod method) noexcept { return method == NetMethod::exact ? "exact" : "greedy"; }

NetMethod net_method_from_string(const std::string& name) {
  if (name == "exact") return NetMethod::exact;
  if (name == "greedy") return NetMethod::greedy;
  throw Error(ErrorCode::invalid_input, "unknown net method '" + name + "'");
}

bool verify_net(const FiniteMetricSpace& space, const EpsNet& net) {
  if (net.members.empty() || net.assignment.size() != space.size()) return false;
  std::vector<std::size_t> sorted = net.members;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  if (sorted.back() >= space.size()) return false;
  for (std::size_t p = 0; p < space.size(); ++p) {
    if (net.assignment[p] >= net.members.size()) return false;
    if (space(p, net.members[net.assignment[p]]) > net.radius) return false;
  }
  return true;
}

EpsNet min_net_exact(const FiniteMetricSpace& space, double eps) {
  require_positive_radius(eps);
  const std::size_t n = space.size();
  if (n > kExactNetBudget) {
    throw Error(ErrorCode::budget_exceeded,
                "exact net search limited to " + std::to_string(kExactNetBudget) + " points, got " + std::to_string(n));
  }
  std::vector<std::uint32_t> cover(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (space(i, j) <= eps) cover[i] |= std::uint32_t{1} << j;
  const std::uint32_t full = n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;

  // Combinations of each size in lexicographic order.
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      std::uint32_t covered = 0;
      for (std::size_t idx : pick) covered |= cover[idx];
      if (covered == full) {
        EpsNet net{eps, pick, {}};
        net.assignment = assign_nearest(space, net.members);
        return net;
      }
      std::size_t pos = k;
      while (pos > 0 && pick[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++pick[pos - 1];
      for (std::size_t q = pos; q < k; ++q) pick[q] = pick[q - 1] + 1;
    }
  }
  throw Error(ErrorCode::internal, "exhaustive net search found no cover");
}

EpsNet greedy_net(const FiniteMetricSpace& space, double eps) {
  require_positive_radius(eps);
  const std::size_t n = space.size();
  EpsNet net;
  net.radius = eps;
  net.members.push_back(0);
  std::vector<double> gap(n);
  for (std::size_t p = 0; p < n; ++p) gap[p] = space(p, 0);
  while (true) {
    std::size_t far = 0;
    for (std::size_t p = 1; p < n; ++p)
      if (gap[p] > gap[far]) far = p;
    if (gap[far] <= eps) break;
    net.members.push_back(far);
    for (std::size_t p = 0; p < n; ++p) gap[p] = std::min(gap[p], space(p, far));
  }
  net.assignment = assign_nearest(space, net.members);
  return net;
}

EpsNet compute_net(const FiniteMetricSpace& space, double eps, NetMethod method) {
  return method == NetMethod::exact ? min_net_exact(space, eps) : greedy_net(space, eps);
}

AdmissibilityProfile admissibility_profile(const SpaceFamily& family, std::span<const double> eps_list,
                                           NetMethod method) {
  if (family.spaces.empty()) throw Error(ErrorCode::invalid_input, "space family is empty");
  AdmissibilityProfile profile;
  for (double eps : eps_list) {
    AdmissibilityEntry entry;
    entry.eps = eps;
    entry.method = method;
    for (const auto& space : family.spaces) {
      entry.witnesses.push_back(compute_net(space, eps, method));
      entry.bound = std::max(entry.bound, entry.witnesses.back().size());
    }
    profile.entries.push_back(std::move(entry));
  }
  return profile;
}

}  // namespace wvn
