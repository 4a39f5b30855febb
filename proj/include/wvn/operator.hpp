#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wvn/metric.hpp"

namespace wvn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kIsometryTolerance = 1e-9;
/// Singular-value cutoff for "exact" ranks of defects that vanish in exact arithmetic.
inline constexpr double kExactRankCutoff = 1e-8;

/// A multiplication representation of C(X): point x acts on m(x) coordinate
/// slots, laid out contiguously in point order.
///
/// Every representation of C(X) for finite X is unitarily equivalent to one
/// of these, so nothing is lost by working with this normal form.
class RepresentationModel {
 public:
  RepresentationModel() = default;
  explicit RepresentationModel(std::vector<std::size_t> multiplicity);

  static RepresentationModel uniform(std::size_t points, std::size_t multiplicity);

  std::size_t points() const noexcept { return multiplicity_.size(); }
  std::size_t dim() const noexcept { return offset_.empty() ? 0 : offset_.back(); }
  std::size_t multiplicity(std::size_t x) const { return multiplicity_.at(x); }
  const std::vector<std::size_t>& multiplicities() const noexcept { return multiplicity_; }
  std::size_t max_multiplicity() const noexcept;

  /// First coordinate of x's slot range; the range is [slot_begin, slot_begin + m(x)).
  std::size_t slot_begin(std::size_t x) const { return offset_.at(x); }
  /// Coordinate of x's j-th copy (0-based j < m(x)).
  std::size_t slot(std::size_t x, std::size_t j) const { return offset_.at(x) + j; }
  /// Point owning a coordinate.
  std::size_t point_of(std::size_t coordinate) const { return owner_.at(coordinate); }

 private:
  std::vector<std::size_t> multiplicity_;
  std::vector<std::size_t> offset_;
  std::vector<std::size_t> owner_;
};

/// Diagonal operator acting as values[x] on the slots of x.
Matrix mult_operator(const RepresentationModel& rep, std::span<const Complex> values);

/// Orthogonal projection onto the slots of the given points.
Matrix spectral_projection(const RepresentationModel& rep, std::span<const std::size_t> cell);

struct EpsRankResult {
  double eps = 0.0;
  std::size_t rank = 0;
  std::vector<double> singular_values;  // descending
};

std::vector<double> singular_values(const Matrix& a);

/// Number of singular values strictly above eps, i.e. the least rank of an
/// operator within eps of `a` in operator norm.
EpsRankResult eps_rank(const Matrix& a, double eps);

/// The rank-`eps_rank` truncated SVD of `a`; ||a - witness|| <= eps.
Matrix truncation_witness(const Matrix& a, double eps);

double operator_norm(const Matrix& a);

/// ||V*V - I|| in operator norm.
double isometry_defect(const Matrix& v);

/// V* A V. Throws on dimension mismatch or when V is not an isometry.
Matrix compress(const Matrix& v, const Matrix& a);

}  // namespace wvn
