#include "wvn/operator.hpp"

#include <algorithm>

namespace wvn {

RepresentationModel::RepresentationModel(std::vector<std::size_t> multiplicity) : multiplicity_(std::move(multiplicity)) {
  if (multiplicity_.empty()) throw Error(ErrorCode::invalid_input, "representation needs at least one point");
  offset_.reserve(multiplicity_.size() + 1);
  offset_.push_back(0);
  for (std::size_t x = 0; x < multiplicity_.size(); ++x) {
    if (multiplicity_[x] == 0) throw Error(ErrorCode::invalid_input, "multiplicities must be >= 1");
    offset_.push_back(offset_.back() + multiplicity_[x]);
    owner_.insert(owner_.end(), multiplicity_[x], x);
  }
}

RepresentationModel RepresentationModel::uniform(std::size_t points, std::size_t multiplicity) {
  return RepresentationModel(std::vector<std::size_t>(points, multiplicity));
}

std::size_t RepresentationModel::max_multiplicity() const noexcept {
  return multiplicity_.empty() ? 0 : *std::max_element(multiplicity_.begin(), multiplicity_.end());
}

Matrix mult_operator(const RepresentationModel& rep, std::span<const Complex> values) {
  if (values.size() != rep.points()) throw Error(ErrorCode::invalid_input, "mult_operator: value count does not match points");
  Vector diag(static_cast<Eigen::Index>(rep.dim()));
  for (std::size_t c = 0; c < rep.dim(); ++c) diag(static_cast<Eigen::Index>(c)) = values[rep.point_of(c)];
  return diag.asDiagonal();
}

Matrix spectral_projection(const RepresentationModel& rep, std::span<const std::size_t> cell) {
  const auto n = static_cast<Eigen::Index>(rep.dim());
  Matrix p = Matrix::Zero(n, n);
  for (std::size_t x : cell) {
    if (x >= rep.points()) throw Error(ErrorCode::invalid_input, "spectral_projection: point out of range");
    for (std::size_t j = 0; j < rep.multiplicity(x); ++j) {
      const auto s = static_cast<Eigen::Index>(rep.slot(x, j));
      p(s, s) = 1.0;
    }
  }
  return p;
}

std::vector<double> singular_values(const Matrix& a) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

EpsRankResult eps_rank(const Matrix& a, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_input, "eps_rank needs eps > 0");
  EpsRankResult r;
  r.eps = eps;
  r.singular_values = singular_values(a);
  r.rank = static_cast<std::size_t>(
      std::count_if(r.singular_values.begin(), r.singular_values.end(), [eps](double s) { return s > eps; }));
  return r;
}

Matrix truncation_witness(const Matrix& a, double eps) {
  if (a.size() == 0) return a;
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > eps) ++r;
  return svd.matrixU().leftCols(r) * s.head(r).cast<Complex>().asDiagonal() * svd.matrixV().leftCols(r).adjoint();
}

double operator_norm(const Matrix& a) {
  const auto s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

double isometry_defect(const Matrix& v) {
  const Matrix gram = v.adjoint() * v;
  return operator_norm(gram - Matrix::Identity(gram.rows(), gram.cols()));
}

Matrix compress(const Matrix& v, const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() != v.rows())
    throw Error(ErrorCode::invalid_input, "compress: operator and isometry dimensions do not conform");
  if (isometry_defect(v) > kIsometryTolerance) throw Error(ErrorCode::precondition, "compress: V is not an isometry");
  return v.adjoint() * a * v;
}

}  // namespace wvn
