#include "wvn/function_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wvn/rng.hpp"

namespace wvn {

double lipschitz_constant(std::span<const Complex> values, const FiniteMetricSpace& space) {
  if (values.size() != space.size()) throw Error(ErrorCode::invalid_input, "function size does not match space");
  double best = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j) best = std::max(best, std::abs(values[i] - values[j]) / space(i, j));
  return best;
}

bool satisfies_invariants(const ScalarFunction& f, const FiniteMetricSpace& space) {
  if (f.values.size() != space.size() || !(f.claimed_lipschitz >= 0.0)) return false;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!(std::abs(f.values[i]) <= f.sup_bound * (1.0 + kLipschitzSlack))) return false;
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      const double allowed = f.claimed_lipschitz * space(i, j);
      if (std::abs(f.values[i] - f.values[j]) > allowed + kLipschitzSlack * (1.0 + allowed)) return false;
    }
  }
  return true;
}

std::uint64_t quantization_grid(double lipschitz, double eps, double eps1, ValueMode mode) {
  if (!(eps > 0.0) || !(lipschitz >= 0.0)) throw Error(ErrorCode::invalid_input, "quantization needs eps > 0 and L >= 0");
  const double smooth = lipschitz == 0.0 ? 0.0 : lipschitz * eps1;
  if (!(smooth < eps)) throw Error(ErrorCode::invalid_input, "L*eps1 must be below eps");
  const double c = quantization_constant(mode);
  auto K = static_cast<std::uint64_t>(std::ceil(2.0 * c / eps));
  if (K == 0) K = 1;
  while (!(c / static_cast<double>(K) + smooth < eps)) ++K;
  return K;
}

QuantizationParams quantization_params(double lipschitz, double eps, ValueMode mode) {
  if (!(eps > 0.0) || eps > 2.0) throw Error(ErrorCode::invalid_input, "quantization_params needs 0 < eps <= 2");
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) throw Error(ErrorCode::invalid_input, "Lipschitz constant must be >= 0");
  QuantizationParams q;
  q.eps1 = lipschitz == 0.0 ? std::numeric_limits<double>::infinity() : eps / (2.0 * lipschitz);
  q.K = quantization_grid(lipschitz, eps, q.eps1, mode);
  return q;
}

std::vector<Complex> SimpleFunction::values() const {
  std::vector<Complex> out(cell_of.size());
  for (std::size_t p = 0; p < cell_of.size(); ++p) out[p] = (*this)(p);
  return out;
}

namespace {

// Nearest a in [-K, K] to x*K; halfway cases go to the smaller a.
int nearest_grid_index(double x, std::uint64_t K) {
  const double k = static_cast<double>(K);
  const double a = std::ceil(x * k - 0.5);
  return static_cast<int>(std::clamp(a, -k, k));
}

}  // namespace

Quantization quantize(const ScalarFunction& f, const Partition& partition, std::uint64_t K, ValueMode mode) {
  if (K == 0) throw Error(ErrorCode::invalid_input, "quantize needs K >= 1");
  if (f.values.size() != partition.cell_of.size()) throw Error(ErrorCode::invalid_input, "function/partition size mismatch");
  Quantization q;
  SimpleFunction& s = q.simple;
  s.cell_of = partition.cell_of;
  s.K = K;
  s.mode = mode;
  const double k = static_cast<double>(K);
  for (std::size_t cell = 0; cell < partition.cell_count(); ++cell) {
    const Complex v = f.values[partition.centers[cell]];
    const int a = nearest_grid_index(v.real(), K);
    const int b = mode == ValueMode::complex ? nearest_grid_index(v.imag(), K) : 0;
    s.grid_index.emplace_back(a, b);
    s.cell_values.emplace_back(a / k, b / k);
  }
  for (std::size_t p = 0; p < f.values.size(); ++p) q.sup_error = std::max(q.sup_error, std::abs(f.values[p] - s(p)));
  q.guaranteed_bound = quantization_constant(mode) / k + f.claimed_lipschitz * partition.radius_bound;
  return q;
}

NetSize net_size(std::size_t cells, std::uint64_t K, ValueMode mode) {
  NetSize n;
  const BigInt per_cell = mode == ValueMode::real ? BigInt(2 * K + 1) : BigInt(2 * K + 1) * BigInt(2 * K + 1);
  const auto M = static_cast<unsigned>(cells);
  n.exact = boost::multiprecision::pow(per_cell, M);
  n.nonnegative_grid = boost::multiprecision::pow(BigInt(K + 1), M);
  n.stated_formula = boost::multiprecision::pow(BigInt(cells), static_cast<unsigned>(K + 1));
  return n;
}

namespace {

std::vector<double> min_extension(const FiniteMetricSpace& space, double lipschitz, Rng& rng) {
  const std::size_t n = space.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto anchors = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n)));
  for (std::size_t i = 0; i < anchors; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n - 1)));
    std::swap(order[i], order[j]);
  }
  std::vector<double> anchor_value(anchors);
  for (auto& v : anchor_value) v = rng.uniform(-1.0, 1.0);

  std::vector<double> out(n);
  for (std::size_t x = 0; x < n; ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < anchors; ++a) best = std::min(best, anchor_value[a] + lipschitz * space(x, order[a]));
    out[x] = std::clamp(best, -1.0, 1.0);
  }
  return out;
}

}  // namespace

std::vector<ScalarFunction> sample_lipschitz(const FiniteMetricSpace& space, double lipschitz, std::size_t count,
                                             std::uint64_t seed, ValueMode mode) {
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) throw Error(ErrorCode::invalid_input, "sample_lipschitz needs L >= 0");
  Rng rng(derive_seed(seed, {0x6c697073}));
  std::vector<ScalarFunction> out;
  out.reserve(count);
  const double scale = 1.0 / std::sqrt(2.0);
  while (out.size() < count) {
    ScalarFunction f;
    f.claimed_lipschitz = lipschitz;
    const auto re = min_extension(space, lipschitz, rng);
    if (mode == ValueMode::real) {
      f.values.assign(re.begin(), re.end());
    } else {
      const auto im = min_extension(space, lipschitz, rng);
      f.values.resize(re.size());
      for (std::size_t p = 0; p < re.size(); ++p) f.values[p] = Complex(re[p] * scale, im[p] * scale);
    }
    if (!satisfies_invariants(f, space)) throw Error(ErrorCode::internal, "sampled function failed its Lipschitz certificate");
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace wvn
