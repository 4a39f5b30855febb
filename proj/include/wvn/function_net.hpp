#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wvn/metric.hpp"
#include "wvn/partition.hpp"

namespace wvn {

using Complex = std::complex<double>;
using BigInt = boost::multiprecision::cpp_int;

/// Relative slack for Lipschitz checks, absorbing last-ulp rounding.
inline constexpr double kLipschitzSlack = 1e-12;

/// A function on the points of a space, claimed to lie in C_L(X).
struct ScalarFunction {
  std::vector<Complex> values;  // aligned with the space's point order
  double claimed_lipschitz = 0.0;
  double sup_bound = 1.0;
};

/// max |f(x) - f(y)| / d(x, y) over distinct pairs; 0 for a single point.
double lipschitz_constant(std::span<const Complex> values, const FiniteMetricSpace& space);

/// |f(x)-f(y)| <= L d(x,y) on every pair and max |f| <= sup_bound.
bool satisfies_invariants(const ScalarFunction& f, const FiniteMetricSpace& space);

struct QuantizationParams {
  double eps1 = 0.0;  // +infinity when L == 0: any partition works
  std::uint64_t K = 1;
};

/// Smallest K >= ceil(2c/eps) with c/K + L*eps1 < eps.
std::uint64_t quantization_grid(double lipschitz, double eps, double eps1, ValueMode mode = ValueMode::real);

/// eps1 = eps / (2L) and K from `quantization_grid`. Requires 0 < eps <= 2.
QuantizationParams quantization_params(double lipschitz, double eps, ValueMode mode = ValueMode::real);

/// Cellwise-constant function with values on the grid {a/K} (real) or
/// {(a + ib)/K} (complex), a, b in [-K, K].
struct SimpleFunction {
  std::vector<std::size_t> cell_of;
  std::vector<Complex> cell_values;
  std::vector<std::pair<int, int>> grid_index;  // (a, b) per cell; b == 0 in real mode
  std::uint64_t K = 1;
  ValueMode mode = ValueMode::real;

  Complex operator()(std::size_t point) const { return cell_values[cell_of[point]]; }
  std::vector<Complex> values() const;
};

struct Quantization {
  SimpleFunction simple;
  double sup_error = 0.0;         // measured over every point
  double guaranteed_bound = 0.0;  // c/K + L * radius_bound
};

/// Rounds f at each cell centre to the nearest grid value (ties toward the
/// smaller grid index). Real mode rounds the real part only.
Quantization quantize(const ScalarFunction& f, const Partition& partition, std::uint64_t K, ValueMode mode);

struct NetSize {
  BigInt exact;              // (2K+1)^M real, ((2K+1)^2)^M complex
  BigInt nonnegative_grid;   // (K+1)^M: grid {0..K}/K
  BigInt stated_formula;     // M^(K+1)
};

NetSize net_size(std::size_t cells, std::uint64_t K, ValueMode mode);

/// Clamped min-extensions f(x) = clamp(min_p (v_p + L d(x,p)), -1, 1) from a
/// random anchor set. Complex mode combines two real draws as (g + ih)/sqrt2.
std::vector<ScalarFunction> sample_lipschitz(const FiniteMetricSpace& space, double lipschitz, std::size_t count,
                                             std::uint64_t seed, ValueMode mode);

}  // namespace wvn
