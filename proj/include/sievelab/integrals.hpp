#pragma once

// Selberg integral J_f(N,h) and symmetry integral I_f(N,h) over x in [N, 2N].
//
// Both integrands are step functions of x. For x in the open interval
// (m, m+1) the integers n with |n - x| <= h are exactly m-h+1, ..., m+h, and
// none of them equals x, so
//   sum_{0 < |n-x| <= h} f(n)       = sum_{n=m-h+1}^{m+h} f(n),
//   sum_{|n-x| <= h} sgn(n-x) f(n) = sum_{n=m+1}^{m+h} f(n) - sum_{n=m-h+1}^{m} f(n).
// The integer points x = m form a null set, so each integral is the finite
// sum over m = N, ..., 2N-1 of the squared window value. quadrature_oracle
// evaluates the literal definitions instead and is used to check this.

#include <cstdint>
#include <optional>
#include <string_view>

#include "sievelab/arith.hpp"
#include "sievelab/number.hpp"

namespace sievelab {

enum class IntegralKind { selberg, symmetry };

std::string_view to_string(IntegralKind kind);

struct IntegralResult {
  IntegralKind kind = IntegralKind::selberg;
  Number value;
  std::int64_t N = 0;
  std::int64_t h = 0;
  std::optional<Number> mean_used;  // selberg only
  bool q_exceeds_n = false;         // Q > N: computed, but outside the usual regime
};

/// Exact when mode is exact (needs mean.is_exact()); double accumulation otherwise.
IntegralResult selberg_integral(const SieveTable& f, std::int64_t N, std::int64_t h,
                                const Number& mean, Mode mode = Mode::exact);
IntegralResult selberg_integral(const SieveTable& f, std::int64_t N, std::int64_t h,
                                const Rational& mean);

IntegralResult symmetry_integral(const SieveTable& f, std::int64_t N, std::int64_t h,
                                 Mode mode = Mode::exact);

/// Midpoint sampling of the literal integrand at samples_per_unit points per
/// unit interval, in exact arithmetic. `mean` is ignored for symmetry.
Rational quadrature_oracle(const SieveTable& f, std::int64_t N, std::int64_t h, IntegralKind kind,
                           const Rational& mean, std::int64_t samples_per_unit);

}  // namespace sievelab
