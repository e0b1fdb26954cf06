#pragma once

// Autocorrelations C_f(a) = sum_{N < n <= 2N} f(n) f(n - a) of a sieve
// function, their split into the divisor-sum main term and the remainder
// R_f(a), and kernel-weighted sums of either.

#include <cstdint>
#include <vector>

#include "sievelab/arith.hpp"
#include "sievelab/kernels.hpp"
#include "sievelab/number.hpp"

namespace sievelab {

/// C_f(a) read from the table; exact or double depending on mode.
Number correlation_direct(const SieveTable& f, std::int64_t N, std::int64_t a,
                          Mode mode = Mode::exact);

/// #{m : lo < m <= hi, m*d = target (mod q)}. Zero when gcd(d, q) does not
/// divide target.
std::int64_t count_congruence_solutions(std::int64_t d, std::int64_t q, std::int64_t target,
                                        std::int64_t lo, std::int64_t hi);

/// sum_{l | a} sum_{(d,q)=1} g(ld) g(lq) (1/q) (floor(2N/ld) - floor(N/ld)).
/// Throws std::invalid_argument for a = 0.
Rational correlation_main_term(const GFunction& g, std::int64_t N, std::int64_t a);

/// C_f(a) as sum over pairs (d, q) with gcd(d, q) | a of
/// g(d) g(q) #{N < n <= 2N : d | n, n = a (mod q)}, pairs failing the
/// divisibility test being skipped. An independent route to C_f(a).
Rational correlation_by_congruences(const GFunction& g, std::int64_t N, std::int64_t a);

/// R_f(a) = C_f(a) - main term, exactly. Throws for a = 0.
Rational remainder_exact(const GFunction& g, const SieveTable& f, std::int64_t N, std::int64_t a);

/// R_f(a) through the additive-character expansion
///   sum_{l|a} sum_{(d,q)=1} g(ld) g(lq) (1/q) sum_{j=1}^{q-1} e_q(-j a/l) sum_{m ~ N/ld} e_q(jdm),
/// with the inner m-sum taken in closed geometric form over the exact
/// endpoints N/ld < m <= 2N/ld. Throws for a = 0.
double remainder_charsum(const GFunction& g, std::int64_t N, std::int64_t a);

/// C_f(a) for |a| <= a_max, with the optional exact main/remainder split.
class CorrelationTable {
 public:
  std::int64_t N() const { return N_; }
  std::int64_t a_max() const { return a_max_; }
  Mode mode() const { return mode_; }

  const Number& direct(std::int64_t a) const;
  bool has_decomposition() const { return !main_.empty(); }
  const Rational& main(std::int64_t a) const;
  const Rational& remainder(std::int64_t a) const;

 private:
  friend CorrelationTable build_correlation_table(const SieveTable&, std::int64_t, std::int64_t,
                                                  Mode, std::size_t);
  friend void decompose(CorrelationTable&, const GFunction&, std::size_t);
  std::size_t index(std::int64_t a) const;

  std::int64_t N_ = 0;
  std::int64_t a_max_ = 0;
  Mode mode_ = Mode::exact;
  std::vector<Number> direct_;
  std::vector<Rational> main_;       // index(a); a = 0 slot unused
  std::vector<Rational> remainder_;  // index(a); a = 0 slot unused
};

/// All lags |a| <= a_max. Lags are split across workers; each lag is summed
/// in a fixed block order, so the values do not depend on the worker count.
CorrelationTable build_correlation_table(const SieveTable& f, std::int64_t N, std::int64_t a_max,
                                         Mode mode = Mode::exact, std::size_t workers = 1);

/// Fills main[a] and remainder[a] = direct[a] - main[a] for every a != 0.
/// Exact tables only.
void decompose(CorrelationTable& table, const GFunction& g, std::size_t workers = 1);

/// sum_{|a| <= 2h} k(a) C_f(a). Needs a_max >= 2h.
Number weighted_corr_sum(const CorrelationTable& table, const KernelSpec& k);

struct WeightedRemainder {
  Rational off_diagonal;  // sum_{0 < |a| <= 2h} K(a) R_f(a)
  Rational diagonal;      // K(0) C_f(0) = 2h C_f(0)
  Rational total() const { return off_diagonal + diagonal; }
};

WeightedRemainder weighted_remainder_sum(const GFunction& g, const SieveTable& f, std::int64_t N,
                                         const KernelSpec& k);

/// The off-diagonal part through the character form
///   sum_{l <= 2h} sum_{(d,q)=1} g(ld) g(lq) (1/q) sum_{j=1}^{q-1}
///     sum_{m ~ N/ld} cos(2 pi j d m / q) sum_{b != 0} K(b l) e_q(j b).
double weighted_remainder_charsum(const GFunction& g, std::int64_t N, const KernelSpec& k);

}  // namespace sievelab
