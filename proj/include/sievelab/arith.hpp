#pragma once

// Sieve seeds g, the sieve functions f = g * 1 they generate, and the
// elementary aggregates of f (dyadic sums, expected window mean).

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sievelab/number.hpp"

namespace sievelab {

enum class GPreset { delta1, ones, moebius, random_bounded, custom };

std::string_view to_string(GPreset preset);
/// Accepts the four named presets; throws std::invalid_argument otherwise.
GPreset parse_preset(std::string_view text);

/// A finitely supported seed g on [1, Q]. Values are stored as integer
/// numerators over one common denominator so that sieving and correlation
/// sums stay in machine integers.
class GFunction {
 public:
  /// values[0] is g(1). The common denominator must fit in 64 bits.
  static GFunction from_values(std::span<const Rational> values);

  std::int64_t support_bound() const { return static_cast<std::int64_t>(num_.size()); }
  Rational value(std::int64_t q) const;
  std::int64_t numerator(std::int64_t q) const {
    return q >= 1 && q <= support_bound() ? num_[static_cast<std::size_t>(q - 1)] : 0;
  }
  std::int64_t denominator() const { return den_; }
  std::span<const std::int64_t> numerators() const { return num_; }

  GPreset preset() const { return preset_; }
  const std::optional<std::uint64_t>& seed() const { return seed_; }
  /// Declared bound B with |g(q)| <= B for every q.
  const Rational& bound() const { return bound_; }

  friend bool operator==(const GFunction& a, const GFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_ && a.preset_ == b.preset_ &&
           a.seed_ == b.seed_ && a.bound_ == b.bound_;
  }

 private:
  friend GFunction make_g(GPreset, std::int64_t, std::optional<std::uint64_t>,
                          std::optional<Rational>);
  std::vector<std::int64_t> num_;
  std::int64_t den_ = 1;
  GPreset preset_ = GPreset::custom;
  std::optional<std::uint64_t> seed_;
  Rational bound_;
};

/// Builds one of the named presets. `seed` is required for random_bounded
/// and rejected otherwise; `bound` (default 1) only applies to random_bounded,
/// whose values are drawn uniformly from {-floor(B), ..., floor(B)}.
GFunction make_g(GPreset preset, std::int64_t Q, std::optional<std::uint64_t> seed = {},
                 std::optional<Rational> bound = {});

/// Moebius function mu(1..n) by a linear sieve; index 0 is unused.
std::vector<std::int8_t> moebius_upto(std::int64_t n);

/// f(n) = sum_{d | n, d <= Q} g(d) on [lo, hi].
class SieveTable {
 public:
  SieveTable(GFunction g, std::int64_t lo, std::int64_t hi, std::vector<std::int64_t> numerators);

  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return hi_; }
  bool covers(std::int64_t from, std::int64_t to) const { return from >= lo_ && to <= hi_; }
  /// Throws std::out_of_range naming `what` if [from, to] is not covered.
  void require(std::int64_t from, std::int64_t to, std::string_view what) const;

  Rational value(std::int64_t n) const;
  std::int64_t numerator(std::int64_t n) const { return num_[static_cast<std::size_t>(n - lo_)]; }
  std::int64_t denominator() const { return g_.denominator(); }
  std::span<const std::int64_t> numerators() const { return num_; }
  std::vector<double> as_doubles() const;

  /// max |f(n)| over the whole table.
  const Rational& sup_norm() const { return sup_; }
  /// max |f(n)| over [from, to] (clipped to the table).
  Rational sup_norm(std::int64_t from, std::int64_t to) const;

  const GFunction& g() const { return g_; }

 private:
  GFunction g_;
  std::int64_t lo_;
  std::int64_t hi_;
  std::vector<std::int64_t> num_;
  Rational sup_;
};

/// Multiples sweep: for every d <= Q add g(d) to each multiple of d in range.
/// With workers > 1 the range is split into disjoint blocks sieved
/// independently; the result does not depend on the split.
SieveTable sieve_f(const GFunction& g, std::int64_t lo, std::int64_t hi, std::size_t workers = 1);

/// M_f(2h) = 2h * sum_{d <= Q} g(d)/d.
Rational mean_value(const GFunction& g, std::int64_t h);
double mean_value_float(const GFunction& g, std::int64_t h);

/// sum_{N < n <= 2N} f(n) read from the table.
Rational dyadic_sum(const SieveTable& f, std::int64_t N);
/// The same sum through sum_d g(d) (floor(2N/d) - floor(N/d)).
Rational dyadic_sum_closed(const GFunction& g, std::int64_t N);

/// Sizes of one experiment cell and the exponents they realise.
struct ScaleParams {
  std::int64_t N = 0;
  std::int64_t h = 0;
  std::int64_t Q = 0;
  double theta = 0.0;   // log h / log N
  double lambda = 0.0;  // log Q / log N

  /// h = floor(N^theta + 1/2), Q = floor(N^lambda + 1/2); theta/lambda are
  /// re-derived from the rounded sizes.
  static ScaleParams from_exponents(std::int64_t N, double theta, double lambda);
  static ScaleParams from_sizes(std::int64_t N, std::int64_t h, std::int64_t Q);

  /// 1 <= h, 4h < N, 1 <= Q <= 2N. Throws std::invalid_argument.
  void validate() const;
};

}  // namespace sievelab
