#pragma once

// Exact rationals (GMP) and the dual exact/approximate value type used by
// every computation that can run in either arithmetic mode.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sievelab {

using Rational = mpq_class;
using Integer = mpz_class;

enum class Mode { exact, floating };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

Integer to_integer(__int128 value);
Rational to_rational(__int128 num, __int128 den = 1);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

/// Accepts "p/q", a plain integer, or a finite decimal such as "-1.25".
Rational parse_rational(std::string_view text);

/// Round-to-nearest conversion (mpq_get_d truncates).
double to_double(const Rational& value);

/// A value that always carries a double approximation and, when computed in
/// exact mode, the exact rational it approximates. Arithmetic keeps the exact
/// part only while both operands have one.
class Number {
 public:
  Number() = default;
  explicit Number(double approx) : approx_(approx) {}
  explicit Number(Rational exact)
      : approx_(to_double(exact)), exact_(std::move(exact)) {}

  bool is_exact() const { return exact_.has_value(); }
  double approx() const { return approx_; }
  const Rational& exact() const;

  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  friend Number operator-(const Number& a);
  friend Number abs(const Number& a);

  /// Exact equality when both sides are exact, bitwise double equality otherwise.
  friend bool operator==(const Number& a, const Number& b);

  std::string to_string() const;

 private:
  double approx_ = 0.0;
  std::optional<Rational> exact_;
};

}  // namespace sievelab
