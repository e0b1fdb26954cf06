#include "sievelab/number.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sievelab {

std::string_view to_string(Mode mode) {
  return mode == Mode::exact ? "exact" : "float";
}

Mode parse_mode(std::string_view text) {
  if (text == "exact") return Mode::exact;
  if (text == "float") return Mode::floating;
  throw std::invalid_argument("unknown arithmetic mode '" + std::string(text) + "'");
}

Integer to_integer(__int128 value) {
  const bool negative = value < 0;
  unsigned __int128 magnitude =
      negative ? static_cast<unsigned __int128>(-(value + 1)) + 1
               : static_cast<unsigned __int128>(value);
  Integer result(static_cast<unsigned long>(magnitude >> 64));
  result <<= 64;
  result += static_cast<unsigned long>(magnitude & 0xFFFFFFFFFFFFFFFFULL);
  if (negative) result = -result;
  return result;
}

Rational to_rational(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational r(to_integer(num), to_integer(den));
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return std::invalid_argument("not a rational number: '" + s + "'"); };
  if (s.empty()) throw bad();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Integer num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
      throw bad();
    if (den == 0) throw bad();
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const auto frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+" || frac_len == 0) throw bad();
    if (digits[0] == '+') digits.erase(0, 1);
    Integer num;
    if (num.set_str(digits, 10) != 0) throw bad();
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (s[0] == '+') s.erase(0, 1);
  Integer num;
  if (num.set_str(s, 10) != 0) throw bad();
  return Rational(num);
}

double to_double(const Rational& value) {
  // mpq_get_d truncates; pick whichever neighbour is closer.
  const double t = value.get_d();
  if (!std::isfinite(t)) return t;
  const double up = std::nextafter(t, value > 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(up)) return t;
  Rational dt(t), du(up);
  Rational et = abs(Rational(value - dt));
  Rational eu = abs(Rational(value - du));
  return eu < et ? up : t;
}

const Rational& Number::exact() const {
  if (!exact_) throw std::logic_error("Number has no exact value (computed in float mode)");
  return *exact_;
}

Number operator+(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) return Number(Rational(*a.exact_ + *b.exact_));
  return Number(a.approx_ + b.approx_);
}

Number operator-(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) return Number(Rational(*a.exact_ - *b.exact_));
  return Number(a.approx_ - b.approx_);
}

Number operator*(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) return Number(Rational(*a.exact_ * *b.exact_));
  return Number(a.approx_ * b.approx_);
}

Number operator-(const Number& a) {
  if (a.exact_) return Number(Rational(-*a.exact_));
  return Number(-a.approx_);
}

Number abs(const Number& a) {
  if (a.exact_) return Number(Rational(abs(*a.exact_)));
  return Number(std::fabs(a.approx_));
}

bool operator==(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
  if (a.exact_.has_value() != b.exact_.has_value()) return false;
  return a.approx_ == b.approx_ || (std::isnan(a.approx_) && std::isnan(b.approx_));
}

std::string Number::to_string() const {
  if (exact_) return sievelab::to_string(*exact_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", approx_);
  return buf;
}

}  // namespace sievelab
