#include "sievelab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "sievelab/parallel.hpp"
#include "sievelab/summation.hpp"

namespace sievelab {

std::string_view to_string(GPreset preset) {
  switch (preset) {
    case GPreset::delta1: return "delta1";
    case GPreset::ones: return "ones";
    case GPreset::moebius: return "moebius";
    case GPreset::random_bounded: return "random_bounded";
    case GPreset::custom: return "custom";
  }
  return "custom";
}

GPreset parse_preset(std::string_view text) {
  if (text == "delta1") return GPreset::delta1;
  if (text == "ones") return GPreset::ones;
  if (text == "moebius") return GPreset::moebius;
  if (text == "random_bounded") return GPreset::random_bounded;
  throw std::invalid_argument("unknown preset '" + std::string(text) + "'");
}

GFunction GFunction::from_values(std::span<const Rational> values) {
  if (values.empty()) throw std::invalid_argument("g needs support bound Q >= 1");
  Integer den = 1;
  for (const auto& v : values) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  if (!den.fits_slong_p()) throw std::invalid_argument("common denominator of g exceeds 64 bits");

  GFunction g;
  g.den_ = den.get_si();
  g.num_.reserve(values.size());
  g.bound_ = 0;
  for (const auto& v : values) {
    Integer n = v.get_num() * (den / v.get_den());
    if (!n.fits_slong_p()) throw std::invalid_argument("scaled value of g exceeds 64 bits");
    g.num_.push_back(n.get_si());
    g.bound_ = std::max(g.bound_, Rational(abs(v)));
  }
  return g;
}

Rational GFunction::value(std::int64_t q) const {
  Rational r(numerator(q), den_);
  r.canonicalize();
  return r;
}

std::vector<std::int8_t> moebius_upto(std::int64_t n) {
  std::vector<std::int8_t> mu(static_cast<std::size_t>(std::max<std::int64_t>(n, 1) + 1), 0);
  std::vector<std::int64_t> primes;
  std::vector<bool> composite(mu.size(), false);
  mu[1] = 1;
  for (std::int64_t i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (std::int64_t p : primes) {
      if (i * p > n) break;
      composite[i * p] = true;
      if (i % p == 0) {
        mu[i * p] = 0;
        break;
      }
      mu[i * p] = static_cast<std::int8_t>(-mu[i]);
    }
  }
  return mu;
}

namespace {

// Uniform integer in [0, span) by rejection; independent of the standard
// library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t span) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % span;
  }
}

}  // namespace

GFunction make_g(GPreset preset, std::int64_t Q, std::optional<std::uint64_t> seed,
                 std::optional<Rational> bound) {
  if (Q < 1) throw std::invalid_argument("support bound Q must be >= 1, got " + std::to_string(Q));
  if (preset == GPreset::custom)
    throw std::invalid_argument("custom g must be built with GFunction::from_values");
  if (preset == GPreset::random_bounded && !seed)
    throw std::invalid_argument("preset random_bounded requires a seed");
  if (preset != GPreset::random_bounded && seed)
    throw std::invalid_argument("a seed is only accepted for preset random_bounded");
  if (preset != GPreset::random_bounded && bound)
    throw std::invalid_argument("a bound is only accepted for preset random_bounded");

  GFunction g;
  g.preset_ = preset;
  g.seed_ = seed;
  g.num_.assign(static_cast<std::size_t>(Q), 0);
  g.bound_ = 1;

  switch (preset) {
    case GPreset::delta1:
      g.num_[0] = 1;
      break;
    case GPreset::ones:
      std::fill(g.num_.begin(), g.num_.end(), 1);
      break;
    case GPreset::moebius: {
      const auto mu = moebius_upto(Q);
      for (std::int64_t q = 1; q <= Q; ++q) g.num_[q - 1] = mu[q];
      break;
    }
    case GPreset::random_bounded: {
      const Rational b = bound.value_or(Rational(1));
      if (b < 0) throw std::invalid_argument("bound must be non-negative");
      Integer fl;
      mpz_fdiv_q(fl.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
      if (!fl.fits_slong_p() || fl.get_si() > (std::int64_t{1} << 40))
        throw std::invalid_argument("bound too large");
      const std::int64_t B = fl.get_si();
      g.bound_ = b;
      std::mt19937_64 rng(*seed);
      const auto span = static_cast<std::uint64_t>(2 * B + 1);
      for (auto& v : g.num_) v = static_cast<std::int64_t>(uniform_below(rng, span)) - B;
      break;
    }
    case GPreset::custom:
      break;
  }
  return g;
}

SieveTable::SieveTable(GFunction g, std::int64_t lo, std::int64_t hi,
                       std::vector<std::int64_t> numerators)
    : g_(std::move(g)), lo_(lo), hi_(hi), num_(std::move(numerators)) {
  if (static_cast<std::int64_t>(num_.size()) != hi_ - lo_ + 1)
    throw std::invalid_argument("sieve table size does not match its range");
  std::int64_t m = 0;
  for (auto v : num_) m = std::max(m, v < 0 ? -v : v);
  sup_ = Rational(m, g_.denominator());
  sup_.canonicalize();
}

void SieveTable::require(std::int64_t from, std::int64_t to, std::string_view what) const {
  if (!covers(from, to))
    throw std::out_of_range(std::string(what) + ": needs f on [" + std::to_string(from) + ", " +
                            std::to_string(to) + "] but the table covers [" +
                            std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
}

Rational SieveTable::value(std::int64_t n) const {
  Rational r(numerator(n), denominator());
  r.canonicalize();
  return r;
}

std::vector<double> SieveTable::as_doubles() const {
  std::vector<double> out(num_.size());
  const double den = static_cast<double>(denominator());
  for (std::size_t i = 0; i < num_.size(); ++i) out[i] = static_cast<double>(num_[i]) / den;
  return out;
}

Rational SieveTable::sup_norm(std::int64_t from, std::int64_t to) const {
  from = std::max(from, lo_);
  to = std::min(to, hi_);
  std::int64_t m = 0;
  for (std::int64_t n = from; n <= to; ++n) {
    const auto v = numerator(n);
    m = std::max(m, v < 0 ? -v : v);
  }
  Rational r(m, denominator());
  r.canonicalize();
  return r;
}

SieveTable sieve_f(const GFunction& g, std::int64_t lo, std::int64_t hi, std::size_t workers) {
  if (lo < 1 || hi < lo)
    throw std::invalid_argument("sieve range must satisfy 1 <= lo <= hi, got [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
  std::vector<std::int64_t> values(static_cast<std::size_t>(hi - lo + 1), 0);
  const auto gnum = g.numerators();
  const std::int64_t Q = g.support_bound();

  constexpr std::int64_t kBlock = 1 << 16;
  const std::int64_t nblocks = (hi - lo + kBlock) / kBlock;
  parallel_for(static_cast<std::size_t>(nblocks), workers, [&](std::size_t b) {
    const std::int64_t from = lo + static_cast<std::int64_t>(b) * kBlock;
    const std::int64_t to = std::min(hi, from + kBlock - 1);
    for (std::int64_t d = 1; d <= std::min(Q, to); ++d) {
      const std::int64_t gd = gnum[static_cast<std::size_t>(d - 1)];
      if (gd == 0) continue;
      for (std::int64_t n = (from + d - 1) / d * d; n <= to; n += d)
        values[static_cast<std::size_t>(n - lo)] += gd;
    }
  });
  return SieveTable(g, lo, hi, std::move(values));
}

Rational mean_value(const GFunction& g, std::int64_t h) {
  if (h < 1) throw std::invalid_argument("mean_value needs h >= 1");
  // Accumulate over the common denominator lcm(1..Q) * den(g) in one pass.
  const std::int64_t Q = g.support_bound();
  Integer lcm = 1;
  for (std::int64_t d = 2; d <= Q; ++d) mpz_lcm_ui(lcm.get_mpz_t(), lcm.get_mpz_t(), d);
  Integer acc = 0;
  for (std::int64_t d = 1; d <= Q; ++d) {
    const std::int64_t gd = g.numerator(d);
    if (gd == 0) continue;
    acc += Integer(lcm / d) * gd;
  }
  Rational r(Integer(acc * 2 * h), Integer(lcm * g.denominator()));
  r.canonicalize();
  return r;
}

double mean_value_float(const GFunction& g, std::int64_t h) {
  if (h < 1) throw std::invalid_argument("mean_value needs h >= 1");
  CompensatedSum s;
  for (std::int64_t d = 1; d <= g.support_bound(); ++d)
    s.add(static_cast<double>(g.numerator(d)) / static_cast<double>(d));
  return 2.0 * static_cast<double>(h) * s.value() / static_cast<double>(g.denominator());
}

Rational dyadic_sum(const SieveTable& f, std::int64_t N) {
  if (N < 1) throw std::invalid_argument("dyadic_sum needs N >= 1");
  f.require(N + 1, 2 * N, "dyadic_sum");
  __int128 acc = 0;
  for (std::int64_t n = N + 1; n <= 2 * N; ++n) acc += f.numerator(n);
  return to_rational(acc, f.denominator());
}

Rational dyadic_sum_closed(const GFunction& g, std::int64_t N) {
  if (N < 1) throw std::invalid_argument("dyadic_sum needs N >= 1");
  __int128 acc = 0;
  for (std::int64_t d = 1; d <= g.support_bound(); ++d)
    acc += static_cast<__int128>(g.numerator(d)) * (2 * N / d - N / d);
  return to_rational(acc, g.denominator());
}

ScaleParams ScaleParams::from_exponents(std::int64_t N, double theta, double lambda) {
  if (N < 2) throw std::invalid_argument("N must be >= 2");
  const double dn = static_cast<double>(N);
  const auto h = static_cast<std::int64_t>(std::floor(std::pow(dn, theta) + 0.5));
  const auto Q = static_cast<std::int64_t>(std::floor(std::pow(dn, lambda) + 0.5));
  return from_sizes(N, h, Q);
}

ScaleParams ScaleParams::from_sizes(std::int64_t N, std::int64_t h, std::int64_t Q) {
  ScaleParams p;
  p.N = N;
  p.h = h;
  p.Q = Q;
  const double logn = std::log(static_cast<double>(N));
  p.theta = h >= 1 && N >= 2 ? std::log(static_cast<double>(h)) / logn : 0.0;
  p.lambda = Q >= 1 && N >= 2 ? std::log(static_cast<double>(Q)) / logn : 0.0;
  return p;
}

void ScaleParams::validate() const {
  if (h < 1) throw std::invalid_argument("h must be >= 1");
  if (4 * h >= N)
    throw std::invalid_argument("h must satisfy h < N/4 (N=" + std::to_string(N) +
                                ", h=" + std::to_string(h) + ")");
  if (Q < 1) throw std::invalid_argument("Q must be >= 1");
  if (Q > 2 * N) throw std::invalid_argument("Q must satisfy Q <= 2N");
}

}  // namespace sievelab
