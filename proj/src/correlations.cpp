#include "sievelab/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

#include "sievelab/parallel.hpp"
#include "sievelab/summation.hpp"

namespace sievelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kBlock = 1 << 13;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod_pos(__int128 a, std::int64_t q) {
  auto r = static_cast<std::int64_t>(a % q);
  return r < 0 ? r + q : r;
}

// Inverse of x modulo m for gcd(x, m) = 1, m >= 1.
std::int64_t mod_inverse(std::int64_t x, std::int64_t m) {
  std::int64_t r0 = m, r1 = mod_pos(x, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t t = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - t * r1};
    std::tie(s0, s1) = std::pair{s1, s0 - t * s1};
  }
  return mod_pos(s0, m);
}

void require_lag_range(const SieveTable& f, std::int64_t N, std::int64_t a_max,
                       std::string_view what) {
  if (N < 1) throw std::invalid_argument(std::string(what) + ": N must be >= 1");
  f.require(std::min(N + 1, N + 1 - a_max), std::max(2 * N, 2 * N + a_max), what);
}

__int128 dot_exact(const std::int64_t* x, const std::int64_t* y, std::int64_t len) {
  __int128 acc = 0;
  for (std::int64_t i = 0; i < len; ++i) acc += static_cast<__int128>(x[i]) * y[i];
  return acc;
}

// Four interleaved accumulators combined in a fixed order.
double dot_float(const double* x, const double* y, std::int64_t len) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::int64_t i = 0;
  for (; i + 4 <= len; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < len; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

// Re sum_{m=lo+1}^{hi} e(u m / q) * e(-shift / q) for q >= 2, q not dividing u.
// The geometric sum equals e(u(lo+1)/q + u(cnt-1)/(2q)) sin(pi u cnt/q) / sin(pi u/q).
double geometric_real(std::int64_t u, std::int64_t q, std::int64_t lo, std::int64_t hi,
                      __int128 shift) {
  const std::int64_t cnt = hi - lo;
  if (cnt <= 0) return 0.0;
  const std::int64_t two_q = 2 * q;
  const std::int64_t phase = mod_pos(static_cast<__int128>(2) * u * (lo + 1) +
                                         static_cast<__int128>(u) * (cnt - 1) - 2 * shift,
                                     two_q);
  const std::int64_t amp = mod_pos(static_cast<__int128>(u) * cnt, two_q);
  const double dq = static_cast<double>(q);
  return std::cos(kPi * static_cast<double>(phase) / dq) *
         std::sin(kPi * static_cast<double>(amp) / dq) /
         std::sin(kPi * static_cast<double>(mod_pos(u, two_q)) / dq);
}

}  // namespace

Number correlation_direct(const SieveTable& f, std::int64_t N, std::int64_t a, Mode mode) {
  if (N < 1) throw std::invalid_argument("correlation_direct: N must be >= 1");
  f.require(std::min(N + 1, N + 1 - a), std::max(2 * N, 2 * N - a), "correlation_direct");
  const std::int64_t first = N + 1;
  const auto x = f.numerators().subspan(static_cast<std::size_t>(first - f.lo()));
  const auto y = f.numerators().subspan(static_cast<std::size_t>(first - a - f.lo()));
  const auto D = static_cast<__int128>(f.denominator());
  if (mode == Mode::exact) return Number(to_rational(dot_exact(x.data(), y.data(), N), D * D));
  // Same blocking as build_correlation_table, so the two agree bit for bit.
  const double den = static_cast<double>(f.denominator());
  std::vector<double> xs(static_cast<std::size_t>(N)), ys(static_cast<std::size_t>(N));
  for (std::int64_t i = 0; i < N; ++i) {
    xs[i] = static_cast<double>(x[i]) / den;
    ys[i] = static_cast<double>(y[i]) / den;
  }
  const double* fx = xs.data();
  const double* fy = ys.data();
  std::vector<double> partial;
  for (std::int64_t b = 0; b < N; b += kBlock)
    partial.push_back(dot_float(fx + b, fy + b, std::min(kBlock, N - b)));
  return Number(pairwise_sum(partial));
}

std::int64_t count_congruence_solutions(std::int64_t d, std::int64_t q, std::int64_t target,
                                        std::int64_t lo, std::int64_t hi) {
  if (q < 1) throw std::invalid_argument("modulus must be >= 1");
  if (hi <= lo) return 0;
  const std::int64_t g = std::gcd(mod_pos(d, q), q);
  if (mod_pos(target, g) != 0) return 0;
  const std::int64_t qr = q / g;
  const std::int64_t r = mod_pos(static_cast<__int128>(mod_pos(target / g, qr)) *
                                     mod_inverse(mod_pos(d / g, qr), qr),
                                 qr);
  // m = r (mod qr) with lo < m <= hi.
  return floor_div(hi - r, qr) - floor_div(lo - r, qr);
}

Rational correlation_main_term(const GFunction& g, std::int64_t N, std::int64_t a) {
  if (a == 0) throw std::invalid_argument("correlation main term is defined for a != 0 only");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  const std::int64_t A = a < 0 ? -a : a;
  const std::int64_t Q = g.support_bound();
  Rational total = 0;
  // g(l d) = 0 once l > Q, so only divisors l <= Q matter.
  for (std::int64_t l = 1; l <= std::min(A, Q); ++l) {
    if (A % l != 0) continue;
    const std::int64_t L = Q / l;
    std::vector<__int128> weight(static_cast<std::size_t>(L + 1), 0);  // g(ld) * count
    for (std::int64_t d = 1; d <= L; ++d) {
      const std::int64_t ld = l * d;
      weight[d] = static_cast<__int128>(g.numerator(ld)) * (2 * N / ld - N / ld);
    }
    for (std::int64_t q = 1; q <= L; ++q) {
      const std::int64_t gq = g.numerator(l * q);
      if (gq == 0) continue;
      __int128 s = 0;
      for (std::int64_t d = 1; d <= L; ++d)
        if (weight[d] != 0 && std::gcd(d, q) == 1) s += weight[d];
      if (s != 0) total += to_rational(s * gq, q);
    }
  }
  const auto D = static_cast<__int128>(g.denominator());
  return total / to_rational(D * D);
}

Rational correlation_by_congruences(const GFunction& g, std::int64_t N, std::int64_t a) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  const std::int64_t Q = g.support_bound();
  __int128 acc = 0;
  for (std::int64_t d = 1; d <= Q; ++d) {
    const std::int64_t gd = g.numerator(d);
    if (gd == 0) continue;
    for (std::int64_t q = 1; q <= Q; ++q) {
      const std::int64_t gq = g.numerator(q);
      if (gq == 0) continue;
      if (mod_pos(a, std::gcd(d, q)) != 0) continue;  // n = 0 (d), n = a (q) unsolvable
      // n = m d with N/d < m <= 2N/d and m d = a (mod q).
      acc += static_cast<__int128>(gd) * gq *
             count_congruence_solutions(d, q, a, N / d, 2 * N / d);
    }
  }
  const auto D = static_cast<__int128>(g.denominator());
  return to_rational(acc, D * D);
}

Rational remainder_exact(const GFunction& g, const SieveTable& f, std::int64_t N, std::int64_t a) {
  if (a == 0) throw std::invalid_argument("R_f(a) is defined for a != 0 only");
  return correlation_direct(f, N, a).exact() - correlation_main_term(g, N, a);
}

double remainder_charsum(const GFunction& g, std::int64_t N, std::int64_t a) {
  if (a == 0) throw std::invalid_argument("R_f(a) is defined for a != 0 only");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  const std::int64_t A = a < 0 ? -a : a;
  const std::int64_t Q = g.support_bound();
  CompensatedSum total;
  for (std::int64_t l = 1; l <= std::min(A, Q); ++l) {
    if (A % l != 0) continue;
    const std::int64_t L = Q / l;
    const std::int64_t t = a / l;  // signed
    for (std::int64_t d = 1; d <= L; ++d) {
      const std::int64_t gd = g.numerator(l * d);
      if (gd == 0) continue;
      const std::int64_t lo = N / (l * d), hi = 2 * N / (l * d);
      for (std::int64_t q = 2; q <= L; ++q) {  // q = 1 has no non-zero classes
        const std::int64_t gq = g.numerator(l * q);
        if (gq == 0 || std::gcd(d, q) != 1) continue;
        CompensatedSum inner;
        for (std::int64_t j = 1; j < q; ++j) {
          const std::int64_t u = mod_pos(static_cast<__int128>(j) * d, q);
          inner.add(geometric_real(u, q, lo, hi, static_cast<__int128>(j) * t));
        }
        total.add(static_cast<double>(gd) * static_cast<double>(gq) / static_cast<double>(q) *
                  inner.value());
      }
    }
  }
  const double D = static_cast<double>(g.denominator());
  return total.value() / (D * D);
}

std::size_t CorrelationTable::index(std::int64_t a) const {
  if (a < -a_max_ || a > a_max_)
    throw std::out_of_range("lag " + std::to_string(a) + " outside correlation table (a_max=" +
                            std::to_string(a_max_) + ")");
  return static_cast<std::size_t>(a + a_max_);
}

const Number& CorrelationTable::direct(std::int64_t a) const { return direct_[index(a)]; }

const Rational& CorrelationTable::main(std::int64_t a) const {
  if (!has_decomposition()) throw std::logic_error("correlation table was not decomposed");
  if (a == 0) throw std::invalid_argument("main term is defined for a != 0 only");
  return main_[index(a)];
}

const Rational& CorrelationTable::remainder(std::int64_t a) const {
  if (!has_decomposition()) throw std::logic_error("correlation table was not decomposed");
  if (a == 0) throw std::invalid_argument("remainder is defined for a != 0 only");
  return remainder_[index(a)];
}

CorrelationTable build_correlation_table(const SieveTable& f, std::int64_t N, std::int64_t a_max,
                                         Mode mode, std::size_t workers) {
  if (a_max < 0) throw std::invalid_argument("a_max must be >= 0");
  require_lag_range(f, N, a_max, "build_correlation_table");
  CorrelationTable table;
  table.N_ = N;
  table.a_max_ = a_max;
  table.mode_ = mode;
  const std::int64_t nlags = 2 * a_max + 1;
  table.direct_.resize(static_cast<std::size_t>(nlags));

  const std::int64_t first = N + 1;
  const std::int64_t nblocks = (N + kBlock - 1) / kBlock;
  constexpr std::int64_t kLagGroup = 32;
  const std::int64_t ngroups = (nlags + kLagGroup - 1) / kLagGroup;
  const auto D = static_cast<__int128>(f.denominator());

  if (mode == Mode::exact) {
    const std::int64_t* base = f.numerators().data() - f.lo();
    parallel_for(static_cast<std::size_t>(ngroups), workers, [&](std::size_t gi) {
      const std::int64_t lag_lo = -a_max + static_cast<std::int64_t>(gi) * kLagGroup;
      const std::int64_t lag_hi = std::min(a_max, lag_lo + kLagGroup - 1);
      std::vector<__int128> acc(static_cast<std::size_t>(lag_hi - lag_lo + 1), 0);
      for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t n0 = first + b * kBlock;
        const std::int64_t len = std::min(kBlock, 2 * N - n0 + 1);
        for (std::int64_t a = lag_lo; a <= lag_hi; ++a)
          acc[a - lag_lo] += dot_exact(base + n0, base + n0 - a, len);
      }
      for (std::int64_t a = lag_lo; a <= lag_hi; ++a)
        table.direct_[table.index(a)] = Number(to_rational(acc[a - lag_lo], D * D));
    });
  } else {
    const auto vals = f.as_doubles();
    const double* base = vals.data() - f.lo();
    parallel_for(static_cast<std::size_t>(ngroups), workers, [&](std::size_t gi) {
      const std::int64_t lag_lo = -a_max + static_cast<std::int64_t>(gi) * kLagGroup;
      const std::int64_t lag_hi = std::min(a_max, lag_lo + kLagGroup - 1);
      const std::int64_t width = lag_hi - lag_lo + 1;
      std::vector<double> partial(static_cast<std::size_t>(width * nblocks));
      for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t n0 = first + b * kBlock;
        const std::int64_t len = std::min(kBlock, 2 * N - n0 + 1);
        for (std::int64_t a = lag_lo; a <= lag_hi; ++a)
          partial[(a - lag_lo) * nblocks + b] = dot_float(base + n0, base + n0 - a, len);
      }
      for (std::int64_t a = lag_lo; a <= lag_hi; ++a)
        table.direct_[table.index(a)] = Number(pairwise_sum(
            std::span<const double>(partial).subspan((a - lag_lo) * nblocks, nblocks)));
    });
  }
  return table;
}

void decompose(CorrelationTable& table, const GFunction& g, std::size_t workers) {
  if (table.mode_ != Mode::exact)
    throw std::logic_error("main/remainder split needs an exact correlation table");
  const std::size_t size = table.direct_.size();
  std::vector<Rational> main(size), rem(size);
  parallel_for(size, workers, [&](std::size_t i) {
    const std::int64_t a = static_cast<std::int64_t>(i) - table.a_max_;
    if (a == 0) return;
    main[i] = correlation_main_term(g, table.N_, a);
    rem[i] = table.direct_[i].exact() - main[i];
  });
  table.main_ = std::move(main);
  table.remainder_ = std::move(rem);
}

Number weighted_corr_sum(const CorrelationTable& table, const KernelSpec& k) {
  if (table.a_max() < k.support())
    throw std::out_of_range("correlation table too narrow: a_max=" +
                            std::to_string(table.a_max()) + " < 2h=" +
                            std::to_string(k.support()));
  if (table.mode() == Mode::exact) {
    Rational acc = 0;
    for (std::int64_t a = -k.support(); a <= k.support(); ++a) {
      const std::int64_t w = k(a);
      if (w != 0) acc += table.direct(a).exact() * w;
    }
    return Number(std::move(acc));
  }
  std::vector<double> terms;
  for (std::int64_t a = -k.support(); a <= k.support(); ++a)
    terms.push_back(static_cast<double>(k(a)) * table.direct(a).approx());
  return Number(pairwise_sum(terms));
}

WeightedRemainder weighted_remainder_sum(const GFunction& g, const SieveTable& f, std::int64_t N,
                                         const KernelSpec& k) {
  if (k(0) != 2 * k.h) throw std::invalid_argument("weight must satisfy K(0) = 2h");
  WeightedRemainder out;
  out.off_diagonal = 0;
  for (std::int64_t a = -k.support(); a <= k.support(); ++a) {
    if (a == 0) continue;
    const std::int64_t w = k(a);
    if (w != 0) out.off_diagonal += remainder_exact(g, f, N, a) * w;
  }
  out.diagonal = correlation_direct(f, N, 0).exact() * k(0);
  return out;
}

double weighted_remainder_charsum(const GFunction& g, std::int64_t N, const KernelSpec& k) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  const std::int64_t Q = g.support_bound();
  CompensatedSum total;
  for (std::int64_t l = 1; l <= std::min(k.support(), Q); ++l) {
    const std::int64_t L = Q / l;
    const std::int64_t bmax = k.support() / l;
    for (std::int64_t q = 2; q <= L; ++q) {
      const std::int64_t gq = g.numerator(l * q);
      if (gq == 0) continue;
      // khat[j] = sum_{b != 0} K(bl) e_q(jb), real because K is even.
      std::vector<double> khat(static_cast<std::size_t>(q), 0.0);
      for (std::int64_t j = 1; j < q; ++j) {
        CompensatedSum s;
        for (std::int64_t b = 1; b <= bmax; ++b)
          s.add(2.0 * static_cast<double>(k(b * l)) *
                std::cos(2.0 * kPi * static_cast<double>(mod_pos(static_cast<__int128>(j) * b, q)) /
                         static_cast<double>(q)));
        khat[j] = s.value();
      }
      for (std::int64_t d = 1; d <= L; ++d) {
        const std::int64_t gd = g.numerator(l * d);
        if (gd == 0 || std::gcd(d, q) != 1) continue;
        const std::int64_t lo = N / (l * d), hi = 2 * N / (l * d);
        CompensatedSum inner;
        for (std::int64_t j = 1; j < q; ++j) {
          const std::int64_t u = mod_pos(static_cast<__int128>(j) * d, q);
          inner.add(geometric_real(u, q, lo, hi, 0) * khat[j]);
        }
        total.add(static_cast<double>(gd) * static_cast<double>(gq) / static_cast<double>(q) *
                  inner.value());
      }
    }
  }
  const double D = static_cast<double>(g.denominator());
  return total.value() / (D * D);
}

}  // namespace sievelab
