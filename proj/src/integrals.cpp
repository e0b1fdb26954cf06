#include "sievelab/integrals.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "sievelab/summation.hpp"

namespace sievelab {

std::string_view to_string(IntegralKind kind) {
  return kind == IntegralKind::selberg ? "selberg" : "symmetry";
}

namespace {

void check_args(const SieveTable& f, std::int64_t N, std::int64_t h, std::string_view what) {
  if (N < 1) throw std::invalid_argument(std::string(what) + ": N must be >= 1");
  if (h < 1) throw std::invalid_argument(std::string(what) + ": h must be >= 1");
  if (h > N) throw std::invalid_argument(std::string(what) + ": h must not exceed N");
  f.require(N - h + 1, 2 * N + h, what);
}

}  // namespace

IntegralResult selberg_integral(const SieveTable& f, std::int64_t N, std::int64_t h,
                                const Number& mean, Mode mode) {
  check_args(f, N, h, "selberg_integral");
  IntegralResult out;
  out.kind = IntegralKind::selberg;
  out.N = N;
  out.h = h;
  out.mean_used = mean;
  out.q_exceeds_n = f.g().support_bound() > N;

  // window(m) = sum_{n=m-h+1}^{m+h} f(n), slid one step per m.
  std::int64_t window = 0;
  for (std::int64_t n = N - h + 1; n <= N + h; ++n) window += f.numerator(n);

  if (mode == Mode::exact) {
    // sum_m (w_m/D - M)^2 = S2/D^2 - 2 M S1/D + N M^2 with S1 = sum w_m, S2 = sum w_m^2.
    const Rational& M = mean.exact();
    __int128 s1 = 0, s2 = 0;
    for (std::int64_t m = N; m < 2 * N; ++m) {
      s1 += window;
      s2 += static_cast<__int128>(window) * window;
      window += f.numerator(m + h + 1) - f.numerator(m - h + 1);
    }
    const auto D = static_cast<__int128>(f.denominator());
    Rational value = to_rational(s2, D * D) - 2 * M * to_rational(s1, D) + N * M * M;
    out.value = Number(std::move(value));
  } else {
    const double M = mean.approx();
    const double D = static_cast<double>(f.denominator());
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(N));
    for (std::int64_t m = N; m < 2 * N; ++m) {
      const double dev = static_cast<double>(window) / D - M;
      terms.push_back(dev * dev);
      window += f.numerator(m + h + 1) - f.numerator(m - h + 1);
    }
    out.value = Number(pairwise_sum(terms));
  }
  return out;
}

IntegralResult selberg_integral(const SieveTable& f, std::int64_t N, std::int64_t h,
                                const Rational& mean) {
  return selberg_integral(f, N, h, Number(mean), Mode::exact);
}

IntegralResult symmetry_integral(const SieveTable& f, std::int64_t N, std::int64_t h, Mode mode) {
  check_args(f, N, h, "symmetry_integral");
  IntegralResult out;
  out.kind = IntegralKind::symmetry;
  out.N = N;
  out.h = h;
  out.q_exceeds_n = f.g().support_bound() > N;

  // right(m) = sum_{m+1}^{m+h} f, left(m) = sum_{m-h+1}^{m} f.
  std::int64_t right = 0, left = 0;
  for (std::int64_t n = N + 1; n <= N + h; ++n) right += f.numerator(n);
  for (std::int64_t n = N - h + 1; n <= N; ++n) left += f.numerator(n);
  auto advance = [&](std::int64_t m) {
    right += f.numerator(m + h + 1) - f.numerator(m + 1);
    left += f.numerator(m + 1) - f.numerator(m - h + 1);
  };

  if (mode == Mode::exact) {
    __int128 acc = 0;
    for (std::int64_t m = N; m < 2 * N; ++m) {
      const __int128 diff = right - left;
      acc += diff * diff;
      advance(m);
    }
    const auto D = static_cast<__int128>(f.denominator());
    out.value = Number(to_rational(acc, D * D));
  } else {
    const double D = static_cast<double>(f.denominator());
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(N));
    for (std::int64_t m = N; m < 2 * N; ++m) {
      const double diff = static_cast<double>(right - left) / D;
      terms.push_back(diff * diff);
      advance(m);
    }
    out.value = Number(pairwise_sum(terms));
  }
  return out;
}

Rational quadrature_oracle(const SieveTable& f, std::int64_t N, std::int64_t h, IntegralKind kind,
                           const Rational& mean, std::int64_t samples_per_unit) {
  if (samples_per_unit < 1) throw std::invalid_argument("samples_per_unit must be >= 1");
  check_args(f, N, h, "quadrature_oracle");
  const std::int64_t k = samples_per_unit;
  const std::int64_t scale = 2 * k;  // x = X / (2k)
  Rational total = 0;
  for (std::int64_t i = 0; i < N * k; ++i) {
    const std::int64_t X = scale * N + 2 * i + 1;
    // Candidate integers with |n - x| <= h, i.e. |scale*n - X| <= scale*h.
    const std::int64_t n_lo = (X - scale * h + scale - 1) / scale;
    const std::int64_t n_hi = (X + scale * h) / scale;
    Rational inner = 0;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
      const std::int64_t offset = scale * n - X;  // sign of n - x
      if (offset < -scale * h || offset > scale * h) continue;
      if (kind == IntegralKind::selberg) {
        if (offset != 0) inner += f.value(n);
      } else {
        if (offset > 0) inner += f.value(n);
        if (offset < 0) inner -= f.value(n);
      }
    }
    if (kind == IntegralKind::selberg) inner -= mean;
    total += inner * inner;
  }
  total /= k;
  return total;
}

}  // namespace sievelab
