#include "sievelab/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sievelab/summation.hpp"

namespace sievelab {

namespace {

constexpr double kPi = std::numbers::pi;

// beta - nearest integer, in [-1/2, 1/2].
double centred(double beta) { return beta - std::nearbyint(beta); }

double sq(double x) { return x * x; }

std::int64_t mod_pos(std::int64_t a, std::int64_t q) {
  const std::int64_t r = a % q;
  return r < 0 ? r + q : r;
}

}  // namespace

std::string_view to_string(KernelFamily family) { return family == KernelFamily::W ? "W" : "S"; }

std::int64_t KernelSpec::operator()(std::int64_t a) const {
  const std::int64_t x = a < 0 ? -a : a;
  if (family == KernelFamily::S) return x < 2 * h ? 2 * h - x : 0;
  if (x <= h) return 2 * h - 3 * x;
  if (x <= 2 * h) return x - 2 * h;
  return 0;
}

std::int64_t kernel_value(const KernelSpec& k, std::int64_t a) { return k(a); }

Rational sum_W_over_multiples(std::int64_t h, std::int64_t q) {
  if (q < 1) throw std::invalid_argument("sum_W_over_multiples needs q >= 1");
  // 2q ||h/q|| = 2 min(h mod q, q - h mod q).
  const std::int64_t r = mod_pos(h, q);
  return Rational(2 * std::min(r, q - r));
}

double fourier_direct(const KernelSpec& k, std::int64_t ell, double beta) {
  if (ell < 1) throw std::invalid_argument("fourier_direct needs ell >= 1");
  const double b = centred(beta);
  CompensatedSum s;
  s.add(static_cast<double>(k(0)));
  for (std::int64_t a = 1; a * ell <= k.support(); ++a)
    s.add(2.0 * static_cast<double>(k(a * ell)) * std::cos(2.0 * kPi * static_cast<double>(a) * b));
  return s.value();
}

double fourier_W(std::int64_t h, double beta) {
  const double b = centred(beta);
  if (std::fabs(b) < kSingularityTolerance) return fourier_direct({KernelFamily::W, h}, 1, beta);
  const double s = std::sin(kPi * static_cast<double>(h) * b);
  return 4.0 * sq(sq(s)) / sq(std::sin(kPi * b));
}

double fourier_W_scaled(std::int64_t h, std::int64_t ell, double beta) {
  if (ell < 1) throw std::invalid_argument("fourier_W_scaled needs ell >= 1");
  const double b = centred(beta);
  if (std::fabs(b) < kSingularityTolerance)
    return fourier_direct({KernelFamily::W, h}, ell, beta) / static_cast<double>(ell);

  const std::int64_t whole = h / ell;          // [h/ell]
  const std::int64_t whole2 = 2 * h / ell;     // [2h/ell]
  const double frac = static_cast<double>(h % ell) / static_cast<double>(ell);
  const double frac2 = static_cast<double>((2 * h) % ell) / static_cast<double>(ell);

  // 2(1 - cos(2 pi beta [h/ell])) * Fejer([h/ell]) collapses to 4 sin^4 / sin^2.
  const double s = std::sin(kPi * b * static_cast<double>(whole));
  double value = 4.0 * sq(sq(s)) / sq(std::sin(kPi * b));
  value += 4.0 * frac * exp_sum_E(static_cast<double>(whole), beta) -
           frac2 * exp_sum_E(static_cast<double>(whole2), beta);

  // Second case: [2h/ell] = 2[h/ell] + 1 and 2{h/ell} - {2h/ell} = 1, which
  // contributes -E_{2[h/ell]}(beta). In the first case that coefficient is 0.
  if (2 * (h % ell) >= ell) value -= exp_sum_E(static_cast<double>(2 * whole), beta);
  return value;
}

double fourier_W_scaled_unified(std::int64_t h, std::int64_t ell, double beta) {
  if (ell < 1) throw std::invalid_argument("fourier_W_scaled needs ell >= 1");
  const double b = centred(beta);
  if (std::fabs(b) < kSingularityTolerance)
    return fourier_direct({KernelFamily::W, h}, ell, beta) / static_cast<double>(ell);
  const std::int64_t whole = h / ell;
  const std::int64_t whole2 = 2 * h / ell;
  const double frac = static_cast<double>(h % ell) / static_cast<double>(ell);
  const double frac2 = static_cast<double>((2 * h) % ell) / static_cast<double>(ell);
  const double num = 4.0 * sq(std::sin(kPi * b * static_cast<double>(whole))) -
                     sq(std::sin(kPi * b * static_cast<double>(whole2)));
  return num / sq(std::sin(kPi * b)) + 4.0 * frac * exp_sum_E(static_cast<double>(whole), beta) -
         frac2 * exp_sum_E(static_cast<double>(whole2), beta);
}

bool spectrum_nonneg_check(std::int64_t h, std::int64_t ell, std::span<const double> alphas) {
  if (ell < 1) throw std::invalid_argument("spectrum_nonneg_check needs ell >= 1");
  const double floor_value = -1e-9 * sq(2.0 * static_cast<double>(h));
  const KernelSpec w{KernelFamily::W, h};
  for (double alpha : alphas)
    if (fourier_direct(w, ell, alpha) < floor_value) return false;
  return true;
}

double fejer_S(std::int64_t h, std::int64_t j, std::int64_t q) {
  if (q < 1) throw std::invalid_argument("fejer_S needs q >= 1");
  const std::int64_t jr = mod_pos(j, q);
  if (jr == 0) return 4.0 * sq(static_cast<double>(h));
  const double t = static_cast<double>(jr) / static_cast<double>(q);
  if (dist_to_int(t) < kSingularityTolerance) {
    CompensatedSum s;
    s.add(2.0 * static_cast<double>(h));
    for (std::int64_t a = 1; a < 2 * h; ++a) {
      const auto phase = static_cast<std::int64_t>((static_cast<__int128>(a) * jr) % q);
      s.add(2.0 * static_cast<double>(2 * h - a) *
            std::cos(2.0 * kPi * static_cast<double>(phase) / static_cast<double>(q)));
    }
    return s.value();
  }
  // sin^2(2 pi j h / q) with the angle reduced mod pi in integers.
  const auto k = static_cast<std::int64_t>((static_cast<__int128>(2) * jr * h) % q);
  const double num = sq(std::sin(kPi * static_cast<double>(k) / static_cast<double>(q)));
  return num / sq(std::sin(kPi * t));
}

double cos_sum(std::int64_t X, double theta) {
  if (X <= 0) return 0.0;
  const double t = centred(theta);
  const double x = static_cast<double>(X);
  if (std::fabs(t) < kSingularityTolerance) {
    CompensatedSum s;
    for (std::int64_t n = 1; n <= X; ++n) s.add(std::cos(2.0 * kPi * static_cast<double>(n) * t));
    return s.value();
  }
  return std::sin(2.0 * kPi * t * x) / (2.0 * std::tan(kPi * t)) - sq(std::sin(kPi * t * x));
}

double sin_sum(std::int64_t X, double theta) {
  if (X <= 0) return 0.0;
  const double t = centred(theta);
  const double x = static_cast<double>(X);
  if (std::fabs(t) < kSingularityTolerance) {
    CompensatedSum s;
    for (std::int64_t n = 1; n <= X; ++n) s.add(std::sin(2.0 * kPi * static_cast<double>(n) * t));
    return s.value();
  }
  return sq(std::sin(kPi * t * x)) / std::tan(kPi * t) + std::sin(2.0 * kPi * t * x) / 2.0;
}

double exp_sum_E(double X, double beta) {
  if (X < 0) return 0.0;
  return 1.0 + 2.0 * cos_sum(static_cast<std::int64_t>(std::floor(X)), beta);
}

double dist_to_int(double r) { return std::fabs(r - std::nearbyint(r)); }

}  // namespace sievelab
