#include "sievelab/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sievelab/kernels.hpp"
#include "sievelab/summation.hpp"

namespace sievelab {

double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

namespace {

constexpr double kPi = std::numbers::pi;

class Tally {
 public:
  Tally(std::string name, double tol) : tol_(tol) { check_.name = std::move(name); }

  void compare(double closed, double direct) {
    ++check_.cases;
    const double err = std::fabs(closed - direct) / (1.0 + std::fabs(direct));
    check_.worst = std::max(check_.worst, err);
    if (!(err <= tol_)) ++check_.failures;
  }
  void exact(bool ok) {
    ++check_.cases;
    if (!ok) ++check_.failures;
  }
  void nonneg(double value, double floor) {
    ++check_.cases;
    check_.worst = std::min(check_.worst, value);
    if (!(value >= floor)) ++check_.failures;
  }
  KernelCheck done() { return check_; }

 private:
  KernelCheck check_;
  double tol_;
};

// A sample frequency: mostly uniform in [0, 1), with a share placed next to
// the integers and half-integers where the closed forms are delicate.
double sample_beta(std::mt19937_64& rng) {
  const std::uint64_t kind = rng() % 16;
  const double u = unit_double(rng());
  switch (kind) {
    case 0: return u * 1e-7;                 // inside the fallback zone
    case 1: return 1e-6 + u * 1e-5;          // just outside it
    case 2: return 1.0 - 1e-6 - u * 1e-5;
    case 3: return 0.5 + (u - 0.5) * 1e-6;
    default: return u;
  }
}

double direct_fejer(std::int64_t h, std::int64_t j, std::int64_t q) {
  CompensatedSum s;
  for (std::int64_t a = -2 * h; a <= 2 * h; ++a) {
    const std::int64_t w = std::max<std::int64_t>(2 * h - std::abs(a), 0);
    std::int64_t r = (j * a) % q;
    if (r < 0) r += q;
    s.add(static_cast<double>(w) * std::cos(2.0 * kPi * static_cast<double>(r) / static_cast<double>(q)));
  }
  return s.value();
}

double direct_trig(std::int64_t X, double theta, bool sine) {
  CompensatedSum s;
  for (std::int64_t n = 1; n <= X; ++n) {
    const double t = 2.0 * kPi * static_cast<double>(n) * (theta - std::nearbyint(theta));
    s.add(sine ? std::sin(t) : std::cos(t));
  }
  return s.value();
}

}  // namespace

std::vector<KernelCheck> run_kernel_checks(const KernelCheckOptions& o) {
  if (o.h_max < 1 || o.q_max < 1 || o.samples_per_h < 1 || o.spectrum_h_max < 1 ||
      o.spectrum_samples < 0)
    throw std::invalid_argument("kernel check sizes must be positive");
  if (!(o.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  std::mt19937_64 rng(o.seed);
  std::vector<KernelCheck> out;

  Tally sums("kernel_sums", o.tol);
  for (std::int64_t h = 1; h <= std::max<std::int64_t>(o.h_max, 100); ++h) {
    const KernelSpec w{KernelFamily::W, h}, s{KernelFamily::S, h};
    std::int64_t sw = 0, ss = 0;
    for (std::int64_t a = -2 * h; a <= 2 * h; ++a) {
      sw += w(a);
      ss += s(a);
    }
    sums.exact(sw == 0 && ss == 4 * h * h);
  }
  out.push_back(sums.done());

  Tally mult("sum_W_over_multiples", o.tol);
  for (std::int64_t h = 1; h <= o.h_max; ++h) {
    const KernelSpec w{KernelFamily::W, h};
    for (std::int64_t q = 1; q <= o.q_max; ++q) {
      std::int64_t direct = 0;
      for (std::int64_t a = -2 * h; a <= 2 * h; ++a)
        if (a % q == 0) direct += w(a);
      mult.exact(sum_W_over_multiples(h, q) == direct);
    }
  }
  out.push_back(mult.done());

  Tally fw("fourier_W", o.tol), fws("fourier_W_scaled", o.tol), fej("fejer_S", o.tol),
      cs("cos_sum", o.tol), ss("sin_sum", o.tol), fejpos("fejer_S_nonneg", o.tol);
  for (std::int64_t h = 1; h <= o.h_max; ++h) {
    const KernelSpec w{KernelFamily::W, h};
    for (std::int64_t i = 0; i < o.samples_per_h; ++i) {
      const double beta = sample_beta(rng);
      fw.compare(fourier_W(h, beta), fourier_direct(w, 1, beta));
      const std::int64_t ell = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * h));
      fws.compare(fourier_W_scaled(h, ell, beta),
                  fourier_direct(w, ell, beta) / static_cast<double>(ell));

      const std::int64_t q = 1 + static_cast<std::int64_t>(rng() % 200);
      const std::int64_t j = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(3 * q)) - q;
      const double fv = fejer_S(h, j, q);
      fej.compare(fv, direct_fejer(h, j, q));
      fejpos.nonneg(fv, 0.0);

      const std::int64_t X = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(4 * h + 1));
      cs.compare(cos_sum(X, beta), direct_trig(X, beta, false));
      ss.compare(sin_sum(X, beta), direct_trig(X, beta, true));
    }
  }
  for (auto* t : {&fw, &fws, &fej, &cs, &ss, &fejpos}) out.push_back(t->done());

  Tally spec("W_spectrum_nonneg", o.tol);
  for (std::int64_t i = 0; i < o.spectrum_samples; ++i) {
    const std::int64_t h = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(o.spectrum_h_max));
    const std::int64_t ell = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * h));
    const double alpha = sample_beta(rng);
    const double floor = -1e-9 * static_cast<double>(4 * h * h);
    spec.nonneg(fourier_direct({KernelFamily::W, h}, ell, alpha), floor);
  }
  out.push_back(spec.done());
  return out;
}

}  // namespace sievelab
