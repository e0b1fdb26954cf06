#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "sievelab/kernels.hpp"
#include "sievelab/selfcheck.hpp"

using namespace sievelab;

namespace {
constexpr double kTol = 1e-9;
}

TEST_CASE("kernel_value examples") {
  CHECK(kernel_value({KernelFamily::W, 5}, 0) == 10);
  CHECK(kernel_value({KernelFamily::W, 5}, 7) == -3);
  CHECK(kernel_value({KernelFamily::S, 5}, 12) == 0);
  CHECK(kernel_value({KernelFamily::S, 5}, 0) == 10);
}

TEST_CASE("kernels match the piecewise definitions, are even and supported on [-2h, 2h]") {
  for (std::int64_t h = 1; h <= 100; ++h) {
    const KernelSpec w{KernelFamily::W, h}, s{KernelFamily::S, h};
    std::int64_t sw = 0, ss = 0;
    for (std::int64_t a = -3 * h; a <= 3 * h; ++a) {
      CHECK(w(a) == oracle::W(h, a));
      CHECK(s(a) == oracle::S(h, a));
      CHECK(w(a) == w(-a));
      CHECK(s(a) >= 0);
      if (std::llabs(a) > 2 * h) CHECK((w(a) == 0 && s(a) == 0));
      sw += w(a);
      ss += s(a);
    }
    CHECK(sw == 0);
    CHECK(ss == 4 * h * h);
  }
}

TEST_CASE("sum_W_over_multiples examples") {
  CHECK(sum_W_over_multiples(3, 2) == 2);
  CHECK(sum_W_over_multiples(3, 7) == 6);
  CHECK(sum_W_over_multiples(4, 1) == 0);
  CHECK_THROWS_AS(sum_W_over_multiples(3, 0), std::invalid_argument);
}

TEST_CASE("sum_W_over_multiples equals the direct sum") {
  for (std::int64_t h = 1; h <= 50; ++h)
    for (std::int64_t q = 1; q <= 50; ++q) {
      std::int64_t direct = 0;
      for (std::int64_t a = -2 * h; a <= 2 * h; ++a)
        if (a % q == 0) direct += oracle::W(h, a);
      REQUIRE(sum_W_over_multiples(h, q) == direct);
    }
}

TEST_CASE("fourier_W examples") {
  CHECK(fourier_W(1, 0.5) == doctest::Approx(4.0));
  CHECK(fourier_W(1, 1.0 / 3.0) == doctest::Approx(3.0));
  CHECK(fourier_W(7, 0.0) == doctest::Approx(0.0));
  CHECK(fourier_W(7, 2.0) == doctest::Approx(0.0));
  CHECK(fourier_W(3, 1e-9) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("fourier_W_scaled examples") {
  CHECK(fourier_W_scaled(3, 2, 0.5) == doctest::Approx(1.0));
  CHECK(fourier_W_scaled(4, 1, 1.0 / 3.0) == doctest::Approx(fourier_W(4, 1.0 / 3.0)));
  const double direct = static_cast<double>(oracle::fourier(oracle::W, 5, 3, 0.137L)) / 3.0;
  CHECK(fourier_W_scaled(5, 3, 0.137) == doctest::Approx(direct).epsilon(1e-12));
  CHECK_THROWS_AS(fourier_W_scaled(5, 0, 0.1), std::invalid_argument);
}

TEST_CASE("fourier_W_scaled covers both fractional-part cases") {
  // h = 7: ell = 3 gives {h/ell} = 1/3 < 1/2, ell = 4 gives 3/4 >= 1/2, ell = 2 gives 1/2.
  for (std::int64_t ell : {2, 3, 4, 5, 8, 13, 14}) {
    for (double beta : {0.013, 0.21, 0.5, 0.77, 0.9999}) {
      const double direct = static_cast<double>(oracle::fourier(oracle::W, 7, ell, beta)) / ell;
      CHECK(oracle::close(fourier_W_scaled(7, ell, beta), direct, kTol));
      CHECK(oracle::close(fourier_W_scaled_unified(7, ell, beta), direct, kTol));
    }
  }
}

TEST_CASE("closed forms agree with long double direct sums on random frequencies") {
  std::mt19937_64 rng(2024);
  for (std::int64_t h = 1; h <= 50; h += 7) {
    for (int i = 0; i < 200; ++i) {
      const double beta = unit_double(rng());
      REQUIRE(oracle::close(fourier_W(h, beta), oracle::fourier(oracle::W, h, 1, beta), kTol));
      const std::int64_t ell = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * h));
      REQUIRE(oracle::close(fourier_W_scaled(h, ell, beta),
                            oracle::fourier(oracle::W, h, ell, beta) / ell, kTol));
      CHECK(oracle::close(fourier_direct({KernelFamily::S, h}, 1, beta),
                          oracle::fourier(oracle::S, h, 1, beta), kTol));
      const std::int64_t X = static_cast<std::int64_t>(rng() % 300);
      REQUIRE(oracle::close(cos_sum(X, beta), oracle::cos_sum(X, beta), kTol));
      REQUIRE(oracle::close(sin_sum(X, beta), oracle::sin_sum(X, beta), kTol));
    }
  }
}

TEST_CASE("closed forms near the singular points") {
  for (double beta : {0.0, 1e-12, 5e-7, 1.5e-6, 1.0 - 3e-7, 3.0, -2e-6}) {
    for (std::int64_t h : {1, 9, 50}) {
      CHECK(oracle::close(fourier_W(h, beta), oracle::fourier(oracle::W, h, 1, beta), kTol));
      for (std::int64_t ell : {std::int64_t{1}, std::int64_t{3}, 2 * h})
        CHECK(oracle::close(fourier_W_scaled(h, ell, beta),
                            oracle::fourier(oracle::W, h, ell, beta) / ell, kTol));
      CHECK(oracle::close(cos_sum(4 * h, beta), oracle::cos_sum(4 * h, beta), kTol));
      CHECK(oracle::close(sin_sum(4 * h, beta), oracle::sin_sum(4 * h, beta), kTol));
    }
  }
  CHECK(cos_sum(10, 0.0) == 10.0);
  CHECK(sin_sum(10, 0.0) == 0.0);
  CHECK(cos_sum(0, 0.3) == 0.0);
}

TEST_CASE("fejer_S examples and identity") {
  CHECK(fejer_S(1, 1, 2) == doctest::Approx(0.0));
  CHECK(fejer_S(2, 1, 3) == doctest::Approx(1.0));
  CHECK(fejer_S(3, 0, 5) == 36.0);
  CHECK(fejer_S(3, 10, 5) == 36.0);
  CHECK_THROWS_AS(fejer_S(3, 1, 0), std::invalid_argument);
  for (std::int64_t h = 1; h <= 30; h += 3)
    for (std::int64_t q = 1; q <= 40; ++q)
      for (std::int64_t j = -q; j <= 2 * q; ++j) {
        const double v = fejer_S(h, j, q);
        REQUIRE(v >= 0.0);
        REQUIRE(oracle::close(v, oracle::fejer(h, j, q), kTol));
      }
}

TEST_CASE("cos_sum, sin_sum and dist_to_int examples") {
  CHECK(cos_sum(1, 0.25) == doctest::Approx(0.0));
  CHECK(cos_sum(2, 0.25) == doctest::Approx(-1.0));
  CHECK(sin_sum(1, 0.25) == doctest::Approx(1.0));
  CHECK(dist_to_int(1.5) == 0.5);
  CHECK(dist_to_int(3.0) == 0.0);
  CHECK(dist_to_int(-0.25) == 0.25);
  CHECK(dist_to_int(2.9) == doctest::Approx(0.1));
}

TEST_CASE("exp_sum_E sums e(a beta) over |a| <= X") {
  for (double X : {0.0, 1.0, 2.5, 7.0})
    for (double beta : {0.1, 0.45, 1e-8}) {
      long double direct = 0;
      for (std::int64_t a = -static_cast<std::int64_t>(X); a <= static_cast<std::int64_t>(X); ++a)
        direct += std::cos(2 * oracle::kPi * a * beta);
      CHECK(oracle::close(exp_sum_E(X, beta), direct, kTol));
    }
}

TEST_CASE("spectrum_nonneg_check examples") {
  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back(i / 1000.0);
  CHECK(spectrum_nonneg_check(3, 1, grid));
  const double half[] = {0.5};
  CHECK(spectrum_nonneg_check(1, 1, half));
  std::mt19937_64 rng(6);
  std::vector<double> random;
  for (int i = 0; i < 500; ++i) random.push_back(unit_double(rng()));
  CHECK(spectrum_nonneg_check(6, 4, random));
}

TEST_CASE("run_kernel_checks passes at reduced size and counts cases") {
  KernelCheckOptions o;
  o.h_max = 12;
  o.q_max = 12;
  o.samples_per_h = 50;
  o.spectrum_samples = 500;
  const auto checks = run_kernel_checks(o);
  CHECK(checks.size() == 9);
  for (const auto& c : checks) {
    INFO(c.name);
    CHECK(c.passed());
    CHECK(c.cases > 0);
  }
  o.tol = 0.0;
  CHECK_THROWS_AS(run_kernel_checks(o), std::invalid_argument);
}
