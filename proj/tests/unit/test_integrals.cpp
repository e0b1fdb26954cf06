#include <doctest.h>

#include "oracle.hpp"
#include "sievelab/integrals.hpp"

using namespace sievelab;

namespace {

GFunction preset_g(GPreset p, std::int64_t Q) {
  return p == GPreset::random_bounded ? make_g(p, Q, 5) : make_g(p, Q);
}

// Sum over m of (window_m - M) for the quadratic shift identity.
Rational window_deviation_sum(const std::vector<Rational>& f, std::int64_t N, std::int64_t h,
                              const Rational& M) {
  Rational s = 0;
  for (std::int64_t m = N; m < 2 * N; ++m) {
    Rational w = 0;
    for (std::int64_t n = m - h + 1; n <= m + h; ++n) w += f[static_cast<std::size_t>(n)];
    s += w - M;
  }
  return s;
}

}  // namespace

TEST_CASE("selberg_integral examples") {
  SUBCASE("delta1 window is always 2h") {
    const auto g = make_g(GPreset::delta1, 1);
    for (std::int64_t N : {10, 37, 100})
      for (std::int64_t h : {1, 2, 5}) {
        const auto f = sieve_f(g, 1, 2 * N + h);
        CHECK(selberg_integral(f, N, h, Rational(2 * h)).value.exact() == 0);
      }
  }
  SUBCASE("ones Q=2 alternates 1, 2") {
    const auto f = sieve_f(make_g(GPreset::ones, 2), 1, 9);
    CHECK(selberg_integral(f, 4, 1, Rational(3)).value.exact() == 0);
  }
  SUBCASE("ones Q=3, N=4, h=1") {
    const auto g = make_g(GPreset::ones, 3);
    const auto f = sieve_f(g, 1, 9);
    CHECK(mean_value(g, 1) == Rational(11, 3));
    const auto r = selberg_integral(f, 4, 1, mean_value(g, 1));
    CHECK(r.value.exact() == Rational(10, 9));
    CHECK(r.kind == IntegralKind::selberg);
    CHECK(r.mean_used->exact() == Rational(11, 3));
  }
}

TEST_CASE("symmetry_integral examples") {
  CHECK(symmetry_integral(sieve_f(make_g(GPreset::delta1, 1), 1, 210), 100, 10).value.exact() == 0);
  CHECK(symmetry_integral(sieve_f(make_g(GPreset::ones, 2), 1, 9), 4, 1).value.exact() == 4);
  CHECK(symmetry_integral(sieve_f(make_g(GPreset::ones, 3), 1, 9), 4, 1).value.exact() == 10);
}

TEST_CASE("integrals agree with the literal integrand at midpoints") {
  for (GPreset p : {GPreset::delta1, GPreset::ones, GPreset::moebius, GPreset::random_bounded})
    for (std::int64_t Q : {2, 9, 40}) {
      const auto g = preset_g(p, Q);
      const auto gv = oracle::g_values(g);
      const auto fv = oracle::f_upto(gv, 700);
      const auto f = sieve_f(g, 1, 700);
      for (auto [N, h] : {std::pair<std::int64_t, std::int64_t>{30, 3}, {200, 9}, {333, 17}}) {
        const Rational M = mean_value(g, h);
        CHECK(selberg_integral(f, N, h, M).value.exact() == oracle::selberg(fv, N, h, M));
        CHECK(symmetry_integral(f, N, h).value.exact() == oracle::symmetry(fv, N, h));
      }
    }
}

TEST_CASE("quadrature_oracle reproduces the reduction at several densities") {
  const auto g3 = make_g(GPreset::ones, 3);
  const auto f3 = sieve_f(g3, 1, 20);
  CHECK(quadrature_oracle(f3, 4, 1, IntegralKind::selberg, Rational(11, 3), 8) == Rational(10, 9));
  const auto fd = sieve_f(make_g(GPreset::delta1, 1), 1, 50);
  CHECK(quadrature_oracle(fd, 20, 3, IntegralKind::symmetry, Rational(0), 4) == 0);
  const auto gm = make_g(GPreset::moebius, 5);
  const auto fm = sieve_f(gm, 1, 120);
  for (std::int64_t k : {1, 2, 3, 8}) {
    CHECK(quadrature_oracle(fm, 50, 4, IntegralKind::symmetry, Rational(0), k) ==
          symmetry_integral(fm, 50, 4).value.exact());
    CHECK(quadrature_oracle(fm, 50, 4, IntegralKind::selberg, mean_value(gm, 4), k) ==
          selberg_integral(fm, 50, 4, mean_value(gm, 4)).value.exact());
  }
  CHECK_THROWS_AS(quadrature_oracle(fm, 50, 4, IntegralKind::symmetry, Rational(0), 0),
                  std::invalid_argument);
}

TEST_CASE("J shifts quadratically in M") {
  for (GPreset p : {GPreset::ones, GPreset::moebius, GPreset::random_bounded}) {
    const auto g = preset_g(p, 25);
    const auto f = sieve_f(g, 1, 900);
    const auto fv = oracle::f_upto(oracle::g_values(g), 900);
    const std::int64_t N = 400, h = 11;
    const Rational M = mean_value(g, h);
    const Rational J = selberg_integral(f, N, h, M).value.exact();
    for (const Rational& shift : {Rational(1), Rational(-7, 3), Rational(1, 1000)}) {
      const Rational Jp = selberg_integral(f, N, h, Rational(M + shift)).value.exact();
      CHECK(Jp == J + N * shift * shift - 2 * shift * window_deviation_sum(fv, N, h, M));
    }
  }
}

TEST_CASE("float mode agrees with exact mode") {
  for (GPreset p : {GPreset::ones, GPreset::moebius, GPreset::random_bounded})
    for (std::int64_t N : {1000, 100000}) {
      const auto g = preset_g(p, 60);
      const std::int64_t h = 31;
      const auto f = sieve_f(g, 1, 2 * N + h);
      const Rational M = mean_value(g, h);
      const double Je = to_double(selberg_integral(f, N, h, Number(M), Mode::exact).value.exact());
      const double Jf =
          selberg_integral(f, N, h, Number(mean_value_float(g, h)), Mode::floating).value.approx();
      const double Ie = to_double(symmetry_integral(f, N, h, Mode::exact).value.exact());
      const double If = symmetry_integral(f, N, h, Mode::floating).value.approx();
      CHECK(std::fabs(Jf - Je) <= 1e-6 * std::fabs(Je));
      CHECK(std::fabs(If - Ie) <= 1e-6 * std::fabs(Ie));
    }
}

TEST_CASE("integral argument checks") {
  const auto g = make_g(GPreset::ones, 3);
  const auto f = sieve_f(g, 1, 100);
  CHECK_THROWS_AS(symmetry_integral(f, 50, 1), std::out_of_range);
  CHECK_THROWS_AS(symmetry_integral(f, 40, 0), std::invalid_argument);
  CHECK_THROWS_AS(selberg_integral(sieve_f(g, 5, 100), 4, 1, Rational(1)), std::out_of_range);
  CHECK(symmetry_integral(f, 40, 3).q_exceeds_n == false);
  const auto big = sieve_f(make_g(GPreset::ones, 60), 1, 100);
  CHECK(symmetry_integral(big, 40, 3).q_exceeds_n == true);
}
