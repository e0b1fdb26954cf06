#include <doctest.h>

#include <sstream>

#include "oracle.hpp"
#include "sievelab/calibration.hpp"
#include "sievelab/integrals.hpp"
#include "sievelab/verify.hpp"

using namespace sievelab;

TEST_CASE("delta1 residuals vanish") {
  const auto g = make_g(GPreset::delta1, 1);
  {
    const auto f = sieve_f(g, 1, 2 * 100 + 15);
    const auto r1 = check_lemma1(f, 100, 5);
    CHECK(r1.lemma == ResidualKind::L1);
    CHECK(r1.residual.exact() == 0);
    CHECK(r1.ratio == 0.0);
    const auto r2 = check_lemma2(f, 100, 5);
    CHECK(r2.lhs.exact() == 0);
    CHECK(r2.residual.exact() == 0);
  }
  {
    const auto f = sieve_f(g, 1, 2 * 200 + 12);
    const auto rt = check_theorem_I_rep(f, 200, 4);
    CHECK(rt.rhs_main.exact() == 0);
    CHECK(rt.lhs.exact() == 0);
    CHECK(rt.normalizer.exact() == 200 * 4 + 64);
  }
}

TEST_CASE("ones Q=2, N=9, h=1 against hand values") {
  const auto g = make_g(GPreset::ones, 2);
  const auto f = sieve_f(g, 1, 30);
  const auto fv = oracle::f_upto({1, 1}, 30);
  // C(0) = 24, C(+-1) = 18, C(+-2) = 25 - 0 ... read from the brute table.
  auto C = [&](std::int64_t a) { return oracle::corr(fv, 9, a); };
  CHECK(C(0) == 24);
  CHECK(C(1) == 18);
  CHECK(C(-1) == 18);

  const auto l2 = check_lemma2(f, 9, 1);
  CHECK(l2.lhs.exact() == 0);  // every window of two holds one even number: sum 3 = M
  CHECK(l2.rhs_main.exact() == 2 * C(0) + C(1) + C(-1) - 4 * 3 * 1 * 14 + 9 * 9);
  CHECK(l2.residual.exact() == 3);
  CHECK(l2.normalizer.exact() == 1 * 4 + 1 * 2 * 3);

  const auto l1 = check_lemma1(f, 9, 1);
  // W(0) = 2, W(+-1) = -1, W(+-2) = 0.
  CHECK(l1.rhs_main.exact() == 2 * C(0) - C(1) - C(-1));
  CHECK(l1.lhs.exact() == oracle::symmetry(fv, 9, 1));

  const auto th = check_theorem_I_rep(f, 9, 1);
  // S(0) = 2, S(+-1) = 1.
  const Rational rhs = 2 * (2 * (C(0) - C(1)) + (C(1) - C(2)) + (C(-1) - C(0)));
  CHECK(th.rhs_main.exact() == rhs);
  CHECK(th.residual.exact() == oracle::symmetry(fv, 9, 1) - rhs);
  CHECK(th.normalizer.exact() == 10);
}

TEST_CASE("reports are internally consistent and reproducible") {
  const auto g = make_g(GPreset::moebius, 10);
  const std::int64_t N = 10000, h = 20;
  const auto f = sieve_f(g, 1, 2 * N + 4 * h);
  const auto corr = build_correlation_table(f, N, 3 * h, Mode::exact, 2);
  const Number M(mean_value(g, h));
  for (const auto& r : {check_lemma1(f, corr, N, h), check_lemma2(f, corr, N, h, M),
                        check_theorem_I_rep(f, corr, N, h)}) {
    CHECK(r.residual.exact() == r.lhs.exact() - r.rhs_main.exact());
    CHECK(r.ratio >= 0.0);
    CHECK(r.ratio == to_double(Rational(abs(r.residual.exact()) / r.normalizer.exact())));
    CHECK(std::isfinite(r.ratio));
  }
  CHECK(check_lemma1(f, N, h).residual == check_lemma1(f, N, h, Mode::exact, 4).residual);
  CHECK(check_lemma2(f, N, h).residual == check_lemma2(f, corr, N, h, M).residual);
  const auto narrow = build_correlation_table(f, N, 2 * h, Mode::exact);
  CHECK_THROWS_AS(check_theorem_I_rep(f, narrow, N, h), std::out_of_range);
  CHECK_THROWS_AS(check_lemma1(sieve_f(g, 1, 2 * N), N, h), std::out_of_range);
}

TEST_CASE("spec examples within calibrated caps") {
  {
    const auto g = make_g(GPreset::ones, 3);
    const auto f = sieve_f(g, 1, 2000 + 40);
    CHECK(check_lemma1(f, 1000, 10).ratio <= kLemma1RatioCap);
    CHECK(std::isfinite(check_theorem_I_rep(f, 1000, 10).ratio));
  }
  {
    const auto g = make_g(GPreset::ones, 10);
    const auto f = sieve_f(g, 1, 20000 + 60);
    CHECK(check_lemma2(f, 10000, 15).ratio <= kLemma2RatioCap);
  }
}

TEST_CASE("float-mode reports track exact ones") {
  const auto g = make_g(GPreset::random_bounded, 50, 4);
  const std::int64_t N = 20000, h = 30;
  const auto f = sieve_f(g, 1, 2 * N + 4 * h);
  for (int which = 0; which < 3; ++which) {
    auto pick = [&](Mode m) {
      if (which == 0) return check_lemma1(f, N, h, m);
      if (which == 1) return check_lemma2(f, N, h, m);
      return check_theorem_I_rep(f, N, h, m);
    };
    const auto e = pick(Mode::exact), fl = pick(Mode::floating);
    CHECK_FALSE(fl.lhs.is_exact());
    CHECK(fl.lhs.approx() == doctest::Approx(e.lhs.approx()).epsilon(1e-9));
    CHECK(fl.rhs_main.approx() == doctest::Approx(e.rhs_main.approx()).epsilon(1e-9));
  }
}

TEST_CASE("corollary hypothesis and increase counting") {
  CHECK(corollary_hypothesis(0.5, 0.6));
  CHECK_FALSE(corollary_hypothesis(0.4, 0.8));
  CHECK(corollary_hypothesis(0.5, 0.0));
  CHECK_FALSE(corollary_hypothesis(0.0, 0.2));
  const double seq[] = {5, 4, 4, 4.5, 3, 3.2};
  CHECK(count_increases(seq) == 2);
  CHECK(count_increases(std::span<const double>{}) == 0);
}

TEST_CASE("grid validation") {
  ExperimentConfig c;
  c.n_list = {1000, 2000};
  CHECK_NOTHROW(validate(c));
  c.lambda = 1.0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.lambda = 0.6;
  c.theta = 1.2;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.theta = 0.9;  // h = round(1000^0.9) = 501 > N/4
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.theta = 0.5;
  c.n_list = {2000, 1000};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.n_list = {};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.n_list = {1000};
  c.preset = GPreset::random_bounded;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.seed = 3;
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("run_cell fields") {
  const auto scale = ScaleParams::from_exponents(4096, 0.5, 0.6);
  const auto r = run_cell(scale, GPreset::ones, std::nullopt, std::nullopt, Mode::exact);
  CHECK(r.N == 4096);
  CHECK(r.h == 64);
  CHECK(r.Q == 147);  // 4096^0.6 = 146.9
  CHECK(r.bound_main == Integer(4096 * 64 + 64 * 64 * 64 + 147 * 147 * 64 + 147 * 64 * 64));
  const auto g = make_g(GPreset::ones, 147);
  const auto f = sieve_f(g, 1, 2 * 4096 + 4 * 64);
  CHECK(r.J.exact() == selberg_integral(f, 4096, 64, mean_value(g, 64)).value.exact());
  CHECK(r.I.exact() == symmetry_integral(f, 4096, 64).value.exact());
  CHECK(r.ratio_J == to_double(Rational(r.J.exact() / (4096 * 64 * 64))));
  CHECK(r.ratio_I == to_double(Rational(r.I.exact() / (4096 * 64 * 64))));
  CHECK(r.rep_L1 == check_lemma1(f, 4096, 64).rhs_main);
}

TEST_CASE("run_grid: delta1 gives J = 0, records ordered by N, deterministic") {
  ExperimentConfig c;
  c.theta = 0.5;
  c.lambda = 0.0;
  c.preset = GPreset::delta1;
  c.n_list = {400, 900, 1600, 2500};
  c.workers = 3;
  const auto recs = run_grid(c);
  REQUIRE(recs.size() == 4);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].N == c.n_list[i]);
    CHECK(recs[i].Q == 1);
    CHECK(recs[i].ratio_J == 0.0);
    CHECK(recs[i].J.exact() == 0);
  }
  c.workers = 1;
  const auto again = run_grid(c);
  for (std::size_t i = 0; i < recs.size(); ++i) CHECK(recs[i] == again[i]);
}

TEST_CASE("CSV round trip is lossless and byte-identical") {
  for (Mode mode : {Mode::exact, Mode::floating}) {
    ExperimentConfig c;
    c.preset = GPreset::random_bounded;
    c.seed = 12;
    c.n_list = {500, 1000, 3000};
    c.mode = mode;
    const auto recs = run_grid(c);
    std::ostringstream first;
    write_records_csv(first, recs);
    std::istringstream in(first.str());
    const auto back = read_records_csv(in);
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) CHECK(back[i] == recs[i]);
    std::ostringstream second;
    write_records_csv(second, back);
    CHECK(second.str() == first.str());
    const std::string header = first.str().substr(0, first.str().find('\n'));
    CHECK(header.rfind("N,h,Q,theta_eff,lambda_eff,preset,seed,J,I,rep_L2,rep_L1,resid_L1,"
                       "resid_L2,resid_THM,bound_main,ratio_J,ratio_I", 0) == 0);
    CHECK((header.find("J_exact") != std::string::npos) == (mode == Mode::exact));
  }
}

TEST_CASE("CSV reader rejects damaged input") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_records_csv(empty), std::invalid_argument);
  std::istringstream bad_header("N,h\n1,2\n");
  CHECK_THROWS_AS(read_records_csv(bad_header), std::invalid_argument);
  ExperimentConfig c;
  c.n_list = {500};
  std::ostringstream out;
  write_records_csv(out, run_grid(c));
  std::string text = out.str();
  std::istringstream truncated(text.substr(0, text.rfind(',')) + "\n");
  CHECK_THROWS_AS(read_records_csv(truncated), std::invalid_argument);
  std::string garbled = text;
  garbled.replace(garbled.find('\n') + 1, 3, "abc");
  std::istringstream g(garbled);
  CHECK_THROWS_AS(read_records_csv(g), std::invalid_argument);
}

TEST_CASE("calibration maxima stay under the frozen caps") {
  const auto cells = run_calibration(2);
  CHECK(cells.size() == 4 * 2 * 4 * 3);
  for (const auto& cell : cells)
    if (cell.preset == GPreset::delta1) {
      CHECK(cell.lemma1.residual.exact() == 0);
      CHECK(cell.lemma2.residual.exact() == 0);
      CHECK(cell.theorem.residual.exact() == 0);
    }
  const auto m = calibration_maxima(cells);
  CHECK(m.lemma1 <= kLemma1RatioCap);
  CHECK(m.lemma2 <= kLemma2RatioCap);
  CHECK(m.theorem <= kTheoremRatioCap);
  // Caps are the measured maxima rounded up, not loose bounds.
  CHECK(m.lemma1 >= 0.99 * kLemma1RatioCap);
  CHECK(m.lemma2 >= 0.99 * kLemma2RatioCap);
  CHECK(m.theorem >= 0.99 * kTheoremRatioCap);
}
