#pragma once

// Residual checks of the correlation representations of I_f and J_f, the
// (N, h, Q) experiment grid, and the calibration sweep behind the frozen
// residual-ratio caps in calibration.hpp.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sievelab/arith.hpp"
#include "sievelab/correlations.hpp"
#include "sievelab/number.hpp"

namespace sievelab {

enum class ResidualKind { L1, L2, THM_I_REP };

std::string_view to_string(ResidualKind kind);

/// lhs - rhs_main = residual; ratio = |residual| / normalizer.
struct ResidualReport {
  ResidualKind lemma = ResidualKind::L1;
  Number lhs;
  Number rhs_main;
  Number residual;
  Number normalizer;
  double ratio = 0.0;
};

/// I_f(N,h) against sum_a W(a) C_f(a); normalizer h^3 |f|^2 with
/// |f| = max_{n <= 2N+h} |f(n)|. Needs correlations up to |a| = 2h.
ResidualReport check_lemma1(const SieveTable& f, const CorrelationTable& corr, std::int64_t N,
                            std::int64_t h);

/// J_f(N,h) with mean M against sum_a S(a) C_f(a) - 4 M h sum_{n~N} f(n) + M^2 N;
/// normalizer h^3 |f|^2 + h^2 |f| |M|.
ResidualReport check_lemma2(const SieveTable& f, const CorrelationTable& corr, std::int64_t N,
                            std::int64_t h, const Number& mean);

/// I_f(N,h) against 2 sum_a S(a) (C_f(a) - C_f(a+h)); normalizer Nh + h^3.
/// Needs correlations up to |a| = 3h.
ResidualReport check_theorem_I_rep(const SieveTable& f, const CorrelationTable& corr,
                                   std::int64_t N, std::int64_t h);

/// Convenience forms that build the correlation table themselves.
ResidualReport check_lemma1(const SieveTable& f, std::int64_t N, std::int64_t h,
                            Mode mode = Mode::exact, std::size_t workers = 1);
ResidualReport check_lemma2(const SieveTable& f, std::int64_t N, std::int64_t h,
                            Mode mode = Mode::exact, std::size_t workers = 1);
ResidualReport check_theorem_I_rep(const SieveTable& f, std::int64_t N, std::int64_t h,
                                   Mode mode = Mode::exact, std::size_t workers = 1);

/// 0 < theta < 1 and 0 <= lambda < (1 + theta) / 2.
bool corollary_hypothesis(double theta, double lambda);

/// Number of i with values[i+1] > values[i].
std::size_t count_increases(std::span<const double> values);

struct ExperimentConfig {
  double theta = 0.5;
  double lambda = 0.6;
  GPreset preset = GPreset::ones;
  std::optional<std::uint64_t> seed;
  std::optional<Rational> bound;
  std::vector<std::int64_t> n_list;
  Mode mode = Mode::exact;
  std::size_t workers = 1;
};

/// Rejects theta or lambda outside [0, 1), an empty or non-ascending N list,
/// and any N whose rounded h violates h < N/4. Throws std::invalid_argument.
void validate(const ExperimentConfig& config);

struct ExperimentRecord {
  std::int64_t N = 0;
  std::int64_t h = 0;
  std::int64_t Q = 0;
  double theta_eff = 0.0;
  double lambda_eff = 0.0;
  GPreset preset = GPreset::ones;
  std::optional<std::uint64_t> seed;
  Number J;
  Number I;
  Number rep_L2;  // rhs_main of the J_f representation
  Number rep_L1;  // rhs_main of the I_f representation
  double resid_L1 = 0.0;   // |residual| / normalizer
  double resid_L2 = 0.0;
  double resid_THM = 0.0;
  Integer bound_main;      // Nh + h^3 + Q^2 h + Q h^2
  double ratio_J = 0.0;    // J / (N h^2)
  double ratio_I = 0.0;    // I / (N h^2)

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&);
};

/// One cell: sieve on [1, 2N + 4h], both integrals with M = M_f(2h), and the
/// three residual reports.
ExperimentRecord run_cell(const ScaleParams& scale, GPreset preset,
                          std::optional<std::uint64_t> seed, std::optional<Rational> bound,
                          Mode mode, std::size_t workers = 1);

/// One record per N, in the order of config.n_list whatever the completion order.
std::vector<ExperimentRecord> run_grid(const ExperimentConfig& config);

/// Fixed column order; exact-mode files append J_exact, I_exact,
/// rep_L2_exact, rep_L1_exact holding "p/q" strings.
void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records);
std::vector<ExperimentRecord> read_records_csv(std::istream& in);

struct CalibrationCell {
  GPreset preset = GPreset::ones;
  std::int64_t N = 0;
  std::int64_t h = 0;
  std::int64_t Q = 0;
  ResidualReport lemma1;
  ResidualReport lemma2;
  ResidualReport theorem;
};

/// All presets x N in {10^3, 10^4} x h in {5, 10, 20, 40} x Q in {5, 20, 50},
/// exact mode; random_bounded uses kCalibrationSeed with bound 1.
std::vector<CalibrationCell> run_calibration(std::size_t workers = 1);

struct CalibrationMaxima {
  double lemma1 = 0.0;
  double lemma2 = 0.0;
  double theorem = 0.0;
};

CalibrationMaxima calibration_maxima(std::span<const CalibrationCell> cells);

}  // namespace sievelab
