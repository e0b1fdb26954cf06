#include "sievelab/verify.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sievelab/calibration.hpp"
#include "sievelab/integrals.hpp"
#include "sievelab/kernels.hpp"
#include "sievelab/parallel.hpp"

namespace sievelab {

std::string_view to_string(ResidualKind kind) {
  switch (kind) {
    case ResidualKind::L1: return "L1";
    case ResidualKind::L2: return "L2";
    case ResidualKind::THM_I_REP: return "THM_I_REP";
  }
  return "L1";
}

namespace {

Number as_number(const Rational& value, Mode mode) {
  return mode == Mode::exact ? Number(value) : Number(to_double(value));
}

double ratio_of(const Number& residual, const Number& normalizer) {
  if (residual.is_exact() && normalizer.is_exact()) {
    if (residual.exact() == 0) return 0.0;
    if (normalizer.exact() == 0) return HUGE_VAL;
    return to_double(Rational(abs(residual.exact()) / normalizer.exact()));
  }
  if (residual.approx() == 0.0) return 0.0;
  if (normalizer.approx() == 0.0) return HUGE_VAL;
  return std::fabs(residual.approx()) / normalizer.approx();
}

ResidualReport make_report(ResidualKind kind, Number lhs, Number rhs, Number normalizer) {
  ResidualReport r;
  r.lemma = kind;
  r.residual = lhs - rhs;
  r.lhs = std::move(lhs);
  r.rhs_main = std::move(rhs);
  r.normalizer = std::move(normalizer);
  r.ratio = ratio_of(r.residual, r.normalizer);
  return r;
}

Number int_number(std::int64_t v, Mode mode) {
  return mode == Mode::exact ? Number(Rational(v)) : Number(static_cast<double>(v));
}

}  // namespace

ResidualReport check_lemma1(const SieveTable& f, const CorrelationTable& corr, std::int64_t N,
                            std::int64_t h) {
  const Mode mode = corr.mode();
  Number lhs = symmetry_integral(f, N, h, mode).value;
  Number rhs = weighted_corr_sum(corr, {KernelFamily::W, h});
  const Number sup = as_number(f.sup_norm(f.lo(), 2 * N + h), mode);
  Number normalizer = int_number(h * h * h, mode) * sup * sup;
  return make_report(ResidualKind::L1, std::move(lhs), std::move(rhs), std::move(normalizer));
}

ResidualReport check_lemma2(const SieveTable& f, const CorrelationTable& corr, std::int64_t N,
                            std::int64_t h, const Number& mean) {
  const Mode mode = corr.mode();
  Number lhs = selberg_integral(f, N, h, mean, mode).value;
  const Number mass = as_number(dyadic_sum(f, N), mode);
  Number rhs = weighted_corr_sum(corr, {KernelFamily::S, h}) -
               int_number(4 * h, mode) * mean * mass + mean * mean * int_number(N, mode);
  const Number sup = as_number(f.sup_norm(f.lo(), 2 * N + h), mode);
  Number normalizer = int_number(h * h * h, mode) * sup * sup +
                      int_number(h * h, mode) * sup * abs(mean);
  return make_report(ResidualKind::L2, std::move(lhs), std::move(rhs), std::move(normalizer));
}

ResidualReport check_theorem_I_rep(const SieveTable& f, const CorrelationTable& corr,
                                   std::int64_t N, std::int64_t h) {
  if (corr.a_max() < 3 * h)
    throw std::out_of_range("theorem representation needs correlations up to |a| = 3h");
  const Mode mode = corr.mode();
  Number lhs = symmetry_integral(f, N, h, mode).value;
  const KernelSpec s{KernelFamily::S, h};
  Number rhs = int_number(0, mode);
  for (std::int64_t a = -2 * h; a <= 2 * h; ++a) {
    const std::int64_t w = s(a);
    if (w == 0) continue;
    rhs = rhs + int_number(2 * w, mode) * (corr.direct(a) - corr.direct(a + h));
  }
  Number normalizer = int_number(N * h + h * h * h, mode);
  return make_report(ResidualKind::THM_I_REP, std::move(lhs), std::move(rhs),
                     std::move(normalizer));
}

ResidualReport check_lemma1(const SieveTable& f, std::int64_t N, std::int64_t h, Mode mode,
                            std::size_t workers) {
  const auto corr = build_correlation_table(f, N, 2 * h, mode, workers);
  return check_lemma1(f, corr, N, h);
}

ResidualReport check_lemma2(const SieveTable& f, std::int64_t N, std::int64_t h, Mode mode,
                            std::size_t workers) {
  const auto corr = build_correlation_table(f, N, 2 * h, mode, workers);
  const Number mean = mode == Mode::exact ? Number(mean_value(f.g(), h))
                                          : Number(mean_value_float(f.g(), h));
  return check_lemma2(f, corr, N, h, mean);
}

ResidualReport check_theorem_I_rep(const SieveTable& f, std::int64_t N, std::int64_t h, Mode mode,
                                   std::size_t workers) {
  const auto corr = build_correlation_table(f, N, 3 * h, mode, workers);
  return check_theorem_I_rep(f, corr, N, h);
}

bool corollary_hypothesis(double theta, double lambda) {
  return theta > 0.0 && theta < 1.0 && lambda >= 0.0 && lambda < (1.0 + theta) / 2.0;
}

std::size_t count_increases(std::span<const double> values) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1]) ++n;
  return n;
}

void validate(const ExperimentConfig& config) {
  if (!(config.theta >= 0.0 && config.theta < 1.0))
    throw std::invalid_argument("theta must lie in [0, 1)");
  if (!(config.lambda >= 0.0 && config.lambda < 1.0))
    throw std::invalid_argument("lambda must lie in [0, 1)");
  if (config.n_list.empty()) throw std::invalid_argument("N list is empty");
  for (std::size_t i = 0; i < config.n_list.size(); ++i) {
    if (i > 0 && config.n_list[i] <= config.n_list[i - 1])
      throw std::invalid_argument("N list must be strictly ascending");
    const auto scale = ScaleParams::from_exponents(config.n_list[i], config.theta, config.lambda);
    scale.validate();
  }
  if (config.preset == GPreset::custom)
    throw std::invalid_argument("experiments need a named preset");
  if (config.preset == GPreset::random_bounded && !config.seed)
    throw std::invalid_argument("preset random_bounded requires a seed");
}

ExperimentRecord run_cell(const ScaleParams& scale, GPreset preset,
                          std::optional<std::uint64_t> seed, std::optional<Rational> bound,
                          Mode mode, std::size_t workers) {
  scale.validate();
  const std::int64_t N = scale.N, h = scale.h, Q = scale.Q;
  const GFunction g = make_g(preset, Q, seed, bound);
  const SieveTable f = sieve_f(g, 1, 2 * N + 4 * h, workers);
  const auto corr = build_correlation_table(f, N, 3 * h, mode, workers);
  const Number mean =
      mode == Mode::exact ? Number(mean_value(g, h)) : Number(mean_value_float(g, h));

  const auto l1 = check_lemma1(f, corr, N, h);
  const auto l2 = check_lemma2(f, corr, N, h, mean);
  const auto thm = check_theorem_I_rep(f, corr, N, h);

  ExperimentRecord r;
  r.N = N;
  r.h = h;
  r.Q = Q;
  r.theta_eff = scale.theta;
  r.lambda_eff = scale.lambda;
  r.preset = preset;
  r.seed = seed;
  r.J = l2.lhs;
  r.I = l1.lhs;
  r.rep_L2 = l2.rhs_main;
  r.rep_L1 = l1.rhs_main;
  r.resid_L1 = l1.ratio;
  r.resid_L2 = l2.ratio;
  r.resid_THM = thm.ratio;
  const Integer iN(static_cast<long>(N)), ih(static_cast<long>(h)), iQ(static_cast<long>(Q));
  r.bound_main = iN * ih + ih * ih * ih + iQ * iQ * ih + iQ * ih * ih;
  const Number scale_nh2 = int_number(N * h * h, mode);
  r.ratio_J = ratio_of(r.J, scale_nh2);
  r.ratio_I = ratio_of(r.I, scale_nh2);
  return r;
}

std::vector<ExperimentRecord> run_grid(const ExperimentConfig& config) {
  validate(config);
  const std::size_t cells = config.n_list.size();
  const std::size_t workers = std::max<std::size_t>(config.workers, 1);
  const std::size_t inner = std::max<std::size_t>(1, workers / cells);
  std::vector<ExperimentRecord> records(cells);
  parallel_for(cells, workers, [&](std::size_t i) {
    const auto scale = ScaleParams::from_exponents(config.n_list[i], config.theta, config.lambda);
    records[i] = run_cell(scale, config.preset, config.seed, config.bound, config.mode, inner);
  });
  return records;
}

bool operator==(const ExperimentRecord& a, const ExperimentRecord& b) {
  return a.N == b.N && a.h == b.h && a.Q == b.Q && a.theta_eff == b.theta_eff &&
         a.lambda_eff == b.lambda_eff && a.preset == b.preset && a.seed == b.seed && a.J == b.J &&
         a.I == b.I && a.rep_L2 == b.rep_L2 && a.rep_L1 == b.rep_L1 &&
         a.resid_L1 == b.resid_L1 && a.resid_L2 == b.resid_L2 && a.resid_THM == b.resid_THM &&
         a.bound_main == b.bound_main && a.ratio_J == b.ratio_J && a.ratio_I == b.ratio_I;
}

namespace {

constexpr const char* kColumns[] = {"N",        "h",        "Q",         "theta_eff", "lambda_eff",
                                    "preset",   "seed",     "J",         "I",         "rep_L2",
                                    "rep_L1",   "resid_L1", "resid_L2",  "resid_THM", "bound_main",
                                    "ratio_J",  "ratio_I"};
constexpr const char* kExactColumns[] = {"J_exact", "I_exact", "rep_L2_exact", "rep_L1_exact"};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::invalid_argument("malformed number in CSV: '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (s.empty() || pos != s.size())
    throw std::invalid_argument("malformed integer in CSV: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records) {
  bool exact = !records.empty();
  for (const auto& r : records) exact = exact && r.J.is_exact() && r.I.is_exact();
  std::string header;
  for (const char* c : kColumns) header += std::string(header.empty() ? "" : ",") + c;
  if (exact)
    for (const char* c : kExactColumns) header += std::string(",") + c;
  out << header << '\n';
  for (const auto& r : records) {
    out << r.N << ',' << r.h << ',' << r.Q << ',' << fmt_double(r.theta_eff) << ','
        << fmt_double(r.lambda_eff) << ',' << to_string(r.preset) << ','
        << (r.seed ? std::to_string(*r.seed) : std::string()) << ',' << fmt_double(r.J.approx())
        << ',' << fmt_double(r.I.approx()) << ',' << fmt_double(r.rep_L2.approx()) << ','
        << fmt_double(r.rep_L1.approx()) << ',' << fmt_double(r.resid_L1) << ','
        << fmt_double(r.resid_L2) << ',' << fmt_double(r.resid_THM) << ','
        << r.bound_main.get_str() << ',' << fmt_double(r.ratio_J) << ','
        << fmt_double(r.ratio_I);
    if (exact)
      out << ',' << to_string(r.J.exact()) << ',' << to_string(r.I.exact()) << ','
          << to_string(r.rep_L2.exact()) << ',' << to_string(r.rep_L1.exact());
    out << '\n';
  }
}

std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("CSV is empty (missing header)");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  constexpr std::size_t kBase = std::size(kColumns);
  bool exact = false;
  if (header.size() == kBase + std::size(kExactColumns)) {
    exact = true;
  } else if (header.size() != kBase) {
    throw std::invalid_argument("CSV header has " + std::to_string(header.size()) + " columns");
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    const char* want = i < kBase ? kColumns[i] : kExactColumns[i - kBase];
    if (header[i] != want)
      throw std::invalid_argument("CSV column " + std::to_string(i) + " is '" + header[i] +
                                  "', expected '" + want + "'");
  }

  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != header.size())
      throw std::invalid_argument("CSV row has " + std::to_string(c.size()) + " cells");
    ExperimentRecord r;
    r.N = parse_int(c[0]);
    r.h = parse_int(c[1]);
    r.Q = parse_int(c[2]);
    r.theta_eff = parse_double(c[3]);
    r.lambda_eff = parse_double(c[4]);
    r.preset = parse_preset(c[5]);
    if (!c[6].empty()) r.seed = static_cast<std::uint64_t>(std::stoull(c[6]));
    if (exact) {
      r.J = Number(parse_rational(c[17]));
      r.I = Number(parse_rational(c[18]));
      r.rep_L2 = Number(parse_rational(c[19]));
      r.rep_L1 = Number(parse_rational(c[20]));
    } else {
      r.J = Number(parse_double(c[7]));
      r.I = Number(parse_double(c[8]));
      r.rep_L2 = Number(parse_double(c[9]));
      r.rep_L1 = Number(parse_double(c[10]));
    }
    r.resid_L1 = parse_double(c[11]);
    r.resid_L2 = parse_double(c[12]);
    r.resid_THM = parse_double(c[13]);
    if (r.bound_main.set_str(c[14], 10) != 0)
      throw std::invalid_argument("malformed bound_main in CSV: '" + c[14] + "'");
    r.ratio_J = parse_double(c[15]);
    r.ratio_I = parse_double(c[16]);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<CalibrationCell> run_calibration(std::size_t workers) {
  struct Spec {
    GPreset preset;
    std::int64_t N, h, Q;
  };
  std::vector<Spec> specs;
  for (GPreset p : {GPreset::delta1, GPreset::ones, GPreset::moebius, GPreset::random_bounded})
    for (std::int64_t N : {1000, 10000})
      for (std::int64_t h : {5, 10, 20, 40})
        for (std::int64_t Q : {5, 20, 50}) specs.push_back({p, N, h, Q});

  std::vector<CalibrationCell> cells(specs.size());
  parallel_for(specs.size(), workers, [&](std::size_t i) {
    const Spec& s = specs[i];
    const auto seed = s.preset == GPreset::random_bounded
                          ? std::optional<std::uint64_t>(kCalibrationSeed)
                          : std::nullopt;
    const GFunction g = make_g(s.preset, s.Q, seed);
    const SieveTable f = sieve_f(g, 1, 2 * s.N + 4 * s.h);
    const auto corr = build_correlation_table(f, s.N, 3 * s.h, Mode::exact);
    CalibrationCell& c = cells[i];
    c.preset = s.preset;
    c.N = s.N;
    c.h = s.h;
    c.Q = s.Q;
    c.lemma1 = check_lemma1(f, corr, s.N, s.h);
    c.lemma2 = check_lemma2(f, corr, s.N, s.h, Number(mean_value(g, s.h)));
    c.theorem = check_theorem_I_rep(f, corr, s.N, s.h);
  });
  return cells;
}

CalibrationMaxima calibration_maxima(std::span<const CalibrationCell> cells) {
  CalibrationMaxima m;
  for (const auto& c : cells) {
    m.lemma1 = std::max(m.lemma1, c.lemma1.ratio);
    m.lemma2 = std::max(m.lemma2, c.lemma2.ratio);
    m.theorem = std::max(m.theorem, c.theorem.ratio);
  }
  return m;
}

}  // namespace sievelab
