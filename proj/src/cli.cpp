#include "sievelab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "sievelab/arith.hpp"
#include "sievelab/calibration.hpp"
#include "sievelab/correlations.hpp"
#include "sievelab/integrals.hpp"
#include "sievelab/parallel.hpp"
#include "sievelab/selfcheck.hpp"

namespace sievelab::cli {

using sievelab::to_string;

namespace {

constexpr std::string_view kKeys[] = {"N",    "h",        "Q",    "preset", "seed",
                                      "bound", "theta",   "lambda", "n_list", "mode",
                                      "out_path", "tol",  "a_max", "lo",     "hi"};

struct Alias {
  std::string_view from, to;
};
constexpr Alias kAliases[] = {{"n", "N"},          {"q", "Q"},         {"n-list", "n_list"},
                              {"out", "out_path"}, {"a-max", "a_max"}, {"nlist", "n_list"}};

std::optional<std::string> canonical_key(std::string_view key) {
  for (auto k : kKeys)
    if (k == key) return std::string(k);
  for (const auto& a : kAliases)
    if (a.from == key) return std::string(a.to);
  return std::nullopt;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void usage(const std::string& msg) { throw ConfigError(kExitUsage, msg); }
[[noreturn]] void invalid(const std::string& msg) { throw ConfigError(kExitValidation, msg); }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::sieve: return "sieve";
    case Command::kernels_selfcheck: return "kernels-selfcheck";
    case Command::integrals: return "integrals";
    case Command::correlate: return "correlate";
    case Command::verify: return "verify";
    case Command::experiment: return "experiment";
    case Command::report: return "report";
  }
  return "sieve";
}

std::optional<Command> parse_command(std::string_view text) {
  for (Command c : {Command::sieve, Command::kernels_selfcheck, Command::integrals,
                    Command::correlate, Command::verify, Command::experiment, Command::report})
    if (to_string(c) == text) return c;
  return std::nullopt;
}

std::span<const std::string_view> known_keys() { return kKeys; }

std::int64_t parse_integer(std::string_view key, std::string_view text) {
  std::int64_t v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last)
    invalid(std::string(key) + " must be an integer, got '" + std::string(text) + "'");
  return v;
}

double parse_decimal(std::string_view key, std::string_view text) {
  static const std::regex pattern(R"([+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)");
  const std::string s(text);
  if (!std::regex_match(s, pattern))
    invalid(std::string(key) + " must be a decimal number, got '" + s + "'");
  const double v = std::strtod(s.c_str(), nullptr);
  if (!std::isfinite(v)) invalid(std::string(key) + " is out of range");
  return v;
}

std::vector<std::int64_t> parse_n_list(std::string_view text) {
  std::vector<std::int64_t> out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto caret = item.find('^');
    if (caret == std::string::npos) {
      out.push_back(parse_integer("n_list", item));
      continue;
    }
    const std::int64_t base = parse_integer("n_list", item.substr(0, caret));
    const std::int64_t exp = parse_integer("n_list", item.substr(caret + 1));
    if (base < 2 || exp < 0 || exp > 62) invalid("n_list entry '" + item + "' is out of range");
    std::int64_t v = 1;
    for (std::int64_t i = 0; i < exp; ++i) {
      if (v > INT64_MAX / base) invalid("n_list entry '" + item + "' overflows");
      v *= base;
    }
    out.push_back(v);
  }
  if (out.empty()) invalid("n_list is empty");
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) usage("cannot open config file '" + path.string() + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      usage(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "command" || key == "target") {
      out[key] = value;
      continue;
    }
    const auto canon = canonical_key(key);
    if (!canon) usage(path.string() + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    out[*canon] = value;
  }
  return out;
}

namespace {

GPreset preset_of(const RunConfig& c) {
  try {
    return parse_preset(c.params.at("preset"));
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
}

void require_keys(const RunConfig& c, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (!c.has(k))
      usage(std::string(to_string(c.command)) + " needs " + k + " (--" +
            (std::string_view(k) == "out_path" ? std::string("out") : [&] {
              std::string s(k);
              std::transform(s.begin(), s.end(), s.begin(), [](char ch) {
                return ch == '_' ? '-' : static_cast<char>(std::tolower(ch));
              });
              return s;
            }()) +
            ")");
}

// Preset-dependent keys: Q defaults to 1 for delta1, random_bounded needs a seed.
void require_seed_keys(RunConfig& c, bool needs_q = true) {
  require_keys(c, {"preset"});
  const GPreset p = preset_of(c);
  if (p == GPreset::custom) invalid("preset custom is library-only");
  if (needs_q && !c.has("Q")) {
    if (p == GPreset::delta1)
      c.params["Q"] = "1";
    else
      require_keys(c, {"Q"});
  }
  if (p == GPreset::random_bounded) require_keys(c, {"seed"});
  if (p != GPreset::random_bounded && c.has("seed"))
    invalid("seed only applies to preset random_bounded");
  if (p != GPreset::random_bounded && c.has("bound"))
    invalid("bound only applies to preset random_bounded");
}

void validate_values(const RunConfig& c) {
  for (const auto& [k, v] : c.params) {
    if (k == "N" || k == "h" || k == "Q" || k == "a_max" || k == "lo" || k == "hi") {
      parse_integer(k, v);
    } else if (k == "seed") {
      if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        invalid("seed must be a non-negative integer");
      try {
        (void)std::stoull(v);
      } catch (const std::exception&) {
        invalid("seed is out of range");
      }
    } else if (k == "theta" || k == "lambda" || k == "tol") {
      parse_decimal(k, v);
    } else if (k == "bound") {
      try {
        if (parse_rational(v) < 0) invalid("bound must be non-negative");
      } catch (const std::invalid_argument&) {
        invalid("bound must be a decimal or p/q, got '" + v + "'");
      }
    } else if (k == "n_list") {
      parse_n_list(v);
    } else if (k == "mode") {
      if (v != "exact" && v != "float") invalid("mode must be exact or float");
    } else if (k == "preset") {
      preset_of(c);
    }
  }
  if (c.has("tol") && !(parse_decimal("tol", c.params.at("tol")) > 0))
    invalid("tol must be positive");
  for (const char* k : {"theta", "lambda"})
    if (c.has(k)) {
      const double v = parse_decimal(k, c.params.at(k));
      if (!(v >= 0.0 && v < 1.0)) invalid(std::string(k) + " must lie in [0, 1)");
    }
}

void validate_sizes(const RunConfig& c) {
  const std::int64_t N = parse_integer("N", c.params.at("N"));
  const std::int64_t h = parse_integer("h", c.params.at("h"));
  const std::int64_t Q = parse_integer("Q", c.params.at("Q"));
  try {
    ScaleParams::from_sizes(N, h, Q).validate();
  } catch (const std::invalid_argument& e) {
    invalid(e.what());
  }
}

void validate_command(RunConfig& c) {
  switch (c.command) {
    case Command::sieve: {
      require_seed_keys(c);
      if (!c.has("hi") && !c.has("N")) usage("sieve needs hi (--hi) or N (--n)");
      const std::int64_t lo = c.has("lo") ? parse_integer("lo", c.params.at("lo")) : 1;
      const std::int64_t hi = c.has("hi") ? parse_integer("hi", c.params.at("hi"))
                                          : 2 * parse_integer("N", c.params.at("N"));
      if (lo < 1 || hi < lo) invalid("sieve range must satisfy 1 <= lo <= hi");
      if (parse_integer("Q", c.params.at("Q")) < 1) invalid("Q must be >= 1");
      break;
    }
    case Command::kernels_selfcheck:
      if (c.has("h") && parse_integer("h", c.params.at("h")) < 1) invalid("h must be >= 1");
      break;
    case Command::integrals:
      require_keys(c, {"N", "h"});
      require_seed_keys(c);
      validate_sizes(c);
      break;
    case Command::correlate: {
      require_keys(c, {"N"});
      require_seed_keys(c);
      if (!c.has("a_max") && !c.has("h")) usage("correlate needs a_max (--a-max) or h (--h)");
      const std::int64_t N = parse_integer("N", c.params.at("N"));
      const std::int64_t a_max = c.has("a_max") ? parse_integer("a_max", c.params.at("a_max"))
                                                : 3 * parse_integer("h", c.params.at("h"));
      if (N < 1) invalid("N must be >= 1");
      if (a_max < 0 || a_max >= N) invalid("a_max must satisfy 0 <= a_max < N");
      if (parse_integer("Q", c.params.at("Q")) < 1) invalid("Q must be >= 1");
      break;
    }
    case Command::verify:
      if (c.target.empty()) usage("verify needs a target: lemma1, lemma2, theorem or calibration");
      if (c.target == "calibration") break;
      if (c.target != "lemma1" && c.target != "lemma2" && c.target != "theorem")
        usage("unknown verify target '" + c.target + "'");
      require_keys(c, {"N", "h"});
      require_seed_keys(c);
      validate_sizes(c);
      break;
    case Command::experiment: {
      require_keys(c, {"out_path"});
      if (!c.has("preset")) c.params["preset"] = "ones";
      if (c.has("Q") || c.has("h") || c.has("N"))
        invalid("experiment derives N, h and Q from n_list, theta and lambda");
      require_seed_keys(c, false);
      ExperimentConfig cfg;
      if (c.has("theta")) cfg.theta = parse_decimal("theta", c.params.at("theta"));
      if (c.has("lambda")) cfg.lambda = parse_decimal("lambda", c.params.at("lambda"));
      cfg.preset = preset_of(c);
      if (c.has("seed")) cfg.seed = std::stoull(c.params.at("seed"));
      cfg.n_list = c.has("n_list") ? parse_n_list(c.params.at("n_list"))
                                   : parse_n_list("2^14,2^15,2^16,2^17,2^18,2^19,2^20");
      try {
        validate(cfg);
      } catch (const std::invalid_argument& e) {
        invalid(e.what());
      }
      break;
    }
    case Command::report:
      if (c.target.empty()) usage("report needs a CSV path");
      break;
  }
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Sieve-function integrals, correlations and residual checks", "sievelab"};
  app.set_help_flag("--help", "Print this help message and exit");
  std::string command, target, config_path;
  app.add_option("command", command,
                 "sieve | kernels-selfcheck | integrals | correlate | verify | experiment | report");
  app.add_option("target", target, "verify: lemma1|lemma2|theorem|calibration; report: CSV path");
  app.add_option("--config", config_path, "key=value file; flags override its values");

  struct Flag {
    const char* names;
    const char* key;
    const char* help;
  };
  const Flag flags[] = {
      {"--n,--N", "N", "dyadic scale N"},
      {"--h", "h", "window half-width h"},
      {"--q,--Q", "Q", "support bound Q of g"},
      {"--preset", "preset", "delta1 | ones | moebius | random_bounded"},
      {"--seed", "seed", "seed for random_bounded"},
      {"--bound", "bound", "bound B for random_bounded (default 1)"},
      {"--theta", "theta", "h = round(N^theta)"},
      {"--lambda", "lambda", "Q = round(N^lambda)"},
      {"--n-list", "n_list", "comma-separated N values, b^e allowed"},
      {"--mode", "mode", "exact | float"},
      {"--out", "out_path", "output path"},
      {"--tol", "tol", "tolerance for kernels-selfcheck (default 1e-9)"},
      {"--a-max", "a_max", "largest lag for correlate (default 3h)"},
      {"--lo", "lo", "sieve range start (default 1)"},
      {"--hi", "hi", "sieve range end (default 2N)"},
  };
  std::map<std::string, std::string> given;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  for (const auto& f : flags) {
    auto* opt = app.add_option(f.names, given[f.key], f.help);
    options.emplace_back(f.key, opt);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw ConfigError(kExitOk, app.help());
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }

  std::map<std::string, std::string> params;
  if (!config_path.empty()) params = read_config_file(config_path);
  if (command.empty() && params.count("command")) command = params["command"];
  if (target.empty() && params.count("target")) target = params["target"];
  params.erase("command");
  params.erase("target");
  for (const auto& [key, opt] : options)
    if (opt->count() > 0) params[key] = given[key];

  if (command.empty()) usage("no command given (try --help)");
  RunConfig config;
  if (command == "kernels") {
    if (target != "selfcheck") usage("unknown command 'kernels " + target + "'");
    command = "kernels-selfcheck";
    target.clear();
  }
  const auto parsed = parse_command(command);
  if (!parsed) usage("unknown command '" + command + "'");
  config.command = *parsed;
  config.target = target;
  config.params = std::move(params);
  if (!config.target.empty() && config.command != Command::verify &&
      config.command != Command::report)
    usage(std::string(to_string(config.command)) + " takes no positional target");

  validate_values(config);
  validate_command(config);
  return config;
}

std::string plot_script_text(std::span<const ExperimentRecord> records,
                             const std::string& csv_relative, const std::string& png_name) {
  if (records.size() < 2) throw std::invalid_argument("a plot needs at least two records");
  const auto& first = records.front();
  const auto& last = records.back();
  std::ostringstream s;
  s << "#!/usr/bin/env python3\n"
    << "# ratio_J = J/(N h^2) and ratio_I = I/(N h^2) against N, log-log.\n"
    << "# preset " << to_string(first.preset);
  if (first.seed) s << " seed " << *first.seed;
  s << ", N = " << first.N << " .. " << last.N << " (" << records.size() << " records)\n"
    << "import csv\n"
    << "import os\n"
    << "\n"
    << "import matplotlib\n"
    << "\n"
    << "matplotlib.use(\"Agg\")\n"
    << "import matplotlib.pyplot as plt\n"
    << "\n"
    << "HERE = os.path.dirname(os.path.abspath(__file__))\n"
    << "CSV_PATH = os.path.join(HERE, \"" << csv_relative << "\")\n"
    << "PNG_PATH = os.path.join(HERE, \"" << png_name << "\")\n"
    << "\n"
    << "\n"
    << "def series(rows, column):\n"
    << "    pts = [(float(r[\"N\"]), float(r[column])) for r in rows]\n"
    << "    return [p for p in pts if p[1] > 0]\n"
    << "\n"
    << "\n"
    << "def main():\n"
    << "    with open(CSV_PATH, newline=\"\", encoding=\"utf-8\") as fh:\n"
    << "        rows = list(csv.DictReader(fh))\n"
    << "    fig, ax = plt.subplots(figsize=(6, 4))\n"
    << "    for column, marker in ((\"ratio_J\", \"o\"), (\"ratio_I\", \"s\")):\n"
    << "        pts = series(rows, column)\n"
    << "        if pts:\n"
    << "            ax.loglog([p[0] for p in pts], [p[1] for p in pts], marker=marker, "
       "label=column)\n"
    << "    ax.set_xlabel(\"N\")\n"
    << "    ax.set_ylabel(\"value / (N h^2)\")\n"
    << "    ax.set_title(\"" << to_string(first.preset) << "\")\n"
    << "    ax.grid(True, which=\"both\", alpha=0.3)\n"
    << "    ax.legend()\n"
    << "    fig.tight_layout()\n"
    << "    fig.savefig(PNG_PATH, dpi=150)\n"
    << "\n"
    << "\n"
    << "if __name__ == \"__main__\":\n"
    << "    main()\n";
  return s.str();
}

void emit_plot_script(std::span<const ExperimentRecord> records,
                      const std::filesystem::path& out_path,
                      const std::filesystem::path& csv_path) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::absolute(out_path).parent_path().lexically_normal();
  const fs::path rel = fs::absolute(csv_path).lexically_normal().lexically_relative(dir);
  fs::path png = out_path.filename();
  png.replace_extension(".png");
  const std::string text = plot_script_text(records, rel.generic_string(), png.string());
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + out_path.string() + "'");
}

namespace {

struct Inputs {
  GFunction g;
  std::int64_t N = 0, h = 0, Q = 0;
  Mode mode = Mode::exact;
};

Mode mode_of(const RunConfig& c) {
  return c.has("mode") ? parse_mode(c.params.at("mode")) : Mode::exact;
}

std::optional<Rational> bound_of(const RunConfig& c) {
  if (!c.has("bound")) return std::nullopt;
  return parse_rational(c.params.at("bound"));
}

std::optional<std::uint64_t> seed_of(const RunConfig& c) {
  if (!c.has("seed")) return std::nullopt;
  return std::stoull(c.params.at("seed"));
}

std::int64_t int_of(const RunConfig& c, const char* key) {
  return parse_integer(key, c.params.at(key));
}

GFunction g_of(const RunConfig& c) {
  return make_g(preset_of(c), int_of(c, "Q"), seed_of(c), bound_of(c));
}

void print_number(std::ostream& out, const std::string& name, const Number& v) {
  out << name << ": " << v.to_string() << '\n';
  if (v.is_exact()) out << name << "_approx: " << fmt(v.approx()) << '\n';
}

void print_header(std::ostream& out, const RunConfig& c, std::int64_t N, std::int64_t h,
                  Mode mode) {
  out << "preset: " << c.params.at("preset") << '\n';
  if (c.has("seed")) out << "seed: " << c.params.at("seed") << '\n';
  out << "N: " << N << '\n' << "h: " << h << '\n' << "Q: " << c.params.at("Q") << '\n';
  out << "mode: " << to_string(mode) << '\n';
}

std::ostream* open_output(const RunConfig& c, std::ostream& out, std::ofstream& file) {
  if (!c.has("out_path")) return &out;
  file.open(c.params.at("out_path"), std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + c.params.at("out_path") + "'");
  return &file;
}

int cmd_sieve(const RunConfig& c, std::ostream& out) {
  const GFunction g = g_of(c);
  const std::int64_t lo = c.has("lo") ? int_of(c, "lo") : 1;
  const std::int64_t hi = c.has("hi") ? int_of(c, "hi") : 2 * int_of(c, "N");
  const SieveTable f = sieve_f(g, lo, hi, worker_count());
  std::ofstream file;
  std::ostream& o = *open_output(c, out, file);
  o << "n,f\n";
  for (std::int64_t n = lo; n <= hi; ++n) o << n << ',' << to_string(f.value(n)) << '\n';
  return kExitOk;
}

int cmd_kernels(const RunConfig& c, std::ostream& out) {
  KernelCheckOptions opts;
  if (c.has("tol")) opts.tol = parse_decimal("tol", c.params.at("tol"));
  if (c.has("h")) opts.h_max = int_of(c, "h");
  if (c.has("seed")) opts.seed = std::stoull(c.params.at("seed"));
  bool ok = true;
  for (const auto& chk : run_kernel_checks(opts)) {
    ok = ok && chk.passed();
    out << (chk.passed() ? "PASS " : "FAIL ") << chk.name << " cases=" << chk.cases
        << " failures=" << chk.failures << " worst=" << fmt_short(chk.worst) << '\n';
  }
  out << (ok ? "all kernel identities hold\n" : "kernel identity failures\n");
  return ok ? kExitOk : kExitInternal;
}

int cmd_integrals(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const std::int64_t N = int_of(c, "N"), h = int_of(c, "h");
  const Mode mode = mode_of(c);
  const GFunction g = g_of(c);
  const SieveTable f = sieve_f(g, 1, 2 * N + h, worker_count());
  const Number M = mode == Mode::exact ? Number(mean_value(g, h)) : Number(mean_value_float(g, h));
  const auto J = selberg_integral(f, N, h, M, mode);
  const auto I = symmetry_integral(f, N, h, mode);
  if (J.q_exceeds_n) err << "warning: Q > N, outside the usual regime\n";
  print_header(out, c, N, h, mode);
  print_number(out, "M", M);
  print_number(out, "J", J.value);
  print_number(out, "I", I.value);
  const double nh2 = static_cast<double>(N) * static_cast<double>(h) * static_cast<double>(h);
  out << "ratio_J: " << fmt(J.value.approx() / nh2) << '\n';
  out << "ratio_I: " << fmt(I.value.approx() / nh2) << '\n';
  return kExitOk;
}

int cmd_correlate(const RunConfig& c, std::ostream& out) {
  const std::int64_t N = int_of(c, "N");
  const std::int64_t a_max = c.has("a_max") ? int_of(c, "a_max") : 3 * int_of(c, "h");
  const Mode mode = mode_of(c);
  const GFunction g = g_of(c);
  const std::size_t workers = worker_count();
  const SieveTable f = sieve_f(g, std::max<std::int64_t>(1, N + 1 - a_max), 2 * N + a_max, workers);
  auto table = build_correlation_table(f, N, a_max, mode, workers);
  if (mode == Mode::exact) decompose(table, g, workers);
  std::ofstream file;
  std::ostream& o = *open_output(c, out, file);
  o << (mode == Mode::exact ? "a,C,main,remainder\n" : "a,C\n");
  for (std::int64_t a = -a_max; a <= a_max; ++a) {
    o << a << ',' << table.direct(a).to_string();
    if (mode == Mode::exact) {
      if (a == 0)
        o << ",,";
      else
        o << ',' << to_string(table.main(a)) << ',' << to_string(table.remainder(a));
    }
    o << '\n';
  }
  return kExitOk;
}

void print_report(std::ostream& out, const ResidualReport& r, double cap) {
  out << "check: " << to_string(r.lemma) << '\n';
  print_number(out, "lhs", r.lhs);
  print_number(out, "rhs_main", r.rhs_main);
  print_number(out, "residual", r.residual);
  print_number(out, "normalizer", r.normalizer);
  out << "ratio: " << fmt(r.ratio) << '\n';
  out << "calibrated_cap: " << fmt(cap) << '\n';
}

int cmd_verify_calibration(std::ostream& out) {
  const auto cells = run_calibration(worker_count());
  out << "preset,N,h,Q,ratio_L1,ratio_L2,ratio_THM\n";
  bool zero_ok = true;
  for (const auto& cell : cells) {
    out << to_string(cell.preset) << ',' << cell.N << ',' << cell.h << ',' << cell.Q << ','
        << fmt(cell.lemma1.ratio) << ',' << fmt(cell.lemma2.ratio) << ','
        << fmt(cell.theorem.ratio) << '\n';
    if (cell.preset == GPreset::delta1)
      zero_ok = zero_ok && cell.lemma1.residual.exact() == 0 &&
                cell.lemma2.residual.exact() == 0 && cell.theorem.residual.exact() == 0;
  }
  const auto m = calibration_maxima(cells);
  const bool within = m.lemma1 <= kLemma1RatioCap && m.lemma2 <= kLemma2RatioCap &&
                      m.theorem <= kTheoremRatioCap;
  out << "max_L1: " << fmt(m.lemma1) << " cap " << fmt(kLemma1RatioCap) << '\n';
  out << "max_L2: " << fmt(m.lemma2) << " cap " << fmt(kLemma2RatioCap) << '\n';
  out << "max_THM: " << fmt(m.theorem) << " cap " << fmt(kTheoremRatioCap) << '\n';
  out << "delta1_residuals_zero: " << (zero_ok ? "yes" : "no") << '\n';
  out << "within_caps: " << (within ? "yes" : "no") << '\n';
  return within && zero_ok ? kExitOk : kExitInternal;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  if (c.target == "calibration") return cmd_verify_calibration(out);
  const std::int64_t N = int_of(c, "N"), h = int_of(c, "h");
  const Mode mode = mode_of(c);
  const GFunction g = g_of(c);
  const std::size_t workers = worker_count();
  const SieveTable f = sieve_f(g, 1, 2 * N + 3 * h, workers);
  print_header(out, c, N, h, mode);
  if (c.target == "lemma1") {
    print_report(out, check_lemma1(f, N, h, mode, workers), kLemma1RatioCap);
  } else if (c.target == "lemma2") {
    print_report(out, check_lemma2(f, N, h, mode, workers), kLemma2RatioCap);
  } else {
    print_report(out, check_theorem_I_rep(f, N, h, mode, workers), kTheoremRatioCap);
  }
  return kExitOk;
}

std::filesystem::path plot_path_for(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_filename(csv.stem().string() + "_plot.py");
  return p;
}

void print_trend(std::ostream& out, std::span<const ExperimentRecord> records) {
  std::vector<double> rj, ri;
  for (const auto& r : records) {
    rj.push_back(r.ratio_J);
    ri.push_back(r.ratio_I);
  }
  out << "increases_ratio_J: " << count_increases(rj) << '\n';
  out << "increases_ratio_I: " << count_increases(ri) << '\n';
}

int cmd_experiment(const RunConfig& c, std::ostream& out) {
  ExperimentConfig cfg;
  if (c.has("theta")) cfg.theta = parse_decimal("theta", c.params.at("theta"));
  if (c.has("lambda")) cfg.lambda = parse_decimal("lambda", c.params.at("lambda"));
  cfg.preset = preset_of(c);
  cfg.seed = seed_of(c);
  cfg.bound = bound_of(c);
  cfg.n_list = c.has("n_list") ? parse_n_list(c.params.at("n_list"))
                               : parse_n_list("2^14,2^15,2^16,2^17,2^18,2^19,2^20");
  cfg.mode = mode_of(c);
  cfg.workers = worker_count();
  const auto records = run_grid(cfg);

  const std::filesystem::path csv = c.params.at("out_path");
  if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
  {
    std::ofstream file(csv, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write '" + csv.string() + "'");
    write_records_csv(file, records);
  }
  out << "csv: " << csv.string() << '\n';
  if (records.size() >= 2) {
    const auto script = plot_path_for(csv);
    emit_plot_script(records, script, csv);
    out << "plot_script: " << script.string() << '\n';
  }
  out << "corollary_hypothesis: "
      << (corollary_hypothesis(cfg.theta, cfg.lambda) ? "inside" : "outside (record only)")
      << '\n';
  out << "N,h,Q,ratio_J,ratio_I\n";
  for (const auto& r : records)
    out << r.N << ',' << r.h << ',' << r.Q << ',' << fmt_short(r.ratio_J) << ','
        << fmt_short(r.ratio_I) << '\n';
  print_trend(out, records);
  return kExitOk;
}

int cmd_report(const RunConfig& c, std::ostream& out) {
  std::ifstream in(c.target, std::ios::binary);
  if (!in) throw ConfigError(kExitValidation, "cannot open '" + c.target + "'");
  std::vector<ExperimentRecord> records;
  try {
    records = read_records_csv(in);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(kExitValidation, c.target + ": " + e.what());
  }
  const bool exact = !records.empty() && records.front().J.is_exact();
  out << "records: " << records.size() << '\n';
  out << "exact: " << (exact ? "yes" : "no") << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%10s %6s %6s %12s %12s %12s %12s %12s\n", "N", "h", "Q",
                "ratio_J", "ratio_I", "resid_L1", "resid_L2", "resid_THM");
  out << line;
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%10lld %6lld %6lld %12.6g %12.6g %12.6g %12.6g %12.6g\n",
                  static_cast<long long>(r.N), static_cast<long long>(r.h),
                  static_cast<long long>(r.Q), r.ratio_J, r.ratio_I, r.resid_L1, r.resid_L2,
                  r.resid_THM);
    out << line;
  }
  print_trend(out, records);
  if (c.has("out_path")) {
    emit_plot_script(records, c.params.at("out_path"), c.target);
    out << "plot_script: " << c.params.at("out_path") << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  switch (c.command) {
    case Command::sieve: return cmd_sieve(c, out);
    case Command::kernels_selfcheck: return cmd_kernels(c, out);
    case Command::integrals: return cmd_integrals(c, out, err);
    case Command::correlate: return cmd_correlate(c, out);
    case Command::verify: return cmd_verify(c, out);
    case Command::experiment: return cmd_experiment(c, out);
    case Command::report: return cmd_report(c, out);
  }
  return kExitInternal;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = parse_config(args);
    return run(config, out, err);
  } catch (const ConfigError& e) {
    if (e.code() == kExitOk) {
      out << e.what();
      return kExitOk;
    }
    err << "sievelab: " << e.what() << '\n';
    return e.code();
  } catch (const std::invalid_argument& e) {
    err << "sievelab: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    err << "sievelab: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "sievelab: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace sievelab::cli
