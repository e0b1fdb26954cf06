#pragma once

// Command-line front end: config parsing (flags over a key=value file),
// subcommand dispatch and report/plot-script emission.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sievelab/verify.hpp"

namespace sievelab::cli {

enum class Command { sieve, kernels_selfcheck, integrals, correlate, verify, experiment, report };

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view text);

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;

/// Carries the process exit code. Code 0 is used for --help, whose text is
/// the message.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

struct RunConfig {
  Command command = Command::sieve;
  std::string target;  // verify kind, or the CSV path for report
  std::map<std::string, std::string> params;

  bool has(const std::string& key) const { return params.count(key) != 0; }
};

/// Canonical parameter keys. Files may also use the lower-case or dashed
/// spellings of the flags (n, q, n-list, out, a-max).
std::span<const std::string_view> known_keys();

/// Flat key=value file, '#' starts a comment. Unknown keys are usage errors.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Arguments without the program name. Flags override values from --config.
/// Throws ConfigError with kExitUsage or kExitValidation.
RunConfig parse_config(const std::vector<std::string>& args);

/// Parsed forms of the numeric parameters; throw ConfigError(kExitValidation).
std::int64_t parse_integer(std::string_view key, std::string_view text);
double parse_decimal(std::string_view key, std::string_view text);
std::vector<std::int64_t> parse_n_list(std::string_view text);

/// Log-log plot of ratio_J and ratio_I against N, reading `csv_path`
/// relative to the script's own directory. Needs at least two records.
std::string plot_script_text(std::span<const ExperimentRecord> records,
                             const std::string& csv_relative, const std::string& png_name);
void emit_plot_script(std::span<const ExperimentRecord> records,
                      const std::filesystem::path& out_path, const std::filesystem::path& csv_path);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config + run with every error mapped to its exit code.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sievelab::cli
