#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace locrec::cli {

enum class Command { select, upsample, compare, converge, stability };

struct GridSpec {
  std::size_t nx = 51;
  std::size_t ny = 51;
  double xmin = -1.0;
  double xmax = 1.0;
  double ymin = -1.0;
  double ymax = 1.0;
};

/// Invalid configuration; field() names the offending flag.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  Command command = Command::upsample;
  double m = 3.0;
  int d = 2;
  double c = 1.0;
  std::optional<std::size_t> k_max;     // default Q (select: all offered points)
  double p2_threshold = 0.0;
  double progress_floor = 1.0e-13;
  std::optional<std::size_t> offer;     // default 5 Q (select: all points)
  std::optional<GridSpec> grid;         // default 51x51 (converge: 21x21) on [-1,1]^2
  std::optional<std::filesystem::path> eval_file;
  std::optional<std::filesystem::path> data_file;
  std::optional<std::size_t> random_n;  // default 100 when no data file is given
  std::uint64_t seed = 1;
  std::string function = "peaks";       // peaks | column
  std::vector<double> point;            // select: evaluation point, default origin
  std::vector<std::size_t> Ns;          // converge: nested set sizes
  std::optional<std::filesystem::path> out;
  unsigned threads = 0;

  /// Throws ConfigError for inconsistent or out-of-range settings.
  void validate() const;
};

/// Parses argv into a RunConfig. Returns std::nullopt after printing help.
/// Throws ConfigError for unusable input.
[[nodiscard]] std::optional<RunConfig> parse_command_line(int argc, const char* const* argv);

/// Runs one command: writes the CSV to config.out and a one-line summary to
/// `summary`. Returns the process exit status; errors are reported on `diag`.
int run(const RunConfig& config, std::ostream& summary, std::ostream& diag);

/// Formats a double with 17 significant digits.
[[nodiscard]] std::string format_number(double v);

}  // namespace locrec::cli
