#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace rnet::cli {

inline constexpr const char* kToolName = "rnet";
inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitConfig = 3;

/// Default output directory when --out is not given.
inline constexpr const char* kOutputDirEnv = "RNET_OUTPUT_DIR";

enum class Command { Resistance, Trace, Walk, Metric, Gasket, Converge };
enum class Format { Csv, Json };

struct ResistanceParams {
  std::filesystem::path net;
  std::vector<std::string> pairs;  // "x,y"
  bool all = false;
  std::vector<std::string> fuse;
};

struct TraceParams {
  std::filesystem::path net;
  std::vector<std::string> subset;
  std::optional<double> ball;
  std::string method = "schur";  // schur | hitting | both
};

struct WalkParams {
  std::filesystem::path net;
  std::string kind = "discrete";  // discrete | csrw
  std::optional<double> steps;
  std::optional<double> horizon;
  std::size_t samples = 1;
  std::vector<std::string> trace_subset;
  std::string report;  // "" | modulus | exit | coupling
  // exit
  std::optional<double> radius;
  std::vector<double> deltas;
  std::vector<double> lambdas;
  // modulus
  double alpha = 0.25;
  std::size_t lambda_points = 16;
};

struct MetricParams {
  std::filesystem::path space;
  std::optional<double> restrict_radius;
  std::optional<double> cover;
  std::string cover_mode = "exact";
  std::vector<double> entropy;  // alpha, m
  double scale = 1.0;
  std::optional<std::filesystem::path> prohorov;
  std::optional<std::filesystem::path> ghp;
};

struct GasketParams {
  int level = 0;
  int window = 0;
  std::string mode = "det";      // det | rand:lo,hi
  std::vector<int> convergence;  // m, N0, n...
  std::size_t seeds = 1;
};

struct ConvergeParams {
  std::vector<int> levels;
  int window = 0;
  std::string mode = "det";
  std::vector<double> radii;
  double alpha = 0.25;
  int m = 0;
};

using Parameters =
    std::variant<ResistanceParams, TraceParams, WalkParams, MetricParams, GasketParams, ConvergeParams>;

struct ExperimentConfig {
  Command command = Command::Resistance;
  Parameters params;
  std::uint64_t seed = 0;
  std::filesystem::path output;  // empty: $RNET_OUTPUT_DIR/<command>.<ext>, else stdout
  std::optional<Format> format;  // from --format, else the output extension
  unsigned workers = 1;
};

std::string to_string(Command command);

/// Canonical JSON of everything that affects results (not the output path or
/// worker count).
nlohmann::json config_to_json(const ExperimentConfig& config);

/// FNV-1a of the canonical config JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

struct ParseOutcome {
  std::optional<ExperimentConfig> config;
  int exit_code = kExitOk;  // meaningful when config is empty (help or error)
  std::string message;
};

/// Parses arguments (without the program name). Invalid flags or values give
/// exit code 3.
ParseOutcome parse_args(const std::vector<std::string>& args);

/// Executes the experiment and writes its artifact. Errors are reported on
/// `err` and mapped to exit codes: 1 computation, 2 I/O, 3 config.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rnet::cli
