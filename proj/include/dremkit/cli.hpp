#pragma once

#include "dremkit/excitation.hpp"
#include "dremkit/io.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dremkit::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalFailure = 2 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "DREMKIT_OUT_DIR";

/// Malformed or inconsistent configuration. The message names the file and
/// the JSON pointer (or line and column) at fault.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Identify, Ftc, PeCheck, Custom };

/// Windowed-Gramian check request.
struct PeCheckSpec {
  enum class Source { Counterexample, SinCos, Zero, Sinusoids };
  Source source = Source::SinCos;
  SignalKind kind = SignalKind::Continuous;
  std::optional<TimeGrid> grid;     // not used by the counterexample
  Index dimension = 2;              // zero source
  double window = 0.0;              // seconds (CT) or samples (DT)
  double threshold = 1e-3;
  std::vector<std::vector<nlohmann::json>> components;  // sinusoid source, validated
  CounterexampleOptions counterexample;
};

/// Channel description whose entries may reference the regressor.
struct ChannelSpec {
  Eigen::MatrixXd A;
  std::vector<nlohmann::json> b;
  std::vector<nlohmann::json> c;
  nlohmann::json feedthrough = 0.0;
  nlohmann::json delay_gain = 0.0;
  double delay = 0.0;
  Eigen::VectorXd x0;
};

/// User-defined regression y = phi^T theta with phi a sum of sinusoids.
struct CustomSpec {
  SignalKind kind = SignalKind::Continuous;
  TimeGrid grid = TimeGrid::spanning(0.0, 1e-3, 10.0);
  Eigen::VectorXd theta;
  std::vector<nlohmann::json> phi;  // one signal per component
  std::vector<ChannelSpec> bank;
  Index sliding_window = 0;         // DT alternative to `bank`
  double gradient_gamma = 1.0;
  Eigen::VectorXd drem_gamma = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd theta_hat0;
  bool feedforward = false;
  double tolerance = 0.01;
};

/// A validated configuration ready to run.
struct Plan {
  Mode mode = Mode::Identify;
  nlohmann::json canonical;  // the parsed document, used for the hash
  std::optional<std::pair<double, double>> window;  // emitted time range
  IdentificationConfig identify;
  std::vector<ChannelSpec> identify_bank;  // empty keeps the preset bank
  FtcScenarioConfig ftc;
  PeCheckSpec pe;
  CustomSpec custom;
};

/// Parses JSON text; `origin` prefixes diagnostics.
Plan parse_plan(const std::string& text, const std::string& origin);
Plan load_plan(const std::filesystem::path& path);

/// Figure identifiers accepted by `reproduce`, with their built-in configs.
const std::vector<std::pair<std::string, std::string>>& figure_presets();

/// Evaluates a signal entry (number, "sin", "cos", "phi:i" or a sinusoid
/// object) at time t. `phi` may be null when no regressor is available.
double eval_signal(const nlohmann::json& entry, double t, const Trajectory* phi);

OperatorBank materialize_bank(const std::vector<ChannelSpec>& specs, SignalKind kind, const Trajectory* phi);

/// Files produced by one run, before they are written.
struct RunOutput {
  std::vector<std::pair<std::string, io::CsvTable>> tables;
  std::vector<std::pair<std::string, std::string>> texts;
};

/// Runs a plan. Throws NumericalFailure for non-finite results.
RunOutput execute(const Plan& plan);

/// Writes every file plus manifest.json into `out` (created if missing).
void write_output(const std::filesystem::path& out, const RunOutput& output, const Plan& plan,
                  const std::string& command);

/// Output directory: `flag` if given, else $DREMKIT_OUT_DIR, else "dremkit_out".
std::filesystem::path resolve_out_dir(const std::string& flag);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string version();

}  // namespace dremkit::cli
