#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "confclust/geometry.hpp"
#include "confclust/pipeline.hpp"

namespace confclust::cli {

enum ExitCode : int { kOk = 0, kPipelineFailure = 1, kUsageError = 2 };

/// Bad flag values or combinations; reported with exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::filesystem::path input;
  bool header = false;
  Method method = Method::kspheres;
  double alpha = 0.1;
  std::size_t k = 1;
  std::size_t k_min = 1;
  std::optional<std::size_t> k_max;
  std::size_t knn = 32;
  std::optional<double> level_quantile;  // defaults to 1 - alpha
  std::size_t mc_samples = 100000;
  std::size_t bootstrap = 0;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = ".";
  bool adaptive = false;
  ConnectivityRule rule = ConnectivityRule::geometric;
  bool corrected = false;
  std::size_t restarts = 10;
};

struct PlotConfig {
  std::filesystem::path dir = ".";
  std::optional<std::filesystem::path> svg;  // defaults to dir/plot.svg
};

/// Throws UsageError on an invalid configuration.
void validate(const RunConfig& config, bool range_required);

/// Fit one model: writes model.json, prediction_set.json, clustering.json,
/// volume.json and data.csv under out_dir.
int cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Volume curve over [k_min, k_max] (k_nn for levelset), optionally followed
/// by the bootstrap test: writes curve.json and decision.json and prints a table.
int cmd_select(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Render the artifacts of a fit (and curve.json when present) as SVG.
int cmd_plot(const PlotConfig& config, std::ostream& out, std::ostream& err);

/// Parse argv (subcommand first) and dispatch. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace confclust::cli
