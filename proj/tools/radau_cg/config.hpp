#pragma once

// Experiment configuration: a flat `key = value` file plus command-line
// overrides.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "radau/precision.hpp"
#include "radau/spectrum.hpp"
#include "radau/text_io.hpp"

namespace radau::cli {

enum class ProblemSource { model, matrix };

enum class RhsKind { ones, e1, file };

struct RhsChoice {
  RhsKind kind = RhsKind::ones;
  std::filesystem::path path;  ///< for RhsKind::file
};

struct ExperimentConfig {
  ProblemSource source = ProblemSource::model;
  ModelParameters model;
  std::filesystem::path matrix;
  /// Unset means e_1 for the model problem and the normalized ones vector
  /// for matrices.
  std::optional<RhsChoice> rhs;
  int digits = 0;
  std::vector<std::string> mu_specs;
  std::string tau = "0.25";
  std::size_t max_iters = 0;
  std::optional<std::string> stop_tolerance;
  std::filesystem::path out = ".";
  bool oracle = false;
  bool reorthogonalize = false;
  std::string marker_threshold = "0.5";

  PrecisionContext context() const { return PrecisionContext(digits); }
  RhsChoice rhs_or_default() const;
};

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<int> digits;
  std::vector<std::string> mu_specs;
  std::optional<std::string> tau;
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> max_iters;
  bool oracle = false;
};

/// Throws ParseError for unknown keys or malformed values. Relative paths
/// in the file are resolved against the file's directory.
ExperimentConfig parse_config(const KeyValueFile& kv, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

/// Writes every setting back as `key = value`.
KeyValueFile to_key_values(const ExperimentConfig& config);

RhsChoice parse_rhs(const std::string& text);
std::string to_string(const RhsChoice& rhs);

}  // namespace radau::cli
