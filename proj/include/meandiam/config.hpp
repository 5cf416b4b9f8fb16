#pragma once

// Experiment configuration: one human-writable JSON file describing the
// system (or factor maps), the Folner families, and every estimator scale.
// Parsing and building happen at load time so commands start from fully
// constructed objects; any syntax or semantic problem raises ConfigError
// with a 1-based line number into the config text.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "meandiam/equicontinuity.hpp"
#include "meandiam/factors.hpp"

namespace meandiam {

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& msg, int line_no)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
  int line = 0;
};

/// One mean-diameter target: a prepared point set with a provenance label.
struct DiamTask {
  NetSet set;
  std::string label;
};

/// One density target: a subset of Z^d given as a predicate.
struct DensityTask {
  GroupPredicate pred;
  std::string label;
};

/// One suite entry: the factor map plus fully resolved per-pair parameters.
struct SuitePair {
  FactorMap pi;
  std::string label;
  SuiteParams params;
};

enum class DmeVariant { point, global, mean_eq };
std::string to_string(DmeVariant v);

struct ExperimentConfig {
  /// Default command when the CLI is invoked without a subcommand.
  std::string command;
  std::string out_dir = "out";
  unsigned seed = 2026;
  int threads = 1;
  bool verbose = false;

  /// Base system for diam / density / dme commands.
  System system;
  /// Folner families; the first is primary. diam/density/dme run per family.
  std::vector<FolnerSequence> folner;
  EstimatorParams estimator;
  Mode mode = Mode::banach_sup;

  std::vector<DiamTask> diam_tasks;
  std::vector<DensityTask> density_tasks;

  /// Factor map under test for the regularity command.
  FactorMap factor;
  RegularityParams regularity;

  DmeVariant dme_variant = DmeVariant::global;
  DmeParams dme;
  std::optional<Point> dme_point;

  std::vector<SuitePair> suite_pairs;
};

/// Read and build the config file. Throws ConfigError on any problem.
ExperimentConfig load_config(const std::string& path);

/// Same from in-memory text (source_name only decorates diagnostics).
ExperimentConfig parse_config_text(const std::string& text, const std::string& source_name);

}  // namespace meandiam
