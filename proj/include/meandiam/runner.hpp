#pragma once

// Command layer: each cmd_* runs the library on a built ExperimentConfig and
// returns every output file as an in-memory (name, content) pair, so tests
// can check byte-level determinism without touching the filesystem. Writing
// happens in one place at the end of the command.

#include <string>
#include <vector>

#include "meandiam/config.hpp"

namespace meandiam {

struct OutputFile {
  std::string name;
  std::string content;
};

struct CommandResult {
  std::vector<OutputFile> files;
  /// Human-readable summary block, printed to stdout by the CLI.
  std::vector<std::string> summary;
  /// 0 = holds/inconclusive, 1 = fails (config errors exit 2 before here).
  int exit_code = 0;
};

CommandResult cmd_diam(const ExperimentConfig& cfg);
CommandResult cmd_density(const ExperimentConfig& cfg);
CommandResult cmd_regularity(const ExperimentConfig& cfg);
CommandResult cmd_dme(const ExperimentConfig& cfg);
CommandResult cmd_suite(const ExperimentConfig& cfg);

/// Dispatch on cfg.command ("diam" | "density" | "regularity" | "dme" |
/// "suite"); throws ConfigError for anything else.
CommandResult run_command(const ExperimentConfig& cfg);

/// Create out_dir and write every file (the single-writer step).
void write_outputs(const CommandResult& res, const std::string& out_dir);

/// CLI flag overrides, pushed through every nested parameter block.
void override_threads(ExperimentConfig& cfg, int threads);
void override_seed(ExperimentConfig& cfg, unsigned seed);

}  // namespace meandiam
